#include "trajkit/traj_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trajkit/errors.hpp"

namespace trajkit {

namespace {

void check_point(const PathPoint& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.yaw)) {
    throw validation_error("non-finite coordinate at t=" + std::to_string(p.t));
  }
}

}  // namespace

void validate_trajectory(const Trajectory& traj) {
  if (traj.points.size() < 2) {
    throw validation_error("trajectory needs at least 2 points, got " +
                           std::to_string(traj.points.size()));
  }
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    check_point(traj.points[i]);
    if (i > 0 && traj.points[i].t != traj.points[i - 1].t + 1) {
      throw validation_error("non-consecutive t: " + std::to_string(traj.points[i - 1].t) +
                             " followed by " + std::to_string(traj.points[i].t));
    }
  }
}

void validate_sample(const TrainingSample& sample) {
  if (sample.past.empty()) throw validation_error("sample has empty past");
  if (sample.future.empty()) throw validation_error("sample has empty future");
  std::int64_t prev_t = sample.past.front().t - 1;
  for (const auto* part : {&sample.past, &sample.future}) {
    for (const PathPoint& p : *part) {
      check_point(p);
      if (p.t != prev_t + 1) {
        throw validation_error("non-consecutive t in sample: " + std::to_string(prev_t) +
                               " followed by " + std::to_string(p.t));
      }
      prev_t = p.t;
    }
  }
}

std::vector<TrainingSample> extract_windows(const Trajectory& traj, int n, int m, int stride) {
  if (n < 0) throw std::invalid_argument("extract_windows: n must be >= 0");
  if (m < 1) throw std::invalid_argument("extract_windows: m must be >= 1");
  if (stride < 1) throw std::invalid_argument("extract_windows: stride must be >= 1");

  const auto& pts = traj.points;
  const auto len = static_cast<std::int64_t>(pts.size());
  std::vector<TrainingSample> out;
  for (std::int64_t i = n; i <= len - m - 1; i += stride) {
    TrainingSample s;
    s.past.assign(pts.begin() + (i - n), pts.begin() + i + 1);
    s.future.assign(pts.begin() + i + 1, pts.begin() + i + 1 + m);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Vec2> to_relative(const TrainingSample& sample) {
  validate_sample(sample);
  const PathPoint& c = sample.current();
  std::vector<Vec2> out;
  out.reserve(sample.future.size());
  for (const PathPoint& p : sample.future) {
    out.push_back({p.x - c.x, p.y - c.y});
  }
  return out;
}

DeltaSequence to_deltas(const TrainingSample& sample) {
  validate_sample(sample);
  DeltaSequence out;
  out.deltas.reserve(sample.future.size());
  double px = sample.current().x;
  double py = sample.current().y;
  for (const PathPoint& p : sample.future) {
    out.deltas.push_back({p.x - px, p.y - py});
    px = p.x;
    py = p.y;
  }
  return out;
}

DeltaSequence residual_chain_targets(const TrainingSample& sample, const DeltaSequence& predicted) {
  validate_sample(sample);
  const std::size_t m = sample.future.size();
  if (predicted.size() != m) {
    throw std::invalid_argument("residual_chain_targets: predicted length " +
                                std::to_string(predicted.size()) + " != horizon " +
                                std::to_string(m));
  }
  DeltaSequence out;
  out.deltas.reserve(m);
  // Running sum of predicted increments, one step behind t. Accumulation order
  // matches recover_absolute so the two agree bit for bit.
  double sx = sample.current().x;
  double sy = sample.current().y;
  for (std::size_t t = 0; t < m; ++t) {
    out.deltas.push_back({sample.future[t].x - sx, sample.future[t].y - sy});
    sx += predicted.deltas[t].x;
    sy += predicted.deltas[t].y;
  }
  return out;
}

std::vector<Vec2> recover_absolute(const PathPoint& current, const DeltaSequence& deltas) {
  std::vector<Vec2> out;
  out.reserve(deltas.size());
  double sx = current.x;
  double sy = current.y;
  for (const Vec2& d : deltas.deltas) {
    if (!std::isfinite(d.x) || !std::isfinite(d.y)) {
      throw std::invalid_argument("recover_absolute: non-finite delta");
    }
    sx += d.x;
    sy += d.y;
    out.push_back({sx, sy});
  }
  return out;
}

}  // namespace trajkit
