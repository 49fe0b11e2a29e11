#include "trajkit/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace trajkit {

Scheme scheme_from_string(const std::string& name) {
  if (name == "relative") return Scheme::relative;
  if (name == "delta") return Scheme::delta;
  if (name == "residual_chain") return Scheme::residual_chain;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::relative: return "relative";
    case Scheme::delta: return "delta";
    case Scheme::residual_chain: return "residual_chain";
  }
  throw std::invalid_argument("unknown scheme tag");
}

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* who) {
  if (a != b) {
    throw std::invalid_argument(std::string(who) + ": length mismatch " + std::to_string(a) +
                                " vs " + std::to_string(b));
  }
  if (a == 0) {
    throw std::invalid_argument(std::string(who) + ": sequences must be non-empty");
  }
}

}  // namespace

double l1_loss(const std::vector<Vec2>& truth, const std::vector<Vec2>& pred) {
  require_same_length(truth.size(), pred.size(), "l1_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sum += std::abs(truth[i].x - pred[i].x) + std::abs(truth[i].y - pred[i].y);
  }
  return sum / (2.0 * static_cast<double>(truth.size()));
}

double l2_loss(const std::vector<Vec2>& truth, const std::vector<Vec2>& pred) {
  require_same_length(truth.size(), pred.size(), "l2_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double dx = truth[i].x - pred[i].x;
    const double dy = truth[i].y - pred[i].y;
    sum += dx * dx + dy * dy;
  }
  return sum / (2.0 * static_cast<double>(truth.size()));
}

LossValueGrad delta_training_loss(const DeltaSequence& targets, const DeltaSequence& predicted) {
  require_same_length(targets.size(), predicted.size(), "delta_training_loss");
  const double m = static_cast<double>(targets.size());
  LossValueGrad out;
  out.grad.resize(targets.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double rx = targets.deltas[i].x - predicted.deltas[i].x;
    const double ry = targets.deltas[i].y - predicted.deltas[i].y;
    sum += rx * rx + ry * ry;
    out.grad[i] = {-rx / m, -ry / m};
  }
  out.value = sum / (2.0 * m);
  return out;
}

LossValueGrad l1_training_loss(const DeltaSequence& targets, const DeltaSequence& predicted) {
  require_same_length(targets.size(), predicted.size(), "l1_training_loss");
  const double m = static_cast<double>(targets.size());
  LossValueGrad out;
  out.grad.resize(targets.size());
  double sum = 0.0;
  auto sign = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double rx = targets.deltas[i].x - predicted.deltas[i].x;
    const double ry = targets.deltas[i].y - predicted.deltas[i].y;
    sum += std::abs(rx) + std::abs(ry);
    out.grad[i] = {-sign(rx) / (2.0 * m), -sign(ry) / (2.0 * m)};
  }
  out.value = sum / (2.0 * m);
  return out;
}

std::vector<Vec2> recover_for_scheme(const TrainingSample& sample, const DeltaSequence& predicted,
                                     Scheme scheme) {
  require_same_length(sample.future.size(), predicted.size(), "recover_for_scheme");
  switch (scheme) {
    case Scheme::relative: {
      const PathPoint& c = sample.current();
      std::vector<Vec2> out;
      out.reserve(predicted.size());
      for (const Vec2& d : predicted.deltas) out.push_back({c.x + d.x, c.y + d.y});
      return out;
    }
    case Scheme::delta:
    case Scheme::residual_chain:
      return recover_absolute(sample.current(), predicted);
  }
  throw std::invalid_argument("unknown scheme tag");
}

double evaluate_absolute(const TrainingSample& sample, const DeltaSequence& predicted,
                         Scheme scheme) {
  const std::vector<Vec2> recovered = recover_for_scheme(sample, predicted, scheme);
  std::vector<Vec2> truth;
  truth.reserve(sample.future.size());
  for (const PathPoint& p : sample.future) truth.push_back({p.x, p.y});
  return l2_loss(truth, recovered);
}

}  // namespace trajkit
