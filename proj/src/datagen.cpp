#include "trajkit/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "trajkit/errors.hpp"
#include "trajkit/rng.hpp"

namespace trajkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

GeneratorKind generator_kind_from_string(const std::string& name) {
  if (name == "straight") return GeneratorKind::straight;
  if (name == "arc") return GeneratorKind::arc;
  if (name == "lane_change") return GeneratorKind::lane_change;
  if (name == "mixed") return GeneratorKind::mixed;
  throw std::invalid_argument("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::straight: return "straight";
    case GeneratorKind::arc: return "arc";
    case GeneratorKind::lane_change: return "lane_change";
    case GeneratorKind::mixed: return "mixed";
  }
  throw std::invalid_argument("unknown generator kind tag");
}

void validate(const GeneratorSpec& spec) {
  if (spec.num_points < 2) throw std::invalid_argument("num_points must be >= 2");
  if (!(spec.speed > 0.0) || !std::isfinite(spec.speed)) {
    throw std::invalid_argument("speed must be positive and finite");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    throw std::invalid_argument("noise_std must be >= 0 and finite");
  }
  if (!std::isfinite(spec.curvature)) throw std::invalid_argument("curvature must be finite");
  if (!std::isfinite(spec.lateral_amplitude)) {
    throw std::invalid_argument("lateral_amplitude must be finite");
  }
  if (!std::isfinite(spec.heading) || !std::isfinite(spec.start_x) ||
      !std::isfinite(spec.start_y)) {
    throw std::invalid_argument("heading and start must be finite");
  }
}

void validate(const DatasetSpec& spec) {
  if (spec.trajectories < 1) throw std::invalid_argument("trajectories must be >= 1");
  if (spec.mix.empty()) throw std::invalid_argument("generator mix must be non-empty");
  double total = 0.0;
  for (const GeneratorMixEntry& e : spec.mix) {
    validate(e.generator);
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("mix weights must be non-negative and finite");
    }
    total += e.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("mix weights must not all be zero");
  if (spec.n < 0) throw std::invalid_argument("n must be >= 0");
  if (spec.m < 1) throw std::invalid_argument("m must be >= 1");
  if (spec.stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (!(spec.split_fraction > 0.0 && spec.split_fraction < 1.0)) {
    throw std::invalid_argument("split_fraction must be in (0, 1)");
  }
}

namespace {

// Randomized heading and kinematic scales for dataset diversity. Every draw
// happens unconditionally so the stream layout does not depend on the kind.
GeneratorSpec jitter_params(const GeneratorSpec& base, std::mt19937_64& rng) {
  GeneratorSpec g = base;
  g.heading = base.heading + uniform_in(rng, -kPi, kPi);
  g.speed = base.speed * uniform_in(rng, 0.8, 1.2);
  const double curv_scale = uniform_in(rng, 0.5, 1.5);
  const double curv_sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  g.curvature = base.curvature * curv_scale * curv_sign;
  const double amp_scale = uniform_in(rng, 0.5, 1.5);
  const double amp_sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  g.lateral_amplitude = base.lateral_amplitude * amp_scale * amp_sign;
  return g;
}

std::vector<PathPoint> nominal_straight(const GeneratorSpec& g) {
  std::vector<PathPoint> pts(g.num_points);
  const double cos_h = std::cos(g.heading);
  const double sin_h = std::sin(g.heading);
  for (int k = 0; k < g.num_points; ++k) {
    const double s = static_cast<double>(k) * g.speed;
    pts[k] = {k, g.start_x + s * cos_h, g.start_y + s * sin_h, g.heading};
  }
  return pts;
}

std::vector<PathPoint> nominal_arc(const GeneratorSpec& g) {
  if (std::abs(g.curvature) < 1e-12) return nominal_straight(g);
  std::vector<PathPoint> pts(g.num_points);
  const double r = 1.0 / g.curvature;  // signed; center sits on the left for positive curvature
  const double cx = g.start_x - r * std::sin(g.heading);
  const double cy = g.start_y + r * std::cos(g.heading);
  const double ox = g.start_x - cx;
  const double oy = g.start_y - cy;
  const double step = g.speed * g.curvature;  // heading advance per tick
  for (int k = 0; k < g.num_points; ++k) {
    const double a = static_cast<double>(k) * step;
    const double c = std::cos(a);
    const double s = std::sin(a);
    pts[k] = {k, cx + c * ox - s * oy, cy + s * ox + c * oy, g.heading + a};
  }
  return pts;
}

std::vector<PathPoint> nominal_lane_change(const GeneratorSpec& g) {
  std::vector<PathPoint> pts(g.num_points);
  const double cos_h = std::cos(g.heading);
  const double sin_h = std::sin(g.heading);
  // Sigmoid argument sweeps -4..4 across the trajectory, so the offset settles
  // near 0 at the start and near lateral_amplitude at the end.
  const double denom = static_cast<double>(g.num_points - 1);
  for (int k = 0; k < g.num_points; ++k) {
    const double s = static_cast<double>(k) * g.speed;
    const double u = 8.0 * (static_cast<double>(k) / denom - 0.5);
    const double lat = g.lateral_amplitude / (1.0 + std::exp(-u));
    pts[k] = {k, g.start_x + s * cos_h - lat * sin_h, g.start_y + s * sin_h + lat * cos_h, 0.0};
  }
  for (int k = 0; k + 1 < g.num_points; ++k) {
    pts[k].yaw = std::atan2(pts[k + 1].y - pts[k].y, pts[k + 1].x - pts[k].x);
  }
  pts[g.num_points - 1].yaw = pts[g.num_points - 2].yaw;
  return pts;
}

}  // namespace

Trajectory generate_trajectory(const GeneratorSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  GeneratorSpec eff = spec;
  if (spec.kind == GeneratorKind::mixed) {
    const int pick = std::min(2, static_cast<int>(uniform01(rng) * 3.0));
    eff.kind = pick == 0   ? GeneratorKind::straight
               : pick == 1 ? GeneratorKind::arc
                           : GeneratorKind::lane_change;
    eff = jitter_params(eff, rng);
  }

  Trajectory traj;
  switch (eff.kind) {
    case GeneratorKind::straight: traj.points = nominal_straight(eff); break;
    case GeneratorKind::arc: traj.points = nominal_arc(eff); break;
    case GeneratorKind::lane_change: traj.points = nominal_lane_change(eff); break;
    case GeneratorKind::mixed: throw std::logic_error("unresolved mixed kind");
  }
  if (spec.noise_std > 0.0) {
    for (PathPoint& p : traj.points) {
      p.x += spec.noise_std * normal01(rng);
      p.y += spec.noise_std * normal01(rng);
    }
  }
  return traj;
}

std::vector<Trajectory> generate_trajectories(const DatasetSpec& spec) {
  validate(spec);
  double total = 0.0;
  for (const GeneratorMixEntry& e : spec.mix) total += e.weight;

  std::vector<Trajectory> out(static_cast<std::size_t>(spec.trajectories));
  for (int i = 0; i < spec.trajectories; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    std::mt19937_64 rng(derive_seed(spec.seed, idx * 2));
    const double u = uniform01(rng) * total;
    std::size_t chosen = 0;
    double cum = 0.0;
    for (std::size_t j = 0; j < spec.mix.size(); ++j) {
      cum += spec.mix[j].weight;
      if (u < cum) {
        chosen = j;
        break;
      }
      chosen = j;  // fall through to the last non-zero entry on rounding
    }
    GeneratorSpec g = spec.mix[chosen].generator;
    if (spec.jitter && g.kind != GeneratorKind::mixed) g = jitter_params(g, rng);
    g.seed = derive_seed(spec.seed, idx * 2 + 1);
    out[static_cast<std::size_t>(i)] = generate_trajectory(g);
  }
  return out;
}

Dataset build_dataset(const DatasetSpec& spec) {
  validate(spec);
  if (spec.trajectories < 2) {
    throw std::invalid_argument("need at least 2 trajectories for a trajectory-level split");
  }
  const std::vector<Trajectory> trajs = generate_trajectories(spec);

  std::vector<std::size_t> idx(trajs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 split_rng(derive_seed(spec.seed, 0xffffffffffffffffULL));
  shuffle_inplace(idx, split_rng);

  const auto total = static_cast<long long>(trajs.size());
  long long val_count = std::llround(spec.split_fraction * static_cast<double>(total));
  val_count = std::max(1LL, std::min(total - 1, val_count));

  std::vector<std::size_t> val_ids(idx.begin(), idx.begin() + val_count);
  std::vector<std::size_t> train_ids(idx.begin() + val_count, idx.end());
  std::sort(val_ids.begin(), val_ids.end());
  std::sort(train_ids.begin(), train_ids.end());

  Dataset ds;
  for (std::size_t id : train_ids) {
    auto windows = extract_windows(trajs[id], spec.n, spec.m, spec.stride);
    ds.train.insert(ds.train.end(), std::make_move_iterator(windows.begin()),
                    std::make_move_iterator(windows.end()));
  }
  for (std::size_t id : val_ids) {
    auto windows = extract_windows(trajs[id], spec.n, spec.m, spec.stride);
    ds.val.insert(ds.val.end(), std::make_move_iterator(windows.begin()),
                  std::make_move_iterator(windows.end()));
  }
  if (ds.train.empty() || ds.val.empty()) {
    throw empty_dataset_error(std::string("dataset spec yields zero ") +
                              (ds.train.empty() ? "training" : "validation") +
                              " windows (trajectories too short for n+m+1 points?)");
  }
  return ds;
}

namespace {

long long parse_int_field(std::string_view field, std::size_t lineno, const char* column) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw parse_error("line " + std::to_string(lineno) + ": bad integer in column " + column +
                      ": '" + std::string(field) + "'");
  }
  return v;
}

double parse_double_field(std::string_view field, std::size_t lineno, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw parse_error("line " + std::to_string(lineno) + ": bad number in column " + column +
                      ": '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) {
    throw parse_error("line " + std::to_string(lineno) + ": non-finite value in column " + column);
  }
  return v;
}

constexpr std::string_view kCsvHeader = "traj_id,t,x,y,yaw";

}  // namespace

std::vector<Trajectory> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw parse_error(path + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw parse_error("line 1: expected header '" + std::string(kCsvHeader) + "', got '" + line +
                      "'");
  }

  std::vector<long long> id_order;
  std::unordered_map<long long, std::vector<PathPoint>> groups;
  std::unordered_map<long long, std::unordered_set<long long>> seen_ticks;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::string_view rest(line);
    std::string_view fields[5];
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = comma == std::string_view::npos ? rest : rest.substr(0, comma);
      if (count < 5) fields[count] = field;
      ++count;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (count != 5) {
      throw parse_error("line " + std::to_string(lineno) + ": expected 5 fields, got " +
                        std::to_string(count));
    }

    const long long id = parse_int_field(fields[0], lineno, "traj_id");
    PathPoint p;
    p.t = parse_int_field(fields[1], lineno, "t");
    p.x = parse_double_field(fields[2], lineno, "x");
    p.y = parse_double_field(fields[3], lineno, "y");
    p.yaw = parse_double_field(fields[4], lineno, "yaw");

    auto [it, inserted] = seen_ticks[id].insert(p.t);
    (void)it;
    if (!inserted) {
      throw parse_error("line " + std::to_string(lineno) + ": duplicate (traj_id, t) = (" +
                        std::to_string(id) + ", " + std::to_string(p.t) + ")");
    }
    if (groups.find(id) == groups.end()) id_order.push_back(id);
    groups[id].push_back(p);
  }

  std::vector<Trajectory> out;
  out.reserve(id_order.size());
  for (long long id : id_order) {
    std::vector<PathPoint>& pts = groups[id];
    std::sort(pts.begin(), pts.end(), [](const PathPoint& a, const PathPoint& b) { return a.t < b.t; });
    if (pts.size() < 2) {
      throw validation_error("traj_id " + std::to_string(id) + ": needs at least 2 points");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].t != pts[i - 1].t + 1) {
        throw validation_error("traj_id " + std::to_string(id) + ": non-consecutive t " +
                               std::to_string(pts[i - 1].t) + " -> " + std::to_string(pts[i].t));
      }
    }
    out.push_back(Trajectory{std::move(pts)});
  }
  return out;
}

void write_trajectory_csv(const std::vector<Trajectory>& trajs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << kCsvHeader << "\n";
  char buf[512];
  for (std::size_t id = 0; id < trajs.size(); ++id) {
    validate_trajectory(trajs[id]);
    for (const PathPoint& p : trajs[id].points) {
      const int len = std::snprintf(buf, sizeof buf, "%zu,%lld,%.9f,%.9f,%.9f\n", id,
                                    static_cast<long long>(p.t), p.x, p.y, p.yaw);
      if (len < 0 || len >= static_cast<int>(sizeof buf)) {
        throw std::runtime_error("row formatting overflow");
      }
      out.write(buf, len);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace trajkit
