#pragma once

#include <cstdint>
#include <vector>

namespace trajkit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

// One vehicle pose sample at tick t (equal time intervals). yaw is carried for
// data generation and serialization; the transforms below never read it.
struct PathPoint {
  std::int64_t t = 0;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

struct Trajectory {
  std::vector<PathPoint> points;

  std::size_t size() const { return points.size(); }
};

// n+1 past points with the current point last, plus m future ground-truth
// points. past and future together carry consecutive ticks.
struct TrainingSample {
  std::vector<PathPoint> past;
  std::vector<PathPoint> future;

  const PathPoint& current() const { return past.back(); }
  std::size_t horizon() const { return future.size(); }
};

// Ordered per-step displacements (dx, dy); the model's output and target space.
struct DeltaSequence {
  std::vector<Vec2> deltas;

  std::size_t size() const { return deltas.size(); }
};

// Throw validation_error on non-finite coordinates or non-consecutive ticks.
void validate_trajectory(const Trajectory& traj);
void validate_sample(const TrainingSample& sample);

// Every window whose current index i satisfies n <= i <= len-m-1, stepping by
// stride, in trajectory order. A trajectory too short for a single window
// yields an empty result; out-of-range n/m/stride throws std::invalid_argument.
std::vector<TrainingSample> extract_windows(const Trajectory& traj, int n, int m, int stride);

// Future points relative to the current point: (x_t - x_0, y_t - y_0).
std::vector<Vec2> to_relative(const TrainingSample& sample);

// Per-step increments (x_t - x_{t-1}, y_t - y_{t-1}), anchored at the current
// point for t = 1.
DeltaSequence to_deltas(const TrainingSample& sample);

// Increment targets re-anchored against the running sum of the model's own
// predicted increments: entry 1 is (x_1 - x_0, y_1 - y_0); entry t is
// (x_t - (x_0 + sum_{i<t} dx_i'), y_t - (y_0 + sum_{i<t} dy_i')). The result
// is plain values; nothing links it back to `predicted` for optimization.
DeltaSequence residual_chain_targets(const TrainingSample& sample, const DeltaSequence& predicted);

// Absolute points from cumulative increments: point t is
// (x_0 + sum_{i<=t} dx_i, y_0 + sum_{i<=t} dy_i).
std::vector<Vec2> recover_absolute(const PathPoint& current, const DeltaSequence& deltas);

}  // namespace trajkit
