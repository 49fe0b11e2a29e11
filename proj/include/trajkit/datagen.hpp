#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/traj_core.hpp"

// Synthetic trajectory families with known kinematics, plus CSV ingestion and
// export for externally logged poses.

namespace trajkit {

enum class GeneratorKind { straight, arc, lane_change, mixed };

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::straight;
  int num_points = 40;
  double speed = 1.0;             // meters per tick
  double curvature = 0.0;         // 1/meters, arcs only
  double lateral_amplitude = 0.0; // meters, lane change only
  double noise_std = 0.0;         // additive Gaussian position noise, meters
  double heading = 0.0;           // initial direction, radians
  double start_x = 0.0;
  double start_y = 0.0;
  std::uint64_t seed = 0;
};

void validate(const GeneratorSpec& spec);

// One generator template plus its sampling weight. The template's own seed is
// ignored inside a dataset; per-trajectory seeds derive from the master seed.
struct GeneratorMixEntry {
  GeneratorSpec generator;
  double weight = 1.0;
};

struct DatasetSpec {
  int trajectories = 200;
  std::vector<GeneratorMixEntry> mix;
  int n = 4;       // past points before the current one
  int m = 6;       // future points to predict
  int stride = 1;  // window step
  double split_fraction = 0.2;  // fraction of trajectories held out for validation
  bool jitter = true;           // per-trajectory heading/speed/shape variation
  std::uint64_t seed = 0;
};

void validate(const DatasetSpec& spec);

// Deterministic in the spec (seed included). straight: fixed heading at
// constant speed; arc: points sampled exactly on the circle of radius
// 1/curvature with tick arc length = speed; lane_change: longitudinal advance
// with a sigmoid lateral offset. Gaussian noise is added after the nominal
// path; yaw records the nominal heading. kind = mixed draws one of the three
// families with jittered parameters.
Trajectory generate_trajectory(const GeneratorSpec& spec);

// The dataset's trajectories before windowing, one derived RNG stream per
// index so generation order does not matter.
std::vector<Trajectory> generate_trajectories(const DatasetSpec& spec);

struct Dataset {
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> val;
};

// Windows every trajectory and splits at the trajectory level, so overlapping
// windows never straddle the train/val boundary. Throws empty_dataset_error
// when either split ends up with zero windows.
Dataset build_dataset(const DatasetSpec& spec);

// CSV schema: header "traj_id,t,x,y,yaw"; integer traj_id and t; x, y, yaw
// with 9 fractional digits. Rows may arrive interleaved across ids; each id's
// rows are sorted by t and must form a consecutive tick sequence.
std::vector<Trajectory> read_trajectory_csv(const std::string& path);
void write_trajectory_csv(const std::vector<Trajectory>& trajs, const std::string& path);

}  // namespace trajkit
