#include "trajkit/datagen.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "trajkit/errors.hpp"

using namespace trajkit;
namespace fs = std::filesystem;

namespace {

GeneratorSpec straight_spec(int num_points, double speed = 1.0) {
  GeneratorSpec g;
  g.kind = GeneratorKind::straight;
  g.num_points = num_points;
  g.speed = speed;
  return g;
}

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].t != b.points[i].t || a.points[i].x != b.points[i].x ||
        a.points[i].y != b.points[i].y || a.points[i].yaw != b.points[i].yaw) {
      return false;
    }
  }
  return true;
}

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

DatasetSpec small_dataset_spec() {
  DatasetSpec spec;
  spec.trajectories = 10;
  spec.mix = {{straight_spec(12), 1.0}};
  spec.n = 2;
  spec.m = 3;
  spec.stride = 1;
  spec.split_fraction = 0.2;
  spec.jitter = true;
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST_CASE("unit-speed straight line from the origin") {
  const Trajectory traj = generate_trajectory(straight_spec(4));
  REQUIRE_EQ(traj.size(), 4);
  for (int k = 0; k < 4; ++k) {
    CHECK_EQ(traj.points[k].t, k);
    CHECK_EQ(traj.points[k].x, static_cast<double>(k));
    CHECK_EQ(traj.points[k].y, 0.0);
    CHECK_EQ(traj.points[k].yaw, 0.0);
  }
}

TEST_CASE("straight trajectories are collinear for any heading") {
  GeneratorSpec g = straight_spec(25, 0.8);
  g.heading = 2.1;
  g.start_x = -4.0;
  g.start_y = 11.5;
  const Trajectory traj = generate_trajectory(g);
  const PathPoint& p0 = traj.points.front();
  const double dx = std::cos(g.heading);
  const double dy = std::sin(g.heading);
  for (const PathPoint& p : traj.points) {
    // cross product of (p - p0) with the heading direction
    CHECK_LE(std::abs((p.x - p0.x) * dy - (p.y - p0.y) * dx), 1e-9);
  }
}

TEST_CASE("arc chords match the circle-geometry identity") {
  for (double curvature : {0.1, -0.07}) {
    GeneratorSpec g;
    g.kind = GeneratorKind::arc;
    g.num_points = 30;
    g.speed = 0.7;
    g.curvature = curvature;
    g.heading = 0.4;
    const Trajectory traj = generate_trajectory(g);
    const double expected =
        2.0 * (1.0 / std::abs(curvature)) * std::sin(g.speed * std::abs(curvature) / 2.0);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      const double chord = std::hypot(traj.points[k + 1].x - traj.points[k].x,
                                      traj.points[k + 1].y - traj.points[k].y);
      CHECK_LE(std::abs(chord - expected), 1e-9);
    }
  }
}

TEST_CASE("zero curvature arcs degenerate to straight lines") {
  GeneratorSpec g;
  g.kind = GeneratorKind::arc;
  g.num_points = 5;
  g.curvature = 0.0;
  const Trajectory traj = generate_trajectory(g);
  for (int k = 0; k < 5; ++k) {
    CHECK_EQ(traj.points[k].x, static_cast<double>(k));
    CHECK_EQ(traj.points[k].y, 0.0);
  }
}

TEST_CASE("lane change sweeps the lateral offset monotonically to the amplitude") {
  GeneratorSpec g;
  g.kind = GeneratorKind::lane_change;
  g.num_points = 24;
  g.speed = 1.25;
  g.lateral_amplitude = 3.0;
  const Trajectory traj = generate_trajectory(g);
  for (int k = 0; k < g.num_points; ++k) {
    CHECK_EQ(traj.points[k].x, doctest::Approx(k * g.speed).epsilon(1e-12));
  }
  CHECK_LE(traj.points.front().y, 0.02 * g.lateral_amplitude);
  CHECK_GE(traj.points.back().y, 0.98 * g.lateral_amplitude);
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    CHECK_LE(traj.points[k].y, traj.points[k + 1].y);
  }
}

TEST_CASE("generation is deterministic in the seed, including noise and mixed kinds") {
  GeneratorSpec g;
  g.kind = GeneratorKind::mixed;
  g.num_points = 20;
  g.speed = 1.0;
  g.curvature = 0.05;
  g.lateral_amplitude = 2.0;
  g.noise_std = 0.1;
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    g.seed = seed;
    const Trajectory a = generate_trajectory(g);
    const Trajectory b = generate_trajectory(g);
    CHECK(same_trajectory(a, b));
    validate_trajectory(a);
  }
}

TEST_CASE("generator spec validation") {
  CHECK_THROWS_AS(generate_trajectory(straight_spec(1)), std::invalid_argument);
  GeneratorSpec g = straight_spec(5);
  g.speed = 0.0;
  CHECK_THROWS_AS(generate_trajectory(g), std::invalid_argument);
  g = straight_spec(5);
  g.noise_std = -0.5;
  CHECK_THROWS_AS(generate_trajectory(g), std::invalid_argument);
}

TEST_CASE("build_dataset splits at the trajectory level") {
  const DatasetSpec spec = small_dataset_spec();
  const Dataset ds = build_dataset(spec);
  // 12-point trajectories, n=2, m=3, stride 1: current indices 2..8, so 7
  // windows each; 8/2 trajectory split.
  CHECK_EQ(ds.train.size(), 8 * 7);
  CHECK_EQ(ds.val.size(), 2 * 7);

  const Dataset again = build_dataset(spec);
  REQUIRE_EQ(again.train.size(), ds.train.size());
  for (std::size_t i = 0; i < ds.train.size(); ++i) {
    CHECK_EQ(ds.train[i].current().x, again.train[i].current().x);
    CHECK_EQ(ds.train[i].current().y, again.train[i].current().y);
  }
}

TEST_CASE("minimal-length trajectories yield one window each") {
  DatasetSpec spec = small_dataset_spec();
  spec.mix = {{straight_spec(spec.n + spec.m + 1), 1.0}};
  const Dataset ds = build_dataset(spec);
  CHECK_EQ(ds.train.size() + ds.val.size(), static_cast<std::size_t>(spec.trajectories));
}

TEST_CASE("build_dataset error classes") {
  DatasetSpec spec = small_dataset_spec();
  spec.mix = {{straight_spec(4), 1.0}};  // shorter than n+m+1
  CHECK_THROWS_AS(build_dataset(spec), empty_dataset_error);

  spec = small_dataset_spec();
  spec.trajectories = 1;
  CHECK_THROWS_AS(build_dataset(spec), std::invalid_argument);

  spec = small_dataset_spec();
  spec.split_fraction = 1.0;
  CHECK_THROWS_AS(build_dataset(spec), std::invalid_argument);

  spec = small_dataset_spec();
  spec.mix.clear();
  CHECK_THROWS_AS(build_dataset(spec), std::invalid_argument);

  spec = small_dataset_spec();
  spec.mix[0].weight = 0.0;
  CHECK_THROWS_AS(build_dataset(spec), std::invalid_argument);
}

TEST_CASE("trajectory CSV round trips hand-built 9-digit values exactly") {
  Trajectory a;
  a.points = {{0, 1.5, -2.25, 0.0}, {1, 0.123456789, 1000000.125, -3.0}};
  Trajectory b;
  b.points = {{5, -0.000000001, 0.5, 0.25}, {6, 42.0, -17.75, 1.0}, {7, 43.0, -18.0, 1.0}};

  const fs::path path = temp_file("trajkit_csv_roundtrip.csv");
  write_trajectory_csv({a, b}, path.string());
  const auto loaded = read_trajectory_csv(path.string());
  fs::remove(path);

  REQUIRE_EQ(loaded.size(), 2);
  CHECK(same_trajectory(loaded[0], a));
  CHECK(same_trajectory(loaded[1], b));
}

TEST_CASE("write-read-write of a generated dataset is byte-stable") {
  const auto trajs = generate_trajectories(small_dataset_spec());
  const fs::path p1 = temp_file("trajkit_csv_gen1.csv");
  const fs::path p2 = temp_file("trajkit_csv_gen2.csv");
  write_trajectory_csv(trajs, p1.string());
  write_trajectory_csv(read_trajectory_csv(p1.string()), p2.string());
  CHECK_EQ(slurp(p1), slurp(p2));
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("interleaved ids are grouped and sorted by t") {
  const fs::path path = temp_file("trajkit_csv_interleaved.csv");
  {
    std::ofstream out(path);
    out << "traj_id,t,x,y,yaw\n"
        << "0,1,1.0,0.0,0.0\n"
        << "1,10,0.0,5.0,0.0\n"
        << "0,0,0.0,0.0,0.0\n"
        << "1,11,1.0,5.0,0.0\n"
        << "0,2,2.0,0.0,0.0\n"
        << "1,12,2.0,5.0,0.0\n";
  }
  const auto loaded = read_trajectory_csv(path.string());
  fs::remove(path);
  REQUIRE_EQ(loaded.size(), 2);
  REQUIRE_EQ(loaded[0].size(), 3);
  REQUIRE_EQ(loaded[1].size(), 3);
  CHECK_EQ(loaded[0].points[0].t, 0);
  CHECK_EQ(loaded[0].points[2].x, 2.0);
  CHECK_EQ(loaded[1].points[0].t, 10);
  CHECK_EQ(loaded[1].points[0].y, 5.0);
}

TEST_CASE("CSV parse errors name the offending line") {
  const fs::path path = temp_file("trajkit_csv_bad.csv");

  const auto write_and_read = [&](const std::string& content) {
    std::ofstream out(path);
    out << content;
    out.close();
    return read_trajectory_csv(path.string());
  };

  CHECK_THROWS_WITH_AS(write_and_read("traj_id,t,x,y,yaw\n0,0,0.0,0.0,0.0\n0,1,abc,0.0,0.0\n"),
                       doctest::Contains("line 3"), parse_error);
  CHECK_THROWS_WITH_AS(write_and_read("traj_id,t,x,y,yaw\n0,0,0.0,0.0\n"),
                       doctest::Contains("line 2"), parse_error);
  CHECK_THROWS_WITH_AS(
      write_and_read("traj_id,t,x,y,yaw\n0,0,0.0,0.0,0.0\n0,0,1.0,0.0,0.0\n"),
      doctest::Contains("duplicate"), parse_error);
  CHECK_THROWS_AS(write_and_read("id,t,x,y\n"), parse_error);
  CHECK_THROWS_AS(write_and_read("traj_id,t,x,y,yaw\n0,0,0.0,0.0,0.0\n0,2,1.0,0.0,0.0\n"),
                  validation_error);
  CHECK_THROWS_AS(write_and_read("traj_id,t,x,y,yaw\n0,0,0.0,0.0,0.0\n"), validation_error);
  fs::remove(path);
}

TEST_CASE("reading a missing file fails cleanly") {
  CHECK_THROWS_AS(read_trajectory_csv("/nonexistent/trajkit.csv"), std::runtime_error);
}
