// trajkit CLI: generate synthetic trajectory datasets, train a planner under a
// chosen target scheme, compare schemes, and evaluate a checkpoint.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajkit/errors.hpp"
#include "trajkit/harness.hpp"

namespace fs = std::filesystem;
using namespace trajkit;

namespace {

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    if (end > start) out.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"trajectory-learning toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string checkpoint_path;
  std::string data_path;
  std::string metrics_arg;
  std::string scheme_a = "relative";
  std::string scheme_b = "residual_chain";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment config");
    cmd->add_option("--seed", seed, "override the config's dataset and SGD seeds");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* generate = app.add_subcommand("generate", "write the dataset's trajectories to CSV");
  add_common(generate);

  CLI::App* train = app.add_subcommand("train", "train one model; writes loss CSV and checkpoint");
  add_common(train);

  CLI::App* compare =
      app.add_subcommand("compare", "train two schemes on the same data and summarize");
  add_common(compare);
  compare->add_option("--scheme-a", scheme_a, "baseline scheme (relative|delta|residual_chain)");
  compare->add_option("--scheme-b", scheme_b, "candidate scheme");

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "run metrics for a checkpoint on a CSV");
  add_common(evaluate_cmd);
  evaluate_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  evaluate_cmd->add_option("--data", data_path, "trajectory CSV")->required();
  evaluate_cmd->add_option("--metrics", metrics_arg,
                           "comma-separated subset of ade,fde,dtw,frechet,hausdorff,chamfer");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig config =
      config_path.empty() ? default_experiment_config() : load_experiment_config(config_path);
  const bool seed_given =
      generate->count("--seed") || train->count("--seed") || compare->count("--seed") ||
      evaluate_cmd->count("--seed");
  if (seed_given) {
    config.dataset.seed = seed;
    config.sgd.seed = seed;
  }
  if (!out_dir.empty()) config.output_dir = out_dir;

  if (generate->parsed()) {
    const auto trajs = generate_trajectories(config.dataset);
    fs::create_directories(config.output_dir);
    const fs::path path = fs::path(config.output_dir) / "trajectories.csv";
    write_trajectory_csv(trajs, path.string());
    std::cout << "wrote " << trajs.size() << " trajectories to " << path.string() << "\n";
    return 0;
  }

  if (train->parsed()) {
    const TrainResult result = train_one(config);
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    const fs::path loss_path = dir / ("loss_" + to_string(config.scheme) + ".csv");
    write_loss_csv(result.reports, loss_path.string());
    save_trained(result, config, (dir / "checkpoint.json").string());
    const LossReport& last = result.reports.back();
    std::cout << "scheme " << to_string(config.scheme) << ": train_delta_loss "
              << last.train_delta_loss << ", train_abs_loss " << last.train_abs_loss
              << ", val_abs_loss " << last.val_abs_loss << " after " << last.epoch << " epochs\n"
              << "wrote " << loss_path.string() << " and checkpoint.json\n";
    return 0;
  }

  if (compare->parsed()) {
    ExperimentConfig config_a = config;
    ExperimentConfig config_b = config;
    config_a.scheme = scheme_from_string(scheme_a);
    config_b.scheme = scheme_from_string(scheme_b);
    const ComparisonResult result = compare_schemes(config_a, config_b);
    write_comparison(result, config.output_dir);
    std::cout << to_string(result.scheme_a) << " final val_abs_loss " << result.final_val_a
              << "; " << to_string(result.scheme_b) << " final val_abs_loss "
              << result.final_val_b << "; ratio " << result.ratio_b_over_a << "\n";
    if (!result.improved) {
      std::cout << "WARNING: " << to_string(result.scheme_b) << " did not improve on "
                << to_string(result.scheme_a) << " for this seed\n";
    }
    std::cout << "wrote loss curves and summary.csv to " << config.output_dir << "\n";
    return 0;
  }

  // evaluate
  const LoadedModel model = load_trained(checkpoint_path);
  const auto trajs = read_trajectory_csv(data_path);
  std::vector<TrainingSample> samples;
  for (const Trajectory& traj : trajs) {
    auto windows = extract_windows(traj, model.n, model.m, model.stride);
    samples.insert(samples.end(), std::make_move_iterator(windows.begin()),
                   std::make_move_iterator(windows.end()));
  }
  if (samples.empty()) {
    throw empty_dataset_error(data_path + ": no trajectory long enough for one window (need " +
                              std::to_string(model.n + model.m + 1) + " points)");
  }
  const std::vector<std::string> names =
      metrics_arg.empty() ? config.eval_metrics : split_csv_list(metrics_arg);
  const auto rows = evaluate(model.params, model.stats, model.scheme, samples, names);
  fs::create_directories(config.output_dir);
  const fs::path path = fs::path(config.output_dir) / "metrics.csv";
  write_metrics_csv(rows, path.string());
  for (const MetricRow& row : rows) std::cout << row.name << " " << row.value << "\n";
  std::cout << "wrote " << path.string() << " (" << samples.size() << " samples)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const empty_dataset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
