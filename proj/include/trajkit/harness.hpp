#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/datagen.hpp"
#include "trajkit/loss.hpp"
#include "trajkit/mlp.hpp"

// Training loop, scheme comparison experiment, evaluation reporting, and the
// file formats behind the CLI.

namespace trajkit {

enum class Objective { l2, l1 };

Objective objective_from_string(const std::string& name);
std::string to_string(Objective objective);

struct ModelSpec {
  std::vector<int> hidden = {64, 64};
  Activation activation = Activation::tanh_fn;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  ModelSpec model;
  SgdConfig sgd;
  Scheme scheme = Scheme::residual_chain;
  Objective objective = Objective::l2;
  std::vector<std::string> eval_metrics = {"ade", "fde", "dtw", "frechet", "hausdorff", "chamfer"};
  std::string output_dir = "out";
};

void validate(const ExperimentConfig& config);

// The stock desk-scale experiment: 200 mixed arc/lane-change trajectories of
// 40 points with 5 cm position noise, 4 past + 6 future windows, a 64-64 tanh
// network, lr 1e-3, momentum 0.9, batch 32, 200 epochs, 80/20 split.
ExperimentConfig default_experiment_config();

// JSON config round trip. Missing fields fall back to the defaults above; a
// document holding only a DatasetSpec is accepted (treated as {"dataset": ...}).
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& config);

// FNV-1a over the canonical JSON form, 16 hex digits. The scheme field is
// excluded when ignore_scheme, so both sides of a comparison share one hash.
std::string config_hash(const ExperimentConfig& config, bool ignore_scheme);

// Scheme-specific target construction; residual_chain requires the model's
// predictions for this sample, the other schemes ignore them.
DeltaSequence make_targets(const TrainingSample& sample, Scheme scheme,
                           const DeltaSequence* predicted = nullptr);

struct TrainResult {
  ModelParams params;
  FeatureStats stats;
  std::vector<LossReport> reports;
};

// Deterministic given the config. Throws divergence_error naming epoch and
// batch if the loss or a gradient goes non-finite.
TrainResult train_one(const ExperimentConfig& config);

struct ComparisonResult {
  Scheme scheme_a = Scheme::relative;
  Scheme scheme_b = Scheme::residual_chain;
  std::vector<LossReport> reports_a;
  std::vector<LossReport> reports_b;
  double final_val_a = 0.0;
  double final_val_b = 0.0;
  double ratio_b_over_a = 0.0;
  bool improved = false;  // final_val_b <= final_val_a
  std::string config_hash;
};

// Trains both configs, which must be identical apart from the scheme.
ComparisonResult compare_schemes(const ExperimentConfig& a, const ExperimentConfig& b);

// Loss-curve CSV: header epoch,train_delta_loss,train_abs_loss,val_abs_loss,
// one row per epoch, 9 fractional digits.
void write_loss_csv(const std::vector<LossReport>& reports, const std::string& path);

// Writes loss_a_<scheme>.csv, loss_b_<scheme>.csv and summary.csv under
// out_dir (created if needed).
void write_comparison(const ComparisonResult& result, const std::string& out_dir);

struct MetricRow {
  std::string name;
  double value = 0.0;
};

// Mean of each selected metric over the samples, computed between each
// sample's future points and the model's recovered absolute predictions.
// Unknown metric names throw std::invalid_argument.
std::vector<MetricRow> evaluate(const ModelParams& params, const FeatureStats& stats,
                                Scheme scheme, const std::vector<TrainingSample>& samples,
                                const std::vector<std::string>& metric_names);

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::string& path);

// Checkpoint bridging; scheme and window parameters ride in the metadata.
void save_trained(const TrainResult& result, const ExperimentConfig& config,
                  const std::string& path);

struct LoadedModel {
  ModelParams params;
  FeatureStats stats;
  Scheme scheme = Scheme::residual_chain;
  int n = 0;
  int m = 1;
  int stride = 1;
};

LoadedModel load_trained(const std::string& path);

}  // namespace trajkit
