#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trajkit/traj_core.hpp"

// Feedforward planner: hand-implemented forward pass, reverse-mode gradients,
// and SGD with classical momentum. 64-bit floats throughout so gradients can
// be checked against finite differences.

namespace trajkit {

enum class Activation { tanh_fn, relu };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation act);

// Row-major dense matrix, rows x cols.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// weights[l] maps layer l activations (cols) to layer l+1 pre-activations
// (rows); hidden layers apply `activation`, the output layer is linear.
struct ModelParams {
  std::vector<int> layer_sizes;
  std::vector<Mat> weights;
  std::vector<std::vector<double>> biases;
  Activation activation = Activation::tanh_fn;
};

// Throws std::invalid_argument if shapes do not chain or entries are non-finite.
void validate(const ModelParams& params);

struct SgdConfig {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 200;
  std::uint64_t seed = 0;
};

void validate(const SgdConfig& config);

// Same shapes as the parameters they differentiate.
struct Gradients {
  std::vector<Mat> weights;
  std::vector<std::vector<double>> biases;
};

Gradients zero_gradients(const ModelParams& params);
void add_scaled(Gradients& acc, const Gradients& g, double scale);

// Momentum velocities, carried between sgd_step calls.
struct SgdState {
  std::vector<Mat> weight_velocity;
  std::vector<std::vector<double>> bias_velocity;
};

SgdState zero_state(const ModelParams& params);

// Per-dimension mean and standard deviation, frozen at training start.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

FeatureStats fit_feature_stats(const std::vector<std::vector<double>>& features);
std::vector<double> standardize(const std::vector<double>& features, const FeatureStats& stats);

// Past-pose coordinates relative to the current point, oldest first; the
// current point contributes the trailing (0, 0). Length 2(n+1).
std::vector<double> featurize(const TrainingSample& sample);

// Xavier-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
ModelParams init_params(const std::vector<int>& layer_sizes, std::uint64_t seed,
                        Activation activation = Activation::tanh_fn);

// Affine-then-activation chain; returns the raw output vector.
std::vector<double> forward_raw(const ModelParams& params, const std::vector<double>& features);

// forward_raw reshaped into (dx, dy) pairs; output size must be even.
DeltaSequence forward(const ModelParams& params, const std::vector<double>& features);

// Exact reverse-mode gradients of the forward map composed with the supplied
// gradient w.r.t. the raw output.
Gradients backward(const ModelParams& params, const std::vector<double>& features,
                   const std::vector<double>& loss_grad_wrt_output);

// v <- momentum * v + g; p <- p - learning_rate * v.
// Throws divergence_error on non-finite gradient entries.
void sgd_step(ModelParams& params, const Gradients& grads, const SgdConfig& config,
              SgdState& state);

// Self-describing model container. `metadata` carries caller-defined string
// pairs (the harness stores scheme and window parameters there). Doubles
// round-trip exactly.
struct Checkpoint {
  ModelParams params;
  FeatureStats stats;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace trajkit
