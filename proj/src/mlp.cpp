#include "trajkit/mlp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "trajkit/errors.hpp"
#include "trajkit/rng.hpp"

namespace trajkit {

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh_fn;
  if (name == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + name);
}

std::string to_string(Activation act) {
  switch (act) {
    case Activation::tanh_fn: return "tanh";
    case Activation::relu: return "relu";
  }
  throw std::invalid_argument("unknown activation tag");
}

void validate(const ModelParams& params) {
  const std::size_t layers = params.layer_sizes.size();
  if (layers < 2) throw std::invalid_argument("model needs at least input and output layers");
  for (int s : params.layer_sizes) {
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  if (params.weights.size() != layers - 1 || params.biases.size() != layers - 1) {
    throw std::invalid_argument("weight/bias count does not match layer count");
  }
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const auto rows = static_cast<std::size_t>(params.layer_sizes[l + 1]);
    const auto cols = static_cast<std::size_t>(params.layer_sizes[l]);
    if (params.weights[l].rows != rows || params.weights[l].cols != cols ||
        params.weights[l].a.size() != rows * cols || params.biases[l].size() != rows) {
      throw std::invalid_argument("layer " + std::to_string(l) + " shape mismatch");
    }
    for (double v : params.weights[l].a) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite weight");
    }
    for (double v : params.biases[l]) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite bias");
    }
  }
}

void validate(const SgdConfig& config) {
  if (!(config.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw std::invalid_argument("momentum must be in [0, 1)");
  }
  if (config.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
}

Gradients zero_gradients(const ModelParams& params) {
  Gradients g;
  g.weights.reserve(params.weights.size());
  g.biases.reserve(params.biases.size());
  for (const Mat& w : params.weights) g.weights.emplace_back(w.rows, w.cols);
  for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

void add_scaled(Gradients& acc, const Gradients& g, double scale) {
  if (acc.weights.size() != g.weights.size()) {
    throw std::invalid_argument("add_scaled: layer count mismatch");
  }
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    for (std::size_t i = 0; i < g.weights[l].a.size(); ++i) {
      acc.weights[l].a[i] += scale * g.weights[l].a[i];
    }
    for (std::size_t i = 0; i < g.biases[l].size(); ++i) {
      acc.biases[l][i] += scale * g.biases[l][i];
    }
  }
}

SgdState zero_state(const ModelParams& params) {
  SgdState s;
  for (const Mat& w : params.weights) s.weight_velocity.emplace_back(w.rows, w.cols);
  for (const auto& b : params.biases) s.bias_velocity.emplace_back(b.size(), 0.0);
  return s;
}

FeatureStats fit_feature_stats(const std::vector<std::vector<double>>& features) {
  if (features.empty()) throw std::invalid_argument("fit_feature_stats: no feature vectors");
  const std::size_t dim = features.front().size();
  FeatureStats stats;
  stats.mean.assign(dim, 0.0);
  stats.stddev.assign(dim, 0.0);
  for (const auto& f : features) {
    if (f.size() != dim) throw std::invalid_argument("fit_feature_stats: ragged features");
    for (std::size_t i = 0; i < dim; ++i) stats.mean[i] += f[i];
  }
  const double count = static_cast<double>(features.size());
  for (std::size_t i = 0; i < dim; ++i) stats.mean[i] /= count;
  for (const auto& f : features) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = f[i] - stats.mean[i];
      stats.stddev[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const double sd = std::sqrt(stats.stddev[i] / count);
    // Constant dimensions (the current point is always at the origin) pass
    // through unscaled.
    stats.stddev[i] = sd > 1e-12 ? sd : 1.0;
  }
  return stats;
}

std::vector<double> standardize(const std::vector<double>& features, const FeatureStats& stats) {
  if (features.size() != stats.mean.size()) {
    throw std::invalid_argument("standardize: dimension mismatch");
  }
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    out[i] = (features[i] - stats.mean[i]) / stats.stddev[i];
  }
  return out;
}

std::vector<double> featurize(const TrainingSample& sample) {
  validate_sample(sample);
  const PathPoint& c = sample.current();
  std::vector<double> out;
  out.reserve(2 * sample.past.size());
  for (const PathPoint& p : sample.past) {
    out.push_back(p.x - c.x);
    out.push_back(p.y - c.y);
  }
  return out;
}

ModelParams init_params(const std::vector<int>& layer_sizes, std::uint64_t seed,
                        Activation activation) {
  ModelParams params;
  params.layer_sizes = layer_sizes;
  params.activation = activation;
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("init_params: need at least input and output layers");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("init_params: bad layer size");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Mat w(static_cast<std::size_t>(fan_out), static_cast<std::size_t>(fan_in));
    for (double& v : w.a) v = uniform_in(rng, -limit, limit);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
  }
  return params;
}

namespace {

double apply_activation(Activation act, double z) {
  switch (act) {
    case Activation::tanh_fn: return std::tanh(z);
    case Activation::relu: return z > 0.0 ? z : 0.0;
  }
  return z;
}

// Derivative expressed through the activation value a = act(z).
double activation_grad(Activation act, double a) {
  switch (act) {
    case Activation::tanh_fn: return 1.0 - a * a;
    case Activation::relu: return a > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

// activations[0] is the input; activations[l+1] the output of weight layer l.
std::vector<std::vector<double>> forward_pass(const ModelParams& params,
                                              const std::vector<double>& features) {
  const std::size_t num_layers = params.weights.size();
  if (features.size() != static_cast<std::size_t>(params.layer_sizes.front())) {
    throw std::invalid_argument("forward: feature length " + std::to_string(features.size()) +
                                " != input size " + std::to_string(params.layer_sizes.front()));
  }
  std::vector<std::vector<double>> activations(num_layers + 1);
  activations[0] = features;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const Mat& w = params.weights[l];
    const std::vector<double>& in = activations[l];
    std::vector<double>& out = activations[l + 1];
    out.resize(w.rows);
    const bool output_layer = (l + 1 == num_layers);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double z = params.biases[l][r];
      const double* row = &w.a[r * w.cols];
      for (std::size_t c = 0; c < w.cols; ++c) z += row[c] * in[c];
      out[r] = output_layer ? z : apply_activation(params.activation, z);
    }
  }
  return activations;
}

}  // namespace

std::vector<double> forward_raw(const ModelParams& params, const std::vector<double>& features) {
  return forward_pass(params, features).back();
}

DeltaSequence forward(const ModelParams& params, const std::vector<double>& features) {
  std::vector<double> raw = forward_raw(params, features);
  if (raw.size() % 2 != 0) {
    throw std::invalid_argument("forward: output size must be even to form (dx, dy) pairs");
  }
  DeltaSequence out;
  out.deltas.reserve(raw.size() / 2);
  for (std::size_t i = 0; i < raw.size(); i += 2) {
    out.deltas.push_back({raw[i], raw[i + 1]});
  }
  return out;
}

Gradients backward(const ModelParams& params, const std::vector<double>& features,
                   const std::vector<double>& loss_grad_wrt_output) {
  const std::size_t num_layers = params.weights.size();
  const auto activations = forward_pass(params, features);
  if (loss_grad_wrt_output.size() != activations.back().size()) {
    throw std::invalid_argument("backward: output gradient length mismatch");
  }

  Gradients grads = zero_gradients(params);
  std::vector<double> delta = loss_grad_wrt_output;  // output layer is linear
  for (std::size_t l = num_layers; l-- > 0;) {
    const Mat& w = params.weights[l];
    const std::vector<double>& in = activations[l];
    for (std::size_t r = 0; r < w.rows; ++r) {
      grads.biases[l][r] = delta[r];
      double* grow = &grads.weights[l].a[r * w.cols];
      for (std::size_t c = 0; c < w.cols; ++c) grow[c] = delta[r] * in[c];
    }
    if (l == 0) break;
    std::vector<double> prev(w.cols, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
      const double* row = &w.a[r * w.cols];
      for (std::size_t c = 0; c < w.cols; ++c) prev[c] += row[c] * delta[r];
    }
    // activations[l] is the output of a hidden layer here.
    for (std::size_t c = 0; c < w.cols; ++c) {
      prev[c] *= activation_grad(params.activation, in[c]);
    }
    delta = std::move(prev);
  }
  return grads;
}

void sgd_step(ModelParams& params, const Gradients& grads, const SgdConfig& config,
              SgdState& state) {
  validate(config);
  if (grads.weights.size() != params.weights.size() ||
      state.weight_velocity.size() != params.weights.size()) {
    throw std::invalid_argument("sgd_step: layer count mismatch");
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (grads.weights[l].a.size() != params.weights[l].a.size() ||
        grads.biases[l].size() != params.biases[l].size()) {
      throw std::invalid_argument("sgd_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    }
    for (double v : grads.weights[l].a) {
      if (!std::isfinite(v)) throw divergence_error("non-finite weight gradient");
    }
    for (double v : grads.biases[l]) {
      if (!std::isfinite(v)) throw divergence_error("non-finite bias gradient");
    }
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    for (std::size_t i = 0; i < params.weights[l].a.size(); ++i) {
      double& v = state.weight_velocity[l].a[i];
      v = config.momentum * v + grads.weights[l].a[i];
      params.weights[l].a[i] -= config.learning_rate * v;
    }
    for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
      double& v = state.bias_velocity[l][i];
      v = config.momentum * v + grads.biases[l][i];
      params.biases[l][i] -= config.learning_rate * v;
    }
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  validate(checkpoint.params);
  nlohmann::json j;
  j["format"] = "trajkit-checkpoint-v1";
  j["model"]["layer_sizes"] = checkpoint.params.layer_sizes;
  j["model"]["activation"] = to_string(checkpoint.params.activation);
  nlohmann::json weights = nlohmann::json::array();
  for (const Mat& w : checkpoint.params.weights) weights.push_back(w.a);
  j["model"]["weights"] = std::move(weights);
  j["model"]["biases"] = checkpoint.params.biases;
  j["feature_stats"]["mean"] = checkpoint.stats.mean;
  j["feature_stats"]["stddev"] = checkpoint.stats.stddev;
  j["metadata"] = checkpoint.metadata;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint for write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  try {
    Checkpoint ck;
    ck.params.layer_sizes = j.at("model").at("layer_sizes").get<std::vector<int>>();
    ck.params.activation = activation_from_string(j.at("model").at("activation").get<std::string>());
    const auto& weights = j.at("model").at("weights");
    for (std::size_t l = 0; l + 1 < ck.params.layer_sizes.size(); ++l) {
      Mat w(static_cast<std::size_t>(ck.params.layer_sizes[l + 1]),
            static_cast<std::size_t>(ck.params.layer_sizes[l]));
      w.a = weights.at(l).get<std::vector<double>>();
      ck.params.weights.push_back(std::move(w));
    }
    ck.params.biases = j.at("model").at("biases").get<std::vector<std::vector<double>>>();
    ck.stats.mean = j.at("feature_stats").at("mean").get<std::vector<double>>();
    ck.stats.stddev = j.at("feature_stats").at("stddev").get<std::vector<double>>();
    if (j.contains("metadata")) {
      ck.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    }
    validate(ck.params);
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": malformed checkpoint: " + e.what());
  }
}

}  // namespace trajkit
