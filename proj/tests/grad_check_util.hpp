#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "trajkit/loss.hpp"
#include "trajkit/mlp.hpp"
#include "trajkit/rng.hpp"

// Central finite differences over every parameter of the network composed with
// the squared training loss; the independent oracle for backward().

namespace testutil {

// Max guarded relative error between analytic and finite-difference gradients.
// Entries whose absolute disagreement is below the finite-difference noise
// floor (1e-8) count as zero error.
inline double max_grad_check_error(const trajkit::ModelParams& params,
                                   const std::vector<double>& features,
                                   const trajkit::DeltaSequence& targets) {
  using trajkit::delta_training_loss;
  using trajkit::forward;

  const auto loss_at = [&](const trajkit::ModelParams& p) {
    return delta_training_loss(targets, forward(p, features)).value;
  };

  const trajkit::LossValueGrad lv = delta_training_loss(targets, forward(params, features));
  std::vector<double> grad_out(2 * lv.grad.size());
  for (std::size_t k = 0; k < lv.grad.size(); ++k) {
    grad_out[2 * k] = lv.grad[k].x;
    grad_out[2 * k + 1] = lv.grad[k].y;
  }
  const trajkit::Gradients analytic = trajkit::backward(params, features, grad_out);

  const double h = 1e-6;
  double worst = 0.0;
  trajkit::ModelParams probe = params;
  const auto check_entry = [&](double& entry, double analytic_value) {
    const double orig = entry;
    entry = orig + h;
    const double up = loss_at(probe);
    entry = orig - h;
    const double down = loss_at(probe);
    entry = orig;
    const double fd = (up - down) / (2.0 * h);
    const double diff = std::abs(fd - analytic_value);
    if (diff <= 1e-8) return;
    worst = std::max(worst, diff / std::max(std::abs(fd), std::abs(analytic_value)));
  };

  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    for (std::size_t i = 0; i < probe.weights[l].a.size(); ++i) {
      check_entry(probe.weights[l].a[i], analytic.weights[l].a[i]);
    }
    for (std::size_t i = 0; i < probe.biases[l].size(); ++i) {
      check_entry(probe.biases[l][i], analytic.biases[l][i]);
    }
  }
  return worst;
}

// Small random architecture with an even output, parameters drawn fresh.
inline trajkit::ModelParams random_model(std::mt19937_64& rng) {
  std::vector<int> sizes;
  sizes.push_back(2 + static_cast<int>(rng() % 5));
  const int hidden_layers = static_cast<int>(rng() % 3);
  for (int l = 0; l < hidden_layers; ++l) sizes.push_back(2 + static_cast<int>(rng() % 4));
  sizes.push_back(2 * (1 + static_cast<int>(rng() % 3)));
  return trajkit::init_params(sizes, rng());
}

}  // namespace testutil
