#pragma once

#include <string>
#include <vector>

#include "trajkit/traj_core.hpp"

namespace trajkit {

// How model outputs are interpreted as targets and recovered to absolute
// points:
//   relative       - outputs are coordinates relative to the current point
//   delta          - outputs are per-step increments, targets from ground truth
//   residual_chain - per-step increments, targets re-anchored to the model's
//                    own running prediction
enum class Scheme { relative, delta, residual_chain };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme scheme);

// Per-epoch losses: training loss in the scheme's target space plus train and
// validation losses on recovered absolute coordinates.
struct LossReport {
  int epoch = 0;
  double train_delta_loss = 0.0;
  double train_abs_loss = 0.0;
  double val_abs_loss = 0.0;
  Scheme scheme = Scheme::relative;
};

// (1/2m) sum |x_t - x_t'| + |y_t - y_t'|.
double l1_loss(const std::vector<Vec2>& truth, const std::vector<Vec2>& pred);

// (1/2m) sum (x_t - x_t')^2 + (y_t - y_t')^2.
double l2_loss(const std::vector<Vec2>& truth, const std::vector<Vec2>& pred);

struct LossValueGrad {
  double value = 0.0;
  std::vector<Vec2> grad;  // d value / d predicted entry
};

// Squared loss in the output space, with its gradient w.r.t. the predictions.
// Targets are constants: no gradient flows into them.
LossValueGrad delta_training_loss(const DeltaSequence& targets, const DeltaSequence& predicted);

// L1 counterpart, selectable as an alternative training objective.
LossValueGrad l1_training_loss(const DeltaSequence& targets, const DeltaSequence& predicted);

// Absolute points implied by `predicted` under `scheme`: relative adds each
// output pair to the current point, delta and residual_chain accumulate.
std::vector<Vec2> recover_for_scheme(const TrainingSample& sample, const DeltaSequence& predicted,
                                     Scheme scheme);

// l2_loss between the sample's future points and the recovered points.
double evaluate_absolute(const TrainingSample& sample, const DeltaSequence& predicted,
                         Scheme scheme);

}  // namespace trajkit
