#pragma once

#include <vector>

#include "trajkit/traj_core.hpp"

// Polyline and sequence distances for comparing a predicted path against the
// ground-truth path. Evaluation only; never used as a training objective.

namespace trajkit {

using PointSeq = std::vector<Vec2>;

// Mean Euclidean distance over index-paired points. Equal lengths required.
double ade(const PointSeq& a, const PointSeq& b);

// Euclidean distance between the final points.
double fde(const PointSeq& a, const PointSeq& b);

// Dynamic time warping: minimum cumulative Euclidean cost over monotone
// alignments with steps (i-1,j), (i,j-1), (i-1,j-1); endpoints matched.
// Un-normalized (no path-length division).
double dtw(const PointSeq& a, const PointSeq& b);

// Discrete Frechet distance: minimax paired distance over monotone couplings.
double frechet_discrete(const PointSeq& a, const PointSeq& b);

// max over both directions of (max over one set of min distance to the other).
double hausdorff(const PointSeq& a, const PointSeq& b);

// Mean of min distances a->b plus mean of min distances b->a.
double chamfer(const PointSeq& a, const PointSeq& b);

}  // namespace trajkit
