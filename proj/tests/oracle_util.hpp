#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "trajkit/metrics.hpp"
#include "trajkit/rng.hpp"

// Brute-force reference values for the alignment metrics. Every monotone path
// is walked explicitly with no memoization, so these stay independent of the
// DP implementations they check. Feasible only for short sequences.

namespace testutil {

inline double oracle_euclid(trajkit::Vec2 a, trajkit::Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline void walk_alignments(const trajkit::PointSeq& a, const trajkit::PointSeq& b, std::size_t i,
                            std::size_t j, double sum_acc, double max_acc, double& best_sum,
                            double& best_max) {
  const double c = oracle_euclid(a[i], b[j]);
  const double sum = sum_acc + c;
  const double mx = std::max(max_acc, c);
  if (i == a.size() - 1 && j == b.size() - 1) {
    best_sum = std::min(best_sum, sum);
    best_max = std::min(best_max, mx);
    return;
  }
  if (i + 1 < a.size()) walk_alignments(a, b, i + 1, j, sum, mx, best_sum, best_max);
  if (j + 1 < b.size()) walk_alignments(a, b, i, j + 1, sum, mx, best_sum, best_max);
  if (i + 1 < a.size() && j + 1 < b.size()) {
    walk_alignments(a, b, i + 1, j + 1, sum, mx, best_sum, best_max);
  }
}

inline double brute_force_dtw(const trajkit::PointSeq& a, const trajkit::PointSeq& b) {
  double best_sum = std::numeric_limits<double>::infinity();
  double best_max = std::numeric_limits<double>::infinity();
  walk_alignments(a, b, 0, 0, 0.0, 0.0, best_sum, best_max);
  return best_sum;
}

inline double brute_force_frechet(const trajkit::PointSeq& a, const trajkit::PointSeq& b) {
  double best_sum = std::numeric_limits<double>::infinity();
  double best_max = std::numeric_limits<double>::infinity();
  walk_alignments(a, b, 0, 0, 0.0, 0.0, best_sum, best_max);
  return best_max;
}

// Short sequences on a half-unit grid around the origin.
inline trajkit::PointSeq random_short_seq(std::mt19937_64& rng, std::size_t max_len = 5) {
  const std::size_t len = 1 + static_cast<std::size_t>(rng() % max_len);
  trajkit::PointSeq seq(len);
  for (trajkit::Vec2& p : seq) {
    p.x = 0.5 * static_cast<double>(static_cast<int>(rng() % 9) - 4);
    p.y = 0.5 * static_cast<double>(static_cast<int>(rng() % 9) - 4);
  }
  return seq;
}

}  // namespace testutil
