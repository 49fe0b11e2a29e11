#include "trajkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace trajkit {

namespace {

double euclid(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void require_nonempty(const PointSeq& a, const PointSeq& b, const char* who) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument(std::string(who) + ": sequences must be non-empty");
  }
}

double min3(double a, double b, double c) {
  return std::min(a, std::min(b, c));
}

}  // namespace

double ade(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "ade");
  if (a.size() != b.size()) {
    throw std::invalid_argument("ade: length mismatch " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += euclid(a[i], b[i]);
  return sum / static_cast<double>(a.size());
}

double fde(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "fde");
  return euclid(a.back(), b.back());
}

double dtw(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "dtw");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> d(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * m + j]; };

  at(0, 0) = euclid(a[0], b[0]);
  for (std::size_t i = 1; i < n; ++i) at(i, 0) = euclid(a[i], b[0]) + at(i - 1, 0);
  for (std::size_t j = 1; j < m; ++j) at(0, j) = euclid(a[0], b[j]) + at(0, j - 1);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < m; ++j) {
      at(i, j) = euclid(a[i], b[j]) + min3(at(i - 1, j), at(i, j - 1), at(i - 1, j - 1));
    }
  }
  return at(n - 1, m - 1);
}

double frechet_discrete(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "frechet_discrete");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> d(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * m + j]; };

  at(0, 0) = euclid(a[0], b[0]);
  for (std::size_t i = 1; i < n; ++i) at(i, 0) = std::max(euclid(a[i], b[0]), at(i - 1, 0));
  for (std::size_t j = 1; j < m; ++j) at(0, j) = std::max(euclid(a[0], b[j]), at(0, j - 1));
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < m; ++j) {
      at(i, j) = std::max(euclid(a[i], b[j]), min3(at(i - 1, j), at(i, j - 1), at(i - 1, j - 1)));
    }
  }
  return at(n - 1, m - 1);
}

namespace {

double directed_max_min(const PointSeq& a, const PointSeq& b) {
  double worst = 0.0;
  for (const Vec2& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : b) best = std::min(best, euclid(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

double mean_min(const PointSeq& a, const PointSeq& b) {
  double sum = 0.0;
  for (const Vec2& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : b) best = std::min(best, euclid(p, q));
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

}  // namespace

double hausdorff(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "hausdorff");
  return std::max(directed_max_min(a, b), directed_max_min(b, a));
}

double chamfer(const PointSeq& a, const PointSeq& b) {
  require_nonempty(a, b, "chamfer");
  return mean_min(a, b) + mean_min(b, a);
}

}  // namespace trajkit
