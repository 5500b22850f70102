#include <cmath>
#include <utility>

#include "rlr/boosting.hpp"
#include "rlr/error.hpp"

namespace rlr {

namespace {

using Mat3 = std::array<std::array<long double, 3>, 3>;
using Vec3 = std::array<long double, 3>;

// Gaussian elimination with partial pivoting.
Vec3 solve3(Mat3 a, Vec3 b) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0L) throw ArgumentError("ridge system is singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < 3; ++r) {
      long double factor = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  Vec3 x{};
  for (int r = 2; r >= 0; --r) {
    long double acc = b[r];
    for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  return {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5)};
}

NormalEquations build_normal_equations(std::span<const CountFeature> features, std::span<const double> gradients,
                                       double lambda) {
  if (features.empty()) throw ArgumentError("ridge fit needs at least one example");
  if (features.size() != gradients.size()) throw ArgumentError("features and gradients differ in length");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("lambda must be a positive finite number");

  NormalEquations eq;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const long double c[3] = {features[i].bias, static_cast<long double>(features[i].t),
                              static_cast<long double>(features[i].f)};
    for (int r = 0; r < 3; ++r) {
      for (int k = r; k < 3; ++k) eq.lhs[r][k] += c[r] * c[k];
      eq.rhs[r] += c[r] * gradients[i];
    }
  }
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < r; ++k) eq.lhs[r][k] = eq.lhs[k][r];
    eq.lhs[r][r] += lambda;
  }
  return eq;
}

RidgeFit solve_ridge(std::span<const CountFeature> features, std::span<const double> gradients, double lambda) {
  NormalEquations eq = build_normal_equations(features, gradients, lambda);
  Vec3 w = solve3(eq.lhs, eq.rhs);
  // One round of iterative refinement.
  Vec3 residual{};
  for (int r = 0; r < 3; ++r) {
    residual[r] = eq.rhs[r];
    for (int c = 0; c < 3; ++c) residual[r] -= eq.lhs[r][c] * w[c];
  }
  Vec3 correction = solve3(eq.lhs, residual);
  for (int r = 0; r < 3; ++r) w[r] += correction[r];

  RidgeFit fit;
  for (int r = 0; r < 3; ++r) fit.weights[r] = static_cast<double>(w[r]);
  long double score = 0.0L;
  for (std::size_t i = 0; i < features.size(); ++i) {
    long double pred = fit.weights[0] * static_cast<long double>(features[i].bias) +
                       fit.weights[1] * static_cast<long double>(features[i].t) +
                       fit.weights[2] * static_cast<long double>(features[i].f);
    long double diff = pred - gradients[i];
    score += diff * diff;
  }
  for (double v : fit.weights) score += lambda * static_cast<long double>(v) * v;
  fit.score = static_cast<double>(score);
  return fit;
}

}  // namespace rlr
