#pragma once

// Aggregate-count logistic regression baseline: each example becomes a row
// of true-grounding counts, one column per single-literal feature body.

#include <span>
#include <string>
#include <vector>

#include "rlr/logic.hpp"

namespace rlr {

struct AggFeatureSpec {
  std::string name;
  std::vector<Atom> body;  // logvars of the canonical target head are bound
};

// One count feature per mode-legal single literal that shares a logvar with
// the canonical head, in candidate order.
std::vector<AggFeatureSpec> derive_feature_specs(const Schema& schema, PredId target,
                                                 std::span<const ModeDeclaration> modes);

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

// Row per example, column per spec: the true-grounding count of the spec body
// with the head bound to the example.
FeatureMatrix propositionalize(std::span<const Atom> examples, std::span<const AggFeatureSpec> specs,
                               const FactDatabase& db, unsigned jobs = 1);

struct LRConfig {
  double l2 = 0.01;
  int max_iters = 2000;
  double tol = 1e-6;
};

// Weights live in standardised feature space: z_j = (x_j - mean_j) / scale_j.
struct LRModel {
  double bias = 0.0;
  std::vector<double> weights;
  std::vector<double> mean;
  std::vector<double> scale;
};

struct LRFit {
  LRModel model;
  std::vector<double> loss_history;  // objective before each step and at the end
  int iterations = 0;
  double gradient_norm = 0.0;  // max-norm at the returned weights
};

// Mean logistic loss plus (l2 / 2) |w|^2 (bias unpenalised) over a
// standardised matrix. `params` is [bias, w_1, ..., w_d]; fills `gradient`
// when given.
double logistic_objective(const FeatureMatrix& z, std::span<const int> labels, std::span<const double> params,
                          double l2, std::vector<double>* gradient = nullptr);

// z-score standardisation fitted on `x`; constant columns get scale 1.
FeatureMatrix standardize(const FeatureMatrix& x, std::vector<double>& mean, std::vector<double>& scale);

// Batch gradient descent with backtracking from zero. Stops when the
// gradient max-norm is at most tol or after max_iters steps. Throws
// ArgumentError on empty input or a single class.
LRFit train_lr(const FeatureMatrix& x, std::span<const int> labels, const LRConfig& config = {});

std::vector<double> lr_predict(const LRModel& model, const FeatureMatrix& x);

}  // namespace rlr
