#pragma once

// Functional gradient boosting of vector-weighted clauses: pointwise
// gradients, count-feature ridge fits, mode-guided clause search and the
// outer boosting loop.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlr/logic.hpp"
#include "rlr/model.hpp"

namespace rlr {

struct LabeledExample {
  Atom atom;
  int label = 0;  // 1 positive, 0 negative
};

struct GradientExample {
  Atom example;
  int label = 0;
  double regression_value = 0.0;
  double gradient = 0.0;  // label - sigmoid(regression_value)
};

// Per-example features [1, t, f] of a candidate clause.
struct CountFeature {
  double bias = 1.0;
  std::uint64_t t = 0;
  std::uint64_t f = 0;
};

struct RidgeFit {
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  double score = 0.0;  // sum (w.c_i - delta_i)^2 + lambda |w|^2
};

enum class PriorMode { kZero, kEmpirical };

struct BoostConfig {
  int iterations = 10;
  double lambda = 1e3;
  int max_clause_length = 4;
  int beam_width = 1;
  // Negatives per positive drawn afresh each iteration; nullopt uses all.
  std::optional<double> negative_subsample_ratio;
  std::uint64_t seed = 0;
  double step_size = 1.0;
  PriorMode prior = PriorMode::kZero;
  unsigned jobs = 1;
  // A literal is added only if it lowers the best score by at least this much.
  double improvement_epsilon = 1e-9;
  // Scores this close are ties; the earlier candidate wins.
  double tie_epsilon = 1e-12;

  // ConfigError on out-of-range values.
  void validate() const;
};

// The lambda sweep {10^2, 10^2.5, 10^3, 10^3.5}.
std::vector<double> default_lambda_grid();

// delta_i = I(y_i = 1) - sigmoid(psi_i), in input order.
std::vector<GradientExample> compute_gradients(std::span<const LabeledExample> examples, const RLRModel& model,
                                               const FactDatabase& db);

// Closed-form minimiser of |C w - delta|^2 + lambda |w|^2 for rows c_i = [1, t_i, f_i].
// Throws ArgumentError on empty or mismatched input or lambda <= 0.
RidgeFit solve_ridge(std::span<const CountFeature> features, std::span<const double> gradients, double lambda);

// Normal-equation pieces C^T C + lambda I and C^T delta.
struct NormalEquations {
  std::array<std::array<long double, 3>, 3> lhs{};
  std::array<long double, 3> rhs{};
};
NormalEquations build_normal_equations(std::span<const CountFeature> features, std::span<const double> gradients,
                                       double lambda);

// Mode-legal single-literal refinements of `head :- body`, in mode order and
// then argument-fill order, deduplicated, excluding the head predicate and
// literals already in the body. Fresh logvars take the next unused name in
// the sequence A..Z, V26, V27, ...
// Throws ConfigError when some non-target predicate has no mode.
std::vector<Atom> generate_candidate_literals(const Schema& schema, const Atom& head, std::span<const Atom> body,
                                              std::span<const ModeDeclaration> modes);

struct FittedClause {
  VectorWeightedClause clause;
  double score = 0.0;
};

// Greedy (or beam) search for one vector-weighted clause fitting the
// gradients. Starts from the body-less clause, whose features are [1, 1, 0].
FittedClause fit_regression_clause(std::span<const GradientExample> grads, const FactDatabase& db, PredId target,
                                   std::span<const ModeDeclaration> modes, const BoostConfig& config);

struct IterationRecord {
  int iteration = 0;
  std::string clause_text;
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  double training_nll = 0.0;
};

struct TrainingTrace {
  double initial_nll = 0.0;
  std::vector<IterationRecord> iterations;
};

// Tab-separated progress line: iteration, clause, w0, w1, w2, training NLL.
std::string format_progress_line(const IterationRecord& record);

// Runs `config.iterations` boosting steps. Each step appends one clause.
// Throws ArgumentError unless both classes are present.
RLRModel train(std::span<const LabeledExample> examples, const FactDatabase& db, PredId target,
               std::span<const ModeDeclaration> modes, const BoostConfig& config, TrainingTrace* trace = nullptr,
               std::ostream* progress = nullptr);

}  // namespace rlr
