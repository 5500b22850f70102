#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlr/logic.hpp"

namespace rlr {

// Numerically stable logistic function.
double sigmoid(double z);

// [w0, w1, w2] : head :- body. Contributes w0 + w1*t + w2*f to the
// regression value of an example, where (t, f) are the true/false grounding
// counts of the body with the head bound to the example.
struct VectorWeightedClause {
  Atom head;
  std::vector<Atom> body;
  std::array<double, 3> weights{0.0, 0.0, 0.0};

  friend bool operator==(const VectorWeightedClause&, const VectorWeightedClause&) = default;
};

// Canonical head for a target predicate: distinct logvars A, B, C, ...
Atom canonical_head(const Schema& schema, PredId target);
// Binding of the head logvars to the arguments of a ground example.
Substitution head_binding(const Atom& head, const Atom& example);
// Throws unless the clause is well formed for `target`: head of the target
// predicate with distinct logvars, body free of the target, consistent
// logvar types, finite weights.
void check_clause(const Schema& schema, PredId target, const VectorWeightedClause& clause);

std::string format_clause(const Schema& schema, const VectorWeightedClause& clause);

struct RLRModel {
  PredId target = 0;
  double gamma = 0.0;
  std::vector<VectorWeightedClause> clauses;

  friend bool operator==(const RLRModel&, const RLRModel&) = default;
};

struct ExampleScore {
  Atom example;
  double regression_value = 0.0;
  double probability = 0.5;
};

// Clause contribution for one example.
double clause_value(const std::array<double, 3>& weights, const GroundingCounts& counts);

// gamma + sum over clauses of w0 + w1*t + w2*f.
double regression_value(const RLRModel& model, const Atom& example, const FactDatabase& db);
double regression_value(const RLRModel& model, const Substitution& example_binding,
                        const FactDatabase& db);

// One score per example, in input order. Throws TypingError naming the
// offending atom when an example is not a ground atom of the target.
std::vector<ExampleScore> predict(const RLRModel& model, std::span<const Atom> examples,
                                  const FactDatabase& db);

// Text format:
//   rlr-model v1
//   target <functor>(<population>, ...)
//   gamma <float>
//   clause [w0, w1, w2] :: head :- lit1, lit2, ...
// Floats are written in shortest round-trip form.
std::string serialize_model(const RLRModel& model, const Schema& schema);
// Throws ParseError with line and column on malformed text, unknown
// predicates or a target that does not match the schema.
RLRModel deserialize_model(std::string_view text, const Schema& schema,
                           const std::string& source = "<model>");

// Shortest decimal that reads back to the same double.
std::string format_double(double value);
// Whole-string parse; nullopt on junk.
std::optional<double> parse_double(std::string_view text);

}  // namespace rlr
