#include <cmath>
#include <ostream>

#include "boosting/search.hpp"
#include "rlr/boosting.hpp"
#include "rlr/error.hpp"
#include "util/rng.hpp"

namespace rlr {

void BoostConfig::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (!positive(lambda)) throw ConfigError("lambda must be a positive number");
  if (max_clause_length < 0) throw ConfigError("max clause length must be >= 0");
  if (beam_width < 1) throw ConfigError("beam width must be >= 1");
  if (negative_subsample_ratio && !positive(*negative_subsample_ratio)) {
    throw ConfigError("negative subsample ratio must be a positive number");
  }
  if (!positive(step_size)) throw ConfigError("step size must be a positive number");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(improvement_epsilon >= 0.0) || !(tie_epsilon >= 0.0)) throw ConfigError("epsilons must be >= 0");
}

std::vector<GradientExample> compute_gradients(std::span<const LabeledExample> examples, const RLRModel& model,
                                               const FactDatabase& db) {
  std::vector<Atom> atoms;
  atoms.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    if (ex.label != 0 && ex.label != 1) throw ArgumentError("labels must be 0 or 1");
    atoms.push_back(ex.atom);
  }
  std::vector<ExampleScore> scores = predict(model, atoms, db);
  std::vector<GradientExample> out;
  out.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    double p = scores[i].probability;
    out.push_back({examples[i].atom, examples[i].label, scores[i].regression_value,
                   (examples[i].label == 1 ? 1.0 : 0.0) - p});
  }
  return out;
}

std::string format_progress_line(const IterationRecord& record) {
  return std::to_string(record.iteration) + "\t" + record.clause_text + "\t" + format_double(record.weights[0]) +
         "\t" + format_double(record.weights[1]) + "\t" + format_double(record.weights[2]) + "\t" +
         format_double(record.training_nll);
}

namespace {

double example_nll(int label, double p) { return label == 1 ? -std::log(p) : -std::log1p(-p); }

double total_nll(std::span<const double> psi, std::span<const int> labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) sum += example_nll(labels[i], sigmoid(psi[i]));
  return sum;
}

}  // namespace

RLRModel train(std::span<const LabeledExample> examples, const FactDatabase& db, PredId target,
               std::span<const ModeDeclaration> modes, const BoostConfig& config, TrainingTrace* trace,
               std::ostream* progress) {
  config.validate();
  std::vector<Atom> atoms;
  std::vector<int> labels;
  std::vector<std::size_t> positives, negatives;
  for (const LabeledExample& ex : examples) {
    if (ex.label != 0 && ex.label != 1) throw ArgumentError("labels must be 0 or 1");
    (ex.label == 1 ? positives : negatives).push_back(atoms.size());
    atoms.push_back(ex.atom);
    labels.push_back(ex.label);
  }
  if (positives.empty() || negatives.empty()) {
    throw ArgumentError("training needs at least one positive and one negative example");
  }

  detail::ClauseSearch search(db, target, modes, config, atoms);
  const Schema& schema = db.schema();

  RLRModel model;
  model.target = target;
  if (config.prior == PriorMode::kEmpirical) {
    model.gamma = std::log(static_cast<double>(positives.size()) / static_cast<double>(negatives.size()));
  }

  std::vector<std::size_t> everyone(atoms.size());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;

  // Same accumulation order as predict(): gamma, then each clause in turn.
  std::vector<double> psi(atoms.size(), model.gamma);
  double current_nll = total_nll(psi, labels);
  if (trace) {
    trace->initial_nll = current_nll;
    trace->iterations.clear();
  }
  if (progress) {
    *progress << "iteration\tclause\tw0\tw1\tw2\ttraining_nll\n";
    *progress << format_progress_line({0, "prior", {model.gamma, 0.0, 0.0}, current_nll}) << "\n";
  }

  for (int m = 1; m <= config.iterations; ++m) {
    std::vector<std::size_t> active = everyone;
    if (config.negative_subsample_ratio) {
      auto wanted = static_cast<std::size_t>(
          std::ceil(*config.negative_subsample_ratio * static_cast<double>(positives.size())));
      if (wanted < negatives.size()) {
        util::Rng rng(util::derive_seed(config.seed, static_cast<std::uint64_t>(m)));
        std::vector<char> in(atoms.size(), 0);
        for (std::size_t i : positives) in[i] = 1;
        for (std::size_t k : rng.sample(negatives.size(), wanted)) in[negatives[k]] = 1;
        active.clear();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          if (in[i]) active.push_back(i);
        }
      }
    }

    std::vector<double> gradients;
    gradients.reserve(active.size());
    for (std::size_t i : active) gradients.push_back((labels[i] == 1 ? 1.0 : 0.0) - sigmoid(psi[i]));

    FittedClause fitted = search.fit(active, gradients);
    VectorWeightedClause clause = std::move(fitted.clause);
    for (double& w : clause.weights) w *= config.step_size;

    std::vector<CountFeature> feats = search.features(clause.body, everyone);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      psi[i] += clause_value(clause.weights, GroundingCounts{feats[i].t, feats[i].f});
    }
    current_nll = total_nll(psi, labels);

    IterationRecord record{m, format_clause(schema, clause), clause.weights, current_nll};
    if (progress) *progress << format_progress_line(record) << "\n";
    if (trace) trace->iterations.push_back(std::move(record));
    model.clauses.push_back(std::move(clause));
  }
  return model;
}

}  // namespace rlr
