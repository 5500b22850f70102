#include "rlr/agg_lr.hpp"

#include <algorithm>
#include <cmath>

#include "rlr/boosting.hpp"
#include "rlr/error.hpp"
#include "rlr/model.hpp"
#include "util/parallel.hpp"

namespace rlr {

std::vector<AggFeatureSpec> derive_feature_specs(const Schema& schema, PredId target,
                                                 std::span<const ModeDeclaration> modes) {
  Atom head = canonical_head(schema, target);
  std::vector<std::string> head_vars;
  for (const Term& t : head.args) head_vars.push_back(std::get<Var>(t).name);

  std::vector<AggFeatureSpec> out;
  for (Atom& lit : generate_candidate_literals(schema, head, {}, modes)) {
    bool connected = std::any_of(lit.args.begin(), lit.args.end(), [&](const Term& t) {
      const auto* v = std::get_if<Var>(&t);
      return v && std::find(head_vars.begin(), head_vars.end(), v->name) != head_vars.end();
    });
    if (!connected) continue;
    std::string name = "count_" + format_atom(schema, lit);
    out.push_back({std::move(name), {std::move(lit)}});
  }
  return out;
}

FeatureMatrix propositionalize(std::span<const Atom> examples, std::span<const AggFeatureSpec> specs,
                               const FactDatabase& db, unsigned jobs) {
  const Schema& schema = db.schema();
  FeatureMatrix m;
  m.rows = examples.size();
  m.cols = specs.size();
  m.values.assign(m.rows * m.cols, 0.0);
  if (m.rows == 0 || m.cols == 0) return m;

  PredId target = examples.front().pred;
  Atom head = canonical_head(schema, target);
  auto head_vars = schema.variable_types(std::span<const Atom>(&head, 1));
  std::vector<GroundingCounter> counters;
  for (const AggFeatureSpec& spec : specs) {
    std::vector<Atom> clause{head};
    clause.insert(clause.end(), spec.body.begin(), spec.body.end());
    schema.variable_types(clause);
    counters.emplace_back(schema, spec.body, head_vars);
  }
  std::vector<std::vector<Constant>> bound(examples.size());
  for (std::size_t r = 0; r < examples.size(); ++r) {
    const Atom& ex = examples[r];
    if (ex.pred != target) throw TypingError("examples must share one target predicate");
    schema.check_atom(ex);
    if (!ex.is_ground()) throw TypingError("example " + format_atom(schema, ex) + " is not ground");
    for (const Term& t : ex.args) bound[r].push_back(std::get<Constant>(t));
  }
  util::parallel_for(m.rows, jobs, [&](std::size_t r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.values[r * m.cols + c] = static_cast<double>(counters[c].count(db, bound[r]).true_count);
    }
  });
  return m;
}

FeatureMatrix standardize(const FeatureMatrix& x, std::vector<double>& mean, std::vector<double>& scale) {
  mean.assign(x.cols, 0.0);
  scale.assign(x.cols, 1.0);
  if (x.rows == 0) return x;
  const auto n = static_cast<double>(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) sum += x.at(r, c);
    mean[c] = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) ss += (x.at(r, c) - mean[c]) * (x.at(r, c) - mean[c]);
    double sd = std::sqrt(ss / n);
    if (sd > 0.0) scale[c] = sd;
  }
  FeatureMatrix z = x;
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) z.values[r * x.cols + c] = (x.at(r, c) - mean[c]) / scale[c];
  }
  return z;
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double logistic_objective(const FeatureMatrix& z, std::span<const int> labels, std::span<const double> params,
                          double l2, std::vector<double>* gradient) {
  const std::size_t d = z.cols;
  if (params.size() != d + 1) throw ArgumentError("parameter vector must hold a bias and one weight per column");
  if (labels.size() != z.rows) throw ArgumentError("one label per row expected");
  const auto n = static_cast<double>(z.rows);
  if (gradient) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t r = 0; r < z.rows; ++r) {
    double s = params[0];
    for (std::size_t c = 0; c < d; ++c) s += params[c + 1] * z.at(r, c);
    loss += labels[r] == 1 ? softplus(-s) : softplus(s);
    if (gradient) {
      double residual = sigmoid(s) - (labels[r] == 1 ? 1.0 : 0.0);
      (*gradient)[0] += residual / n;
      for (std::size_t c = 0; c < d; ++c) (*gradient)[c + 1] += residual * z.at(r, c) / n;
    }
  }
  loss /= n;
  double penalty = 0.0;
  for (std::size_t c = 1; c <= d; ++c) {
    penalty += params[c] * params[c];
    if (gradient) (*gradient)[c] += l2 * params[c];
  }
  return loss + 0.5 * l2 * penalty;
}

LRFit train_lr(const FeatureMatrix& x, std::span<const int> labels, const LRConfig& config) {
  if (x.rows == 0) throw ArgumentError("logistic regression needs at least one example");
  if (labels.size() != x.rows) throw ArgumentError("one label per row expected");
  if (!(config.l2 >= 0.0) || config.max_iters < 0 || !(config.tol > 0.0)) {
    throw ConfigError("logistic regression needs l2 >= 0, max_iters >= 0 and tol > 0");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("labels must be 0 or 1");
    (y == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw ArgumentError("logistic regression needs both classes");

  LRFit fit;
  FeatureMatrix z = standardize(x, fit.model.mean, fit.model.scale);
  std::vector<double> params(x.cols + 1, 0.0), grad, trial(x.cols + 1), trial_grad;
  double f = logistic_objective(z, labels, params, config.l2, &grad);
  fit.loss_history.push_back(f);
  double step = 1.0;

  while (fit.iterations < config.max_iters && max_abs(grad) > config.tol) {
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    // Armijo backtracking; a step that cannot decrease the objective ends
    // the run rather than letting the loss go up.
    bool accepted = false;
    double f_trial = f;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < params.size(); ++i) trial[i] = params[i] - step * grad[i];
      f_trial = logistic_objective(z, labels, trial, config.l2, &trial_grad);
      if (f_trial <= f - 0.5 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    params.swap(trial);
    grad.swap(trial_grad);
    f = f_trial;
    fit.loss_history.push_back(f);
    ++fit.iterations;
    step = std::min(step * 2.0, 1e6);
  }

  fit.model.bias = params[0];
  fit.model.weights.assign(params.begin() + 1, params.end());
  fit.gradient_norm = max_abs(grad);
  return fit;
}

std::vector<double> lr_predict(const LRModel& model, const FeatureMatrix& x) {
  if (x.cols != model.weights.size()) throw ArgumentError("feature count does not match the model");
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double s = model.bias;
    for (std::size_t c = 0; c < x.cols; ++c) s += model.weights[c] * (x.at(r, c) - model.mean[c]) / model.scale[c];
    out[r] = sigmoid(s);
  }
  return out;
}

}  // namespace rlr
