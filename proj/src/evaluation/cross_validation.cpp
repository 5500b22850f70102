#include <chrono>
#include <cstdio>

#include "json.hpp"
#include "rlr/error.hpp"
#include "rlr/evaluation.hpp"

namespace rlr {

std::string method_name(Method method) { return method == Method::kBoostedRLR ? "brlr" : "agg-lr"; }

namespace {

std::vector<Atom> atoms_of(std::span<const LabeledExample> examples) {
  std::vector<Atom> out;
  out.reserve(examples.size());
  for (const LabeledExample& e : examples) out.push_back(e.atom);
  return out;
}

std::vector<int> labels_of(std::span<const LabeledExample> examples) {
  std::vector<int> out;
  out.reserve(examples.size());
  for (const LabeledExample& e : examples) out.push_back(e.label);
  return out;
}

}  // namespace

CVResult cross_validate(const DatasetBundle& bundle, const FoldConfig& folds, const BoostConfig& boost, Method method,
                        const LRConfig& agg) {
  boost.validate();
  CVResult result;
  result.method = method;
  result.lambda = boost.lambda;

  for (const FoldSplit& split : make_folds(bundle, folds)) {
    auto start = std::chrono::steady_clock::now();
    std::vector<LabeledExample> train_examples = split.train.labeled();
    std::vector<LabeledExample> test_examples = split.test.labeled();
    std::vector<Atom> test_atoms = atoms_of(test_examples);
    std::vector<ScoredLabel> scored;

    if (method == Method::kBoostedRLR) {
      RLRModel model = train(train_examples, *split.train.db, bundle.target, bundle.modes, boost);
      for (std::size_t i = 0; const ExampleScore& s : predict(model, test_atoms, *split.test.db)) {
        scored.push_back({s.probability, test_examples[i++].label});
      }
      result.models.push_back(std::move(model));
    } else {
      std::vector<AggFeatureSpec> specs = derive_feature_specs(bundle.schema(), bundle.target, bundle.modes);
      std::vector<Atom> train_atoms = atoms_of(train_examples);
      std::vector<int> train_labels = labels_of(train_examples);
      LRFit fit = train_lr(propositionalize(train_atoms, specs, *split.train.db, boost.jobs), train_labels, agg);
      std::vector<double> p = lr_predict(fit.model, propositionalize(test_atoms, specs, *split.test.db, boost.jobs));
      for (std::size_t i = 0; i < p.size(); ++i) scored.push_back({p[i], test_examples[i].label});
    }

    MetricReport report = evaluate_scores(scored);
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.folds.push_back(report);
  }

  std::vector<double> roc, pr, nlls;
  for (const MetricReport& r : result.folds) {
    roc.push_back(r.auc_roc);
    pr.push_back(r.auc_pr);
    nlls.push_back(r.nll);
    result.aggregate.wall_time_s += r.wall_time_s;
  }
  result.aggregate.auc_roc = mean_std(roc);
  result.aggregate.auc_pr = mean_std(pr);
  result.aggregate.nll = mean_std(nlls);
  return result;
}

std::string format_report_records(const CVResult& result, bool with_timing) {
  using nlohmann::ordered_json;
  std::string out;
  auto common = [&](const char* record) {
    ordered_json j;
    j["record"] = record;
    j["method"] = method_name(result.method);
    if (result.method == Method::kBoostedRLR) j["lambda"] = result.lambda;
    return j;
  };
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const MetricReport& r = result.folds[f];
    ordered_json j = common("fold");
    j["fold"] = f;
    j["auc_roc"] = r.auc_roc;
    j["auc_pr"] = r.auc_pr;
    j["nll"] = r.nll;
    j["n_pos"] = r.n_pos;
    j["n_neg"] = r.n_neg;
    if (with_timing) j["wall_time_s"] = r.wall_time_s;
    out += j.dump() + "\n";
  }
  ordered_json j = common("aggregate");
  j["folds"] = result.folds.size();
  j["auc_roc_mean"] = result.aggregate.auc_roc.mean;
  j["auc_roc_std"] = result.aggregate.auc_roc.std;
  j["auc_pr_mean"] = result.aggregate.auc_pr.mean;
  j["auc_pr_std"] = result.aggregate.auc_pr.std;
  j["nll_mean"] = result.aggregate.nll.mean;
  j["nll_std"] = result.aggregate.nll.std;
  j["std"] = "sample";
  if (with_timing) j["wall_time_s"] = result.aggregate.wall_time_s;
  out += j.dump() + "\n";
  return out;
}

std::string format_report_table(const CVResult& result) {
  std::string out;
  char line[256];
  std::string label = method_name(result.method);
  if (result.method == Method::kBoostedRLR) label += " lambda=" + format_double(result.lambda);
  out += label + "\n";
  std::snprintf(line, sizeof line, "%-6s %9s %9s %11s %6s %6s %9s\n", "fold", "auc_roc", "auc_pr", "nll", "n_pos",
                "n_neg", "time_s");
  out += line;
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const MetricReport& r = result.folds[f];
    std::snprintf(line, sizeof line, "%-6zu %9.4f %9.4f %11.4f %6zu %6zu %9.3f\n", f, r.auc_roc, r.auc_pr, r.nll,
                  r.n_pos, r.n_neg, r.wall_time_s);
    out += line;
  }
  const CVAggregate& a = result.aggregate;
  std::snprintf(line, sizeof line, "%-6s %9.4f %9.4f %11.4f %6s %6s %9.3f\n", "mean", a.auc_roc.mean, a.auc_pr.mean,
                a.nll.mean, "", "", a.wall_time_s);
  out += line;
  std::snprintf(line, sizeof line, "%-6s %9.4f %9.4f %11.4f\n", "std", a.auc_roc.std, a.auc_pr.std, a.nll.std);
  out += line;
  return out;
}

}  // namespace rlr
