#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlr/agg_lr.hpp"
#include "rlr/boosting.hpp"
#include "rlr/data_io.hpp"
#include "rlr/error.hpp"
#include "rlr/evaluation.hpp"
#include "rlr/model.hpp"

namespace rlr::cli {

namespace {

struct DataArgs {
  std::string facts;
  std::string pos;
  std::string neg;
  std::string modes;
  std::string pop;
  std::string target;
  std::string neg_ratio = "all";
};

struct BoostArgs {
  int iters = 10;
  double lambda = 1e3;
  bool lambda_grid = false;
  int max_clause_length = 4;
  int beam = 1;
  std::optional<double> subsample_ratio;
  std::uint64_t seed = 0;
  double step_size = 1.0;
  std::string prior = "zero";
  unsigned jobs = 1;
};

void add_data_options(CLI::App* cmd, DataArgs& a, bool examples) {
  cmd->add_option("--facts", a.facts, "fact file")->required();
  cmd->add_option("--modes", a.modes, "mode file (may also hold predicate and population declarations)")->required();
  cmd->add_option("--pop", a.pop, "population declarations");
  if (examples) {
    cmd->add_option("--target", a.target, "target predicate")->required();
    cmd->add_option("--pos", a.pos, "positive examples")->required();
    cmd->add_option("--neg", a.neg, "negative examples (default: closed-world negatives)");
    cmd->add_option("--neg-ratio", a.neg_ratio,
                    "closed-world negatives per positive when --neg is absent, or 'all'");
  }
}

void add_boost_options(CLI::App* cmd, BoostArgs& a) {
  cmd->add_option("--iters", a.iters, "boosting iterations M")->capture_default_str();
  cmd->add_option("--lambda", a.lambda, "ridge penalty")->capture_default_str();
  cmd->add_option("--max-clause-length", a.max_clause_length, "maximum body literals")->capture_default_str();
  cmd->add_option("--beam", a.beam, "beam width (1 is greedy)")->capture_default_str();
  cmd->add_option("--subsample-ratio", a.subsample_ratio, "negatives per positive drawn each iteration");
  cmd->add_option("--seed", a.seed, "random seed")->capture_default_str();
  cmd->add_option("--step-size", a.step_size, "shrinkage applied to each clause")->capture_default_str();
  cmd->add_option("--prior", a.prior, "initial regression value: zero or empirical")
      ->check(CLI::IsMember({"zero", "empirical"}))
      ->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "worker threads for candidate scoring")->capture_default_str();
}

BoostConfig boost_config(const BoostArgs& a) {
  BoostConfig c;
  c.iterations = a.iters;
  c.lambda = a.lambda;
  c.max_clause_length = a.max_clause_length;
  c.beam_width = a.beam;
  c.negative_subsample_ratio = a.subsample_ratio;
  c.seed = a.seed;
  c.step_size = a.step_size;
  c.prior = a.prior == "empirical" ? PriorMode::kEmpirical : PriorMode::kZero;
  c.jobs = a.jobs;
  c.validate();
  return c;
}

std::optional<double> neg_ratio(const std::string& text) {
  if (text == "all") return std::nullopt;
  auto v = parse_double(text);
  if (!v || !(*v > 0.0)) throw ConfigError("--neg-ratio must be a positive number or 'all'");
  return v;
}

DatasetBundle load_bundle(const DataArgs& a, std::uint64_t seed, std::ostream& err) {
  std::optional<double> ratio = neg_ratio(a.neg_ratio);
  DatasetFiles files;
  files.facts = a.facts;
  files.positives = a.pos;
  files.modes = a.modes;
  if (!a.neg.empty()) files.negatives = a.neg;
  if (!a.pop.empty()) files.populations = a.pop;
  DatasetBundle bundle = load_dataset(files, a.target);
  if (a.neg.empty() && ratio) {
    bundle.negatives = generate_negatives(bundle.schema(), bundle.target, bundle.positives, ratio, seed, &err);
  }
  return bundle;
}

// `target f(t1, ...)` line of a model file, as a predicate declaration, and
// the target functor.
std::pair<std::string, std::string> model_target(const std::string& model_text, const std::string& source) {
  std::istringstream in(model_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("target ", 0) == 0) {
      std::string sig = line.substr(7);
      auto paren = sig.find('(');
      if (paren == std::string::npos) break;
      return {"predicate " + sig + ".\n", sig.substr(0, paren)};
    }
  }
  throw ParseError(source, 0, 0, "model has no target line");
}

struct ModelContext {
  RLRModel model;
  DatasetBundle bundle;
};

// Loads the data around a model file. The model's target signature is added
// to the declarations, so a target absent from the mode file still resolves
// and a conflicting one is reported against the model.
ModelContext load_model_context(const std::string& model_path, const DataArgs& a, DatasetTexts texts) {
  std::string model_text = read_text_file(model_path);
  auto [declaration, functor] = model_target(model_text, model_path);
  if (!a.target.empty() && a.target != functor) {
    throw ConfigError("--target '" + a.target + "' differs from the model target '" + functor + "'");
  }
  texts.facts = read_text_file(a.facts);
  texts.facts_source = a.facts;
  texts.modes = read_text_file(a.modes);
  texts.modes_source = a.modes;
  if (!a.pop.empty()) {
    texts.populations = read_text_file(a.pop);
    texts.populations_source = a.pop;
  }
  texts.declarations = declaration;
  texts.declarations_source = model_path;
  ModelContext ctx;
  ctx.bundle = make_dataset(texts, functor);
  ctx.model = deserialize_model(model_text, ctx.bundle.schema(), model_path);
  return ctx;
}

// --- subcommands -------------------------------------------------------------

struct LearnArgs {
  DataArgs data;
  BoostArgs boost;
  std::string model_out;
  std::string log_out;
};

int cmd_learn(const LearnArgs& a, std::ostream& out, std::ostream& err) {
  BoostConfig config = boost_config(a.boost);
  DatasetBundle bundle = load_bundle(a.data, config.seed, err);
  std::ostringstream log;
  TrainingTrace trace;
  RLRModel model = train(bundle.labeled(), *bundle.db, bundle.target, bundle.modes, config, &trace, &log);
  write_text_file(a.model_out, serialize_model(model, bundle.schema()));
  std::string log_path = a.log_out.empty() ? a.model_out + ".log" : a.log_out;
  write_text_file(log_path, log.str());
  double final_nll = trace.iterations.empty() ? trace.initial_nll : trace.iterations.back().training_nll;
  out << "learned " << model.clauses.size() << " clauses from " << bundle.positives.size() << " positive and "
      << bundle.negatives.size() << " negative examples\n"
      << "training NLL " << format_double(trace.initial_nll) << " -> " << format_double(final_nll) << "\n"
      << "model: " << a.model_out << "\nlog: " << log_path << "\n";
  return 0;
}

struct PredictArgs {
  DataArgs data;
  std::string model;
  std::string examples;
  std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  DatasetTexts texts;
  texts.negatives = std::string();
  ModelContext ctx = load_model_context(a.model, a.data, texts);
  const Schema& schema = ctx.bundle.schema();
  std::vector<Atom> examples = parse_ground_atoms(read_text_file(a.examples), schema, ctx.model.target, a.examples);
  std::string text;
  for (const ExampleScore& s : predict(ctx.model, examples, *ctx.bundle.db)) {
    text += format_atom(schema, s.example) + "\t" + format_double(s.probability) + "\n";
  }
  if (a.out.empty()) {
    out << text;
  } else {
    write_text_file(a.out, text);
  }
  return 0;
}

struct EvaluateArgs {
  DataArgs data;
  std::string model;
  std::string report_out;
  std::string curves_out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  DatasetTexts texts;
  texts.positives = read_text_file(a.data.pos);
  texts.positives_source = a.data.pos;
  if (!a.data.neg.empty()) {
    texts.negatives = read_text_file(a.data.neg);
    texts.negatives_source = a.data.neg;
  }
  ModelContext ctx = load_model_context(a.model, a.data, texts);
  const DatasetBundle& bundle = ctx.bundle;
  const RLRModel& model = ctx.model;

  std::vector<LabeledExample> examples = bundle.labeled();
  std::vector<Atom> atoms;
  for (const LabeledExample& e : examples) atoms.push_back(e.atom);
  std::vector<ScoredLabel> scored;
  for (std::size_t i = 0; const ExampleScore& s : predict(model, atoms, *bundle.db)) {
    scored.push_back({s.probability, examples[i++].label});
  }
  MetricReport r = evaluate_scores(scored);

  nlohmann::ordered_json j;
  j["record"] = "evaluation";
  j["auc_roc"] = r.auc_roc;
  j["auc_pr"] = r.auc_pr;
  j["nll"] = r.nll;
  j["n_pos"] = r.n_pos;
  j["n_neg"] = r.n_neg;
  if (!a.report_out.empty()) write_text_file(a.report_out, j.dump() + "\n");
  if (!a.curves_out.empty()) {
    nlohmann::ordered_json curves;
    curves["roc"] = nlohmann::ordered_json::array();
    for (const CurvePoint& p : roc_points(scored)) curves["roc"].push_back({p.x, p.y});
    curves["pr"] = nlohmann::ordered_json::array();
    for (const CurvePoint& p : pr_points(scored)) curves["pr"].push_back({p.x, p.y});
    write_text_file(a.curves_out, curves.dump() + "\n");
  }
  out << "auc_roc " << format_double(r.auc_roc) << "\nauc_pr " << format_double(r.auc_pr) << "\nnll "
      << format_double(r.nll) << "\nn_pos " << r.n_pos << "\nn_neg " << r.n_neg << "\n";
  return 0;
}

struct CvArgs {
  DataArgs data;
  BoostArgs boost;
  int folds = 4;
  std::string scheme = "random";
  std::string groups;
  std::string method = "brlr";
  double l2 = 0.01;
  std::string report_out;
  std::string model_out;
  bool report_timing = false;
};

int cmd_cv(const CvArgs& a, std::ostream& out, std::ostream& err) {
  BoostConfig config = boost_config(a.boost);
  FoldConfig folds;
  folds.k = a.folds;
  folds.seed = config.seed;
  folds.scheme = a.scheme == "by_group" ? FoldScheme::kByGroup : FoldScheme::kRandom;
  if (folds.k < 2) throw ConfigError("--folds must be at least 2");
  if (folds.scheme == FoldScheme::kByGroup) {
    if (a.groups.empty()) throw ConfigError("--fold-scheme by_group needs --groups");
  }
  Method method = a.method == "agg-lr" ? Method::kAggLR : Method::kBoostedRLR;
  LRConfig lr;
  lr.l2 = a.l2;
  if (!(lr.l2 >= 0.0)) throw ConfigError("--l2 must be >= 0");

  DatasetBundle bundle = load_bundle(a.data, config.seed, err);
  if (folds.scheme == FoldScheme::kByGroup) folds.groups = parse_groups(read_text_file(a.groups), a.groups);

  std::vector<double> lambdas{config.lambda};
  if (a.boost.lambda_grid && method == Method::kBoostedRLR) lambdas = default_lambda_grid();

  std::string records;
  std::optional<std::pair<double, double>> best;  // (mean AUC-ROC, lambda)
  for (double lambda : lambdas) {
    BoostConfig run = config;
    run.lambda = lambda;
    CVResult result = cross_validate(bundle, folds, run, method, lr);
    records += format_report_records(result, a.report_timing);
    out << format_report_table(result) << "\n";
    if (!a.model_out.empty()) {
      for (std::size_t f = 0; f < result.models.size(); ++f) {
        std::string path = a.model_out;
        if (lambdas.size() > 1) path += ".lambda" + format_double(lambda);
        path += ".fold" + std::to_string(f);
        write_text_file(path, serialize_model(result.models[f], bundle.schema()));
      }
    }
    if (!best || result.aggregate.auc_roc.mean > best->first) best = {result.aggregate.auc_roc.mean, lambda};
  }
  if (lambdas.size() > 1) out << "best lambda by mean AUC-ROC: " << format_double(best->second) << "\n";
  if (!a.report_out.empty()) write_text_file(a.report_out, records);
  return 0;
}

struct GenerateArgs {
  SmokesCancerParams params;
  std::string out_dir;
  std::string name = "smokes";
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  a.params.validate();
  DatasetBundle bundle = generate_smokes_cancer(a.params);
  for (const auto& path : write_dataset(bundle, a.out_dir, a.name)) out << path.string() << "\n";
  out << bundle.positives.size() << " positive and " << bundle.negatives.size() << " negative examples\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational logistic regression learned by functional gradient boosting"};
  app.set_config("--config", "", "TOML/INI file; subcommand options go under [learn], [cv], ...");
  app.require_subcommand(1);

  LearnArgs learn;
  CLI::App* learn_cmd = app.add_subcommand("learn", "learn a boosted model");
  add_data_options(learn_cmd, learn.data, true);
  add_boost_options(learn_cmd, learn.boost);
  learn_cmd->add_option("--model-out", learn.model_out, "model file to write")->required();
  learn_cmd->add_option("--log-out", learn.log_out, "progress log (default: <model-out>.log)");

  PredictArgs pred;
  CLI::App* predict_cmd = app.add_subcommand("predict", "score examples with a model");
  add_data_options(predict_cmd, pred.data, false);
  predict_cmd->add_option("--model", pred.model, "model file")->required();
  predict_cmd->add_option("--examples", pred.examples, "ground target atoms to score")->required();
  predict_cmd->add_option("--out", pred.out, "prediction file (default: stdout)");

  EvaluateArgs eval;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "metrics of a model on labelled examples");
  add_data_options(evaluate_cmd, eval.data, true);
  evaluate_cmd->get_option("--target")->required(false);
  evaluate_cmd->add_option("--model", eval.model, "model file")->required();
  evaluate_cmd->add_option("--report-out", eval.report_out, "JSON record file");
  evaluate_cmd->add_option("--curves-out", eval.curves_out, "ROC and PR point lists (JSON)");

  CvArgs cv;
  CLI::App* cv_cmd = app.add_subcommand("cv", "cross-validate a learner");
  add_data_options(cv_cmd, cv.data, true);
  add_boost_options(cv_cmd, cv.boost);
  cv_cmd->add_flag("--lambda-grid", cv.boost.lambda_grid, "sweep lambda over {10^2, 10^2.5, 10^3, 10^3.5}");
  cv_cmd->add_option("--folds", cv.folds, "number of folds")->capture_default_str();
  cv_cmd->add_option("--fold-scheme", cv.scheme, "random or by_group")
      ->check(CLI::IsMember({"random", "by_group"}))
      ->capture_default_str();
  cv_cmd->add_option("--groups", cv.groups, "group file for by_group folds");
  cv_cmd->add_option("--method", cv.method, "brlr or agg-lr")
      ->check(CLI::IsMember({"brlr", "agg-lr"}))
      ->capture_default_str();
  cv_cmd->add_option("--l2", cv.l2, "AGG-LR penalty")->capture_default_str();
  cv_cmd->add_option("--report-out", cv.report_out, "JSON-lines report file");
  cv_cmd->add_option("--model-out", cv.model_out, "prefix for per-fold model files");
  cv_cmd->add_flag("--report-timing", cv.report_timing, "include wall-clock times in the report file");

  GenerateArgs gen;
  CLI::App* generate_cmd = app.add_subcommand("generate", "write the synthetic smokes/cancer/friends domain");
  generate_cmd->add_option("--out", gen.out_dir, "output directory")->required();
  generate_cmd->add_option("--name", gen.name, "file name stem")->capture_default_str();
  generate_cmd->add_option("--n", gen.params.n_people, "number of people")->capture_default_str();
  generate_cmd->add_option("--k", gen.params.k_threshold, "smoking friends needed for cancer")->capture_default_str();
  generate_cmd->add_option("--edge-prob", gen.params.edge_prob, "friendship edge probability")
      ->capture_default_str();
  generate_cmd->add_option("--noise", gen.params.noise, "label flip probability")->capture_default_str();
  generate_cmd->add_option("--smoke-prob", gen.params.smoke_prob, "smoking probability")->capture_default_str();
  generate_cmd->add_option("--seed", gen.params.seed, "random seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*learn_cmd) return cmd_learn(learn, out, err);
    if (*predict_cmd) return cmd_predict(pred, out);
    if (*evaluate_cmd) return cmd_evaluate(eval, out);
    if (*cv_cmd) return cmd_cv(cv, out, err);
    if (*generate_cmd) return cmd_generate(gen, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace rlr::cli
