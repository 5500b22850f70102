#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "boosting/search.hpp"
#include "rlr/boosting.hpp"
#include "rlr/data_io.hpp"
#include "rlr/error.hpp"
#include "rlr/evaluation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rlr;

namespace {

// b and c smoke; a and b have a smoking friend. Smoking alone carries no
// signal, friend count some.
DatasetBundle smokes_toy() {
  DatasetTexts t;
  t.populations = "population person = {a, b, c, d}.\n";
  t.modes =
      "mode: friends(+person, -person).\nmode: friends(-person, +person).\nmode: smokes(+person).\n"
      "predicate cancer(person).\n";
  t.facts = "friends(a, b).\nfriends(a, d).\nfriends(b, c).\nfriends(d, a).\nsmokes(b).\nsmokes(c).\n";
  t.positives = "cancer(a).\ncancer(b).\n";
  return make_dataset(t, "cancer");
}

DatasetBundle small_synthetic(std::uint64_t seed = 3) {
  SmokesCancerParams p;
  p.n_people = 60;
  p.edge_prob = 0.1;
  p.seed = seed;
  return generate_smokes_cancer(p);
}

std::vector<GradientExample> zero_model_gradients(const DatasetBundle& b) {
  RLRModel zero;
  zero.target = b.target;
  auto labeled = b.labeled();
  return compute_gradients(labeled, zero, *b.db);
}

// Exhaustive oracle: features from brute-force counts, weights from the
// iterative solver.
double oracle_score(const DatasetBundle& b, const std::vector<GradientExample>& grads, const std::vector<Atom>& body,
                    double lambda) {
  Atom head = canonical_head(b.schema(), b.target);
  std::vector<CountFeature> c;
  std::vector<double> d;
  for (const auto& g : grads) {
    Substitution theta = head_binding(head, g.example);
    auto [t, f] = body.empty() ? std::pair<std::uint64_t, std::uint64_t>{1, 0} : oracle::brute_count(*b.db, body, theta);
    c.push_back({1.0, t, f});
    d.push_back(g.gradient);
  }
  auto w = oracle::ridge_cg(c, d, lambda);
  return oracle::ridge_objective(c, d, w, lambda);
}

}  // namespace

TEST(Gradients, ZeroModelAndKnownValue) {
  auto db = fixtures::professor_db(4);
  const Schema& s = db->schema();
  RLRModel zero;
  zero.target = s.predicate_id("active");
  std::vector<LabeledExample> ex{{parse_atom(s, "active(p1)"), 1}, {parse_atom(s, "active(p2)"), 0}};
  auto g = compute_gradients(ex, zero, *db);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].gradient, 0.5);
  EXPECT_EQ(g[1].gradient, -0.5);
  EXPECT_EQ(g[0].label, 1);
  EXPECT_EQ(g[1].example, ex[1].atom);

  RLRModel m = fixtures::professor_model(s);
  auto g1 = compute_gradients(std::vector<LabeledExample>{ex[0]}, m, *db);
  EXPECT_DOUBLE_EQ(g1[0].regression_value, 0.5);
  EXPECT_NEAR(g1[0].gradient, 0.3775, 1e-4);
  EXPECT_DOUBLE_EQ(g1[0].gradient, 1.0 - sigmoid(0.5));
}

TEST(Gradients, MatchFiniteDifferencesOfTheLogLikelihood) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> psi(-8.0, 8.0);
  auto db = fixtures::professor_db(4);
  const Schema& s = db->schema();
  for (int i = 0; i < 500; ++i) {
    int y = static_cast<int>(rng() & 1);
    RLRModel m;
    m.target = s.predicate_id("active");
    m.gamma = psi(rng);
    auto g = compute_gradients(std::vector<LabeledExample>{{parse_atom(s, "active(p1)"), y}}, m, *db);
    ASSERT_NEAR(g[0].gradient, oracle::finite_difference_gradient(y, m.gamma), 1e-6) << y << " " << m.gamma;
  }
}

TEST(Candidates, OutputModeIntroducesFreshLogvar) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  Atom head = parse_atom(s, "active(A)");
  ModeDeclaration mode{s.predicate_id("advisedby"),
                       {{ArgMode::kOutput, s.population_id("student")}, {ArgMode::kInput, s.population_id("person")}}};
  ModeDeclaration phd{s.predicate_id("phd"), {{ArgMode::kInput, s.population_id("student")}}};
  std::vector<ModeDeclaration> modes{mode, phd};
  auto c = generate_candidate_literals(s, head, {}, modes);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(format_atom(s, c[0]), "advisedby(B,A)");

  std::vector<Atom> body{c[0]};
  auto next = generate_candidate_literals(s, head, body, modes);
  std::vector<std::string> texts;
  for (const auto& a : next) texts.push_back(format_atom(s, a));
  EXPECT_NE(std::find(texts.begin(), texts.end(), "phd(B)"), texts.end());
  EXPECT_EQ(std::find(texts.begin(), texts.end(), "advisedby(B,A)"), texts.end());
}

TEST(Candidates, MissingModeIsAConfigError) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  EXPECT_THROW(generate_candidate_literals(s, parse_atom(s, "active(A)"), {}, {}), ConfigError);
}

TEST(Candidates, ConstantModeEnumeratesThePopulation) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  std::vector<ModeDeclaration> modes{
      {s.predicate_id("advisedby"), {{ArgMode::kConstant, s.population_id("student")}, {ArgMode::kInput, 0}}},
      {s.predicate_id("phd"), {{ArgMode::kConstant, s.population_id("student")}}}};
  auto c = generate_candidate_literals(s, parse_atom(s, "active(A)"), {}, modes);
  std::vector<std::string> texts;
  for (const auto& a : c) texts.push_back(format_atom(s, a));
  EXPECT_EQ(texts, (std::vector<std::string>{"advisedby(s1,A)", "advisedby(s2,A)", "advisedby(s3,A)", "phd(s1)",
                                             "phd(s2)", "phd(s3)"}));
}

TEST(ClauseFit, LengthZeroIsTheBiasOnlyRidgeFit) {
  DatasetBundle b = smokes_toy();
  auto grads = zero_model_gradients(b);
  BoostConfig cfg;
  cfg.lambda = 2.0;
  cfg.max_clause_length = 0;
  FittedClause fit = fit_regression_clause(grads, *b.db, b.target, b.modes, cfg);
  EXPECT_TRUE(fit.clause.body.empty());
  std::vector<CountFeature> c(grads.size(), CountFeature{1.0, 1, 0});
  std::vector<double> d;
  for (const auto& g : grads) d.push_back(g.gradient);
  RidgeFit expect = solve_ridge(c, d, cfg.lambda);
  EXPECT_EQ(fit.clause.weights, expect.weights);
  EXPECT_DOUBLE_EQ(fit.score, expect.score);
}

TEST(ClauseFit, ConstantGradientsOverIndistinguishableExamples) {
  // Every person has exactly one friend who smokes, so all candidates give
  // the same counts everywhere.
  DatasetTexts t;
  t.populations = "population person = {a, b}.\n";
  t.modes = "mode: friends(+person, -person).\nmode: smokes(+person).\npredicate cancer(person).\n";
  t.facts = "friends(a, b).\nfriends(b, a).\nsmokes(a).\nsmokes(b).\n";
  t.positives = "cancer(a).\ncancer(b).\n";
  t.negatives = "";
  DatasetBundle b;
  EXPECT_NO_THROW(b = make_dataset(t, "cancer"));
  const double g = 0.5, lambda = 10.0;
  std::vector<GradientExample> grads;
  for (const auto& a : b.positives) grads.push_back({a, 1, 0.0, g});
  BoostConfig cfg;
  cfg.lambda = lambda;
  FittedClause fit = fit_regression_clause(grads, *b.db, b.target, b.modes, cfg);
  const double n = static_cast<double>(grads.size());
  // Bias-only fit: the constant column is split between w0 and w1.
  RidgeFit bias = solve_ridge(std::vector<CountFeature>(grads.size(), CountFeature{1.0, 1, 0}),
                              std::vector<double>(grads.size(), g), lambda);
  EXPECT_NEAR(bias.weights[0], n * g / (2 * n + lambda), 1e-15);
  EXPECT_NEAR(bias.weights[1], n * g / (2 * n + lambda), 1e-15);
  EXPECT_LE(fit.score, bias.score);
  EXPECT_NEAR(fit.score, oracle_score(b, grads, fit.clause.body, lambda), 1e-10);
  for (const auto& lit : fit.clause.body) EXPECT_NE(lit.pred, b.target);
}

TEST(ClauseFit, SmokesToyFirstLiteralIsTheOracleArgmin) {
  DatasetBundle b = smokes_toy();
  auto grads = zero_model_gradients(b);
  Atom head = canonical_head(b.schema(), b.target);
  for (double lambda : {0.1, 1.0, 10.0}) {
    BoostConfig cfg;
    cfg.lambda = lambda;
    cfg.max_clause_length = 1;
    auto candidates = generate_candidate_literals(b.schema(), head, {}, b.modes);
    ASSERT_FALSE(candidates.empty());
    double best = oracle_score(b, grads, {}, lambda);
    std::optional<Atom> best_lit;
    for (const auto& lit : candidates) {
      double s = oracle_score(b, grads, {lit}, lambda);
      if (s < best - 1e-9) {
        best = s;
        best_lit = lit;
      }
    }
    FittedClause fit = fit_regression_clause(grads, *b.db, b.target, b.modes, cfg);
    if (best_lit) {
      ASSERT_EQ(fit.clause.body.size(), 1u) << lambda;
      EXPECT_EQ(fit.clause.body[0], *best_lit) << lambda;
    } else {
      EXPECT_TRUE(fit.clause.body.empty());
    }
    EXPECT_NEAR(fit.score, best, 1e-10);
  }
}

TEST(ClauseFit, SmokesToyTwoStepsFindSmokingFriend) {
  DatasetBundle b = smokes_toy();
  auto grads = zero_model_gradients(b);
  BoostConfig cfg;
  cfg.lambda = 0.1;
  cfg.max_clause_length = 2;
  FittedClause fit = fit_regression_clause(grads, *b.db, b.target, b.modes, cfg);
  EXPECT_EQ(format_body(b.schema(), fit.clause.body), "friends(A,B), smokes(B)");
  // t separates the classes exactly.
  Atom head = canonical_head(b.schema(), b.target);
  for (const auto& g : grads) {
    auto counts = count_groundings(fit.clause.body, head_binding(head, g.example), *b.db);
    EXPECT_EQ(counts.true_count, g.label == 1 ? 1u : 0u);
  }
}

TEST(ClauseFit, EachExtensionDoesNotRaiseTheScore) {
  DatasetBundle b = small_synthetic();
  auto grads = zero_model_gradients(b);
  double previous = std::numeric_limits<double>::infinity();
  for (int len = 0; len <= 4; ++len) {
    BoostConfig cfg;
    cfg.lambda = 100;
    cfg.max_clause_length = len;
    FittedClause fit = fit_regression_clause(grads, *b.db, b.target, b.modes, cfg);
    EXPECT_LE(fit.score, previous + 1e-12) << len;
    EXPECT_LE(static_cast<int>(fit.clause.body.size()), len);
    EXPECT_NEAR(fit.score, oracle_score(b, grads, fit.clause.body, cfg.lambda), 1e-8 * (1 + fit.score));
    previous = fit.score;
  }
}

TEST(ClauseFit, BeamSearchIsNoWorseThanGreedyAtTheFirstStep) {
  DatasetBundle b = small_synthetic();
  auto grads = zero_model_gradients(b);
  BoostConfig greedy;
  greedy.lambda = 100;
  greedy.max_clause_length = 1;
  BoostConfig beam = greedy;
  beam.beam_width = 3;
  auto g = fit_regression_clause(grads, *b.db, b.target, b.modes, greedy);
  auto w = fit_regression_clause(grads, *b.db, b.target, b.modes, beam);
  EXPECT_LE(w.score, g.score + 1e-12);
}

TEST(ClauseSearch, CachedFeaturesMatchDirectCounts) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  std::vector<Atom> examples;
  for (const auto& e : labeled) examples.push_back(e.atom);
  BoostConfig cfg;
  detail::ClauseSearch search(*b.db, b.target, b.modes, cfg, examples);
  std::vector<Atom> body = parse_body(b.schema(), "friends(A, B), smokes(B)");
  std::vector<std::size_t> ids{0, 5, 2, 5};
  auto first = search.features(body, ids);
  auto again = search.features(body, ids);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto c = count_groundings(body, head_binding(search.head(), examples[ids[k]]), *b.db);
    EXPECT_EQ(first[k].t, c.true_count);
    EXPECT_EQ(first[k].f, c.false_count);
    EXPECT_EQ(again[k].t, first[k].t);
  }
}

TEST(Train, ZeroIterationsGivesGammaOnly) {
  DatasetBundle b = smokes_toy();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 0;
  RLRModel m = train(labeled, *b.db, b.target, b.modes, cfg);
  EXPECT_TRUE(m.clauses.empty());
  EXPECT_EQ(m.gamma, 0.0);
  cfg.prior = PriorMode::kEmpirical;
  RLRModel e = train(labeled, *b.db, b.target, b.modes, cfg);
  EXPECT_DOUBLE_EQ(e.gamma, std::log(2.0 / 2.0));
}

TEST(Train, EmpiricalPriorMatchesClassBalance) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 0;
  cfg.prior = PriorMode::kEmpirical;
  RLRModel m = train(labeled, *b.db, b.target, b.modes, cfg);
  double pos = static_cast<double>(b.positives.size()), neg = static_cast<double>(b.negatives.size());
  EXPECT_NEAR(m.gamma, std::log(pos / neg), 1e-15);
  EXPECT_NEAR(sigmoid(m.gamma), pos / (pos + neg), 1e-12);
}

TEST(Train, OneClassIsAnArgumentError) {
  DatasetBundle b = smokes_toy();
  std::vector<LabeledExample> only_pos;
  for (const auto& a : b.positives) only_pos.push_back({a, 1});
  EXPECT_THROW(train(only_pos, *b.db, b.target, b.modes, BoostConfig{}), ArgumentError);
  EXPECT_THROW(train({}, *b.db, b.target, b.modes, BoostConfig{}), ArgumentError);
}

TEST(Train, InvalidConfigIsAConfigError) {
  DatasetBundle b = smokes_toy();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.lambda = 0;
  EXPECT_THROW(train(labeled, *b.db, b.target, b.modes, cfg), ConfigError);
  cfg = {};
  cfg.iterations = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.beam_width = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.negative_subsample_ratio = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_clause_length = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Train, TrainingNllDecreasesOnSyntheticData) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 10;
  cfg.lambda = 100;
  TrainingTrace trace;
  RLRModel m = train(labeled, *b.db, b.target, b.modes, cfg, &trace);
  ASSERT_EQ(m.clauses.size(), 10u);
  ASSERT_EQ(trace.iterations.size(), 10u);
  EXPECT_NEAR(trace.initial_nll, static_cast<double>(labeled.size()) * std::log(2.0), 1e-9);
  EXPECT_LT(trace.iterations.back().training_nll, trace.initial_nll);

  // The recorded NLL is the NLL of the returned model.
  auto scores = predict(m, [&] {
    std::vector<Atom> a;
    for (const auto& e : labeled) a.push_back(e.atom);
    return a;
  }(), *b.db);
  std::vector<ScoredLabel> sl;
  for (std::size_t i = 0; i < labeled.size(); ++i) sl.push_back({scores[i].probability, labeled[i].label});
  EXPECT_NEAR(nll(sl), trace.iterations.back().training_nll, 1e-9);
}

TEST(Train, StepSizeScalesClauseWeights) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 1;
  cfg.lambda = 100;
  RLRModel full = train(labeled, *b.db, b.target, b.modes, cfg);
  cfg.step_size = 0.5;
  RLRModel half = train(labeled, *b.db, b.target, b.modes, cfg);
  ASSERT_EQ(full.clauses.size(), 1u);
  EXPECT_EQ(full.clauses[0].body, half.clauses[0].body);
  for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(half.clauses[0].weights[j], 0.5 * full.clauses[0].weights[j]);
}

TEST(Train, DeterministicAndIndependentOfJobs) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 4;
  cfg.lambda = 100;
  cfg.negative_subsample_ratio = 1.0;
  cfg.seed = 11;
  std::string first = serialize_model(train(labeled, *b.db, b.target, b.modes, cfg), b.schema());
  std::string second = serialize_model(train(labeled, *b.db, b.target, b.modes, cfg), b.schema());
  EXPECT_EQ(first, second);
  cfg.jobs = 4;
  EXPECT_EQ(serialize_model(train(labeled, *b.db, b.target, b.modes, cfg), b.schema()), first);
  cfg.beam_width = 2;
  cfg.jobs = 1;
  std::string beam1 = serialize_model(train(labeled, *b.db, b.target, b.modes, cfg), b.schema());
  cfg.jobs = 3;
  EXPECT_EQ(serialize_model(train(labeled, *b.db, b.target, b.modes, cfg), b.schema()), beam1);
}

TEST(Train, SubsamplingSeedChangesTheSample) {
  DatasetBundle b = small_synthetic();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 3;
  cfg.lambda = 100;
  cfg.negative_subsample_ratio = 0.5;
  TrainingTrace t1, t2;
  cfg.seed = 1;
  RLRModel a = train(labeled, *b.db, b.target, b.modes, cfg, &t1);
  cfg.seed = 2;
  RLRModel c = train(labeled, *b.db, b.target, b.modes, cfg, &t2);
  EXPECT_NE(a, c);
  // NLL is always reported on the full training set.
  EXPECT_EQ(t1.initial_nll, t2.initial_nll);
}

TEST(Train, ProgressLog) {
  DatasetBundle b = smokes_toy();
  auto labeled = b.labeled();
  BoostConfig cfg;
  cfg.iterations = 2;
  cfg.lambda = 1;
  std::ostringstream log;
  train(labeled, *b.db, b.target, b.modes, cfg, nullptr, &log);
  std::istringstream in(log.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "iteration\tclause\tw0\tw1\tw2\ttraining_nll");
  EXPECT_EQ(lines[1].rfind("0\tprior\t0\t0\t0\t", 0), 0u) << lines[1];
  EXPECT_EQ(lines[2].rfind("1\tcancer(A) :- ", 0), 0u) << lines[2];
  EXPECT_EQ(lines[3].rfind("2\t", 0), 0u);
}

TEST(Train, ProgressLineFormat) {
  IterationRecord r{3, "cancer(A) :- smokes(A)", {0.5, -0.25, 0.0}, 1.5};
  EXPECT_EQ(format_progress_line(r), "3\tcancer(A) :- smokes(A)\t0.5\t-0.25\t0\t1.5");
}
