#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "rlr/error.hpp"
#include "rlr/logic.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_cases.hpp"

using namespace rlr;

namespace {

Constant constant(const Schema& s, const char* pop, const char* name) {
  return *s.find_constant(s.population_id(pop), name);
}

}  // namespace

TEST(Schema, ClosedPopulationRejectsNewConstants) {
  Schema s;
  std::vector<std::string> names{"a", "b"};
  TypeId t = s.declare_population("thing", names);
  EXPECT_EQ(s.add_constant(t, "a"), 0u);
  EXPECT_THROW(s.add_constant(t, "c"), TypingError);
}

TEST(Schema, RepeatedConstantInDeclarationIsRejected) {
  Schema s;
  std::vector<std::string> names{"a", "a"};
  EXPECT_THROW(s.declare_population("thing", names), SchemaError);
}

TEST(Schema, PredicateSignaturesMustAgree) {
  Schema s;
  TypeId a = s.add_population("a");
  TypeId b = s.add_population("b");
  PredId p = s.add_predicate("p", {a, b});
  EXPECT_EQ(s.add_predicate("p", {a, b}), p);
  EXPECT_THROW(s.add_predicate("p", {b, a}), SchemaError);
  EXPECT_THROW(s.add_predicate("q", {}), SchemaError);
  EXPECT_THROW(s.add_predicate("r", {7}), SchemaError);
}

TEST(Schema, EmptyPopulationIsRejectedByTheDatabase) {
  auto s = std::make_shared<Schema>();
  TypeId t = s->add_population("ghost");
  s->add_predicate("p", {t});
  EXPECT_THROW(FactDatabase(s, {}), SchemaError);
}

TEST(Schema, LogvarTypesMustBeConsistent) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  EXPECT_THROW(parse_body(s, "advisedby(X, Y), phd(Y)"), TypingError);
  auto types = s.variable_types(parse_body(s, "advisedby(S, P), phd(S)"));
  ASSERT_EQ(types.size(), 2u);
  EXPECT_EQ(types[0].first, "S");
  EXPECT_EQ(types[1].first, "P");
}

TEST(ApplySubstitution, ReplacesBoundLogvarsOnly) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  Atom pattern = parse_atom(s, "advisedby(S, P)");
  Constant p1 = constant(s, "person", "p1");
  Constant s1 = constant(s, "student", "s1");

  EXPECT_EQ(format_atom(s, apply_substitution(pattern, {{"P", p1}}, s)), "advisedby(S,p1)");
  Atom phd = parse_atom(s, "phd(S)");
  EXPECT_EQ(apply_substitution(phd, {}, s), phd);
  EXPECT_EQ(format_atom(s, apply_substitution(pattern, {{"S", s1}, {"P", p1}}, s)), "advisedby(s1,p1)");
}

TEST(ApplySubstitution, TypeMismatchIsATypingError) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  Atom pattern = parse_atom(s, "advisedby(S, P)");
  EXPECT_THROW(apply_substitution(pattern, {{"S", constant(s, "person", "p1")}}, s), TypingError);
}

TEST(ApplySubstitution, IsIdempotent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto c = cases::random_counting_case(rng);
    for (const Atom& lit : c.body) {
      Atom once = apply_substitution(lit, c.binding, c.db->schema());
      EXPECT_EQ(apply_substitution(once, c.binding, c.db->schema()), once);
    }
  }
}

TEST(CountGroundings, AdvisedPhdStudents) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  auto body = parse_body(s, "advisedby(S, P), phd(S)");
  Substitution theta{{"P", constant(s, "person", "p1")}};
  GroundingCounts c = count_groundings(body, theta, *db);
  EXPECT_EQ(c.true_count, 2u);
  EXPECT_EQ(c.false_count, 1u);
  auto [t, f] = oracle::brute_count(*db, body, theta);
  EXPECT_EQ(t, 2u);
  EXPECT_EQ(f, 1u);
}

TEST(CountGroundings, GroundBodyHasOneGrounding) {
  auto db = fixtures::advising_db();
  auto body = parse_body(db->schema(), "phd(s1)");
  EXPECT_EQ(count_groundings(body, {}, *db), (GroundingCounts{1, 0}));
}

TEST(CountGroundings, ClosedWorldWithNoFacts) {
  auto db = std::make_shared<const FactDatabase>(parse_facts("", fixtures::kAdvisingDeclarations));
  const Schema& s = db->schema();
  auto body = parse_body(s, "advisedby(S, P)");
  EXPECT_EQ(count_groundings(body, {{"P", constant(s, "person", "p1")}}, *db), (GroundingCounts{0, 3}));
}

TEST(CountGroundings, EmptyBodyIsOneTrueGrounding) {
  auto db = fixtures::advising_db();
  EXPECT_EQ(count_groundings({}, {}, *db), (GroundingCounts{1, 0}));
}

TEST(CountGroundings, UndeclaredPredicateIsASchemaError) {
  auto db = fixtures::advising_db();
  std::vector<Atom> body{Atom{99, {Var{"X"}}}};
  EXPECT_THROW(count_groundings(body, {}, *db), SchemaError);
}

TEST(CountGroundings, RepeatedLogvarInsideOneLiteral) {
  auto db = std::make_shared<const FactDatabase>(
      parse_facts("knows(a, a).\nknows(a, b).\nknows(b, c).\nknows(c, c).\n",
                  "population p = {a, b, c}.\npredicate knows(p, p).\n"));
  auto body = parse_body(db->schema(), "knows(X, X)");
  EXPECT_EQ(count_groundings(body, {}, *db), (GroundingCounts{2, 1}));
}

TEST(CountGroundings, MatchesBruteForceOnRandomCases) {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 1500; ++i) {
    auto c = cases::random_counting_case(rng);
    GroundingCounts got = count_groundings(c.body, c.binding, *c.db);
    auto [t, f] = oracle::brute_count(*c.db, c.body, c.binding);
    ASSERT_EQ(got.true_count, t) << "case " << i << ": " << format_body(c.db->schema(), c.body);
    ASSERT_EQ(got.false_count, f) << "case " << i;
  }
}

TEST(CountGroundings, TotalIsTheFreeVariableProduct) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    auto c = cases::random_counting_case(rng);
    const Schema& s = c.db->schema();
    GroundingCounts got = count_groundings(c.body, c.binding, *c.db);
    std::uint64_t product = 1;
    for (const auto& [name, type] : s.variable_types(c.body)) {
      if (!c.binding.count(name)) product *= s.population(type).size();
    }
    ASSERT_EQ(got.true_count + got.false_count, product);
  }
}

TEST(CountGroundings, AddingALiteralWithoutNewLogvarsNeverIncreasesTrueCount) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 300; ++i) {
    auto c = cases::random_counting_case(rng);
    if (c.body.size() < 2) continue;
    const Schema& s = c.db->schema();
    std::vector<Atom> prefix(c.body.begin(), c.body.end() - 1);
    auto before_vars = s.variable_types(prefix);
    auto after_vars = s.variable_types(c.body);
    if (before_vars.size() != after_vars.size()) continue;
    ++checked;
    EXPECT_LE(count_groundings(c.body, c.binding, *c.db).true_count,
              count_groundings(prefix, c.binding, *c.db).true_count);
  }
  EXPECT_GT(checked, 50);
}

TEST(GroundingCounter, ConcurrentReadersAgree) {
  std::mt19937_64 rng(3);
  auto c = cases::random_counting_case(rng);
  GroundingCounts expected = count_groundings(c.body, c.binding, *c.db);
  std::vector<GroundingCounts> results(8);
  {
    std::vector<std::jthread> workers;
    for (auto& r : results) {
      workers.emplace_back([&] { r = count_groundings(c.body, c.binding, *c.db); });
    }
  }
  for (const auto& r : results) EXPECT_EQ(r, expected);
}

TEST(EnumerateGroundings, CartesianProductInDeclarationOrder) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  auto subs = enumerate_groundings(parse_atom(s, "advisedby(S, P)"), s);
  ASSERT_EQ(subs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.constant_name(subs[i].at("S")), "s" + std::to_string(i + 1));
    EXPECT_EQ(s.constant_name(subs[i].at("P")), "p1");
  }
}

TEST(EnumerateGroundings, FirstLogvarVariesSlowest) {
  auto db = std::make_shared<const FactDatabase>(
      parse_facts("", "population p = {a, b}.\npopulation q = {x, y, z}.\npredicate r(p, q).\n"));
  const Schema& s = db->schema();
  auto subs = enumerate_groundings(parse_atom(s, "r(A, B)"), s);
  ASSERT_EQ(subs.size(), 6u);
  EXPECT_EQ(s.constant_name(subs[0].at("A")), "a");
  EXPECT_EQ(s.constant_name(subs[2].at("B")), "z");
  EXPECT_EQ(s.constant_name(subs[3].at("A")), "b");
}

TEST(EnumerateGroundings, GroundAtomGivesOneEmptySubstitution) {
  auto db = fixtures::advising_db();
  auto subs = enumerate_groundings(parse_atom(db->schema(), "phd(s2)"), db->schema());
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_TRUE(subs[0].empty());
}

TEST(EnumerateGroundings, UndeclaredTypeIsASchemaError) {
  auto db = fixtures::advising_db();
  Atom bad{42, {Var{"X"}}};
  EXPECT_THROW(enumerate_groundings(bad, db->schema()), SchemaError);
}

TEST(FactDatabase, DuplicateFactsCollapse) {
  FactDatabase db = parse_facts("phd(s1).\nphd(s1).\n", fixtures::kAdvisingDeclarations);
  EXPECT_EQ(db.fact_count(), 1u);
}

TEST(FactDatabase, HoldsIsClosedWorld) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  EXPECT_TRUE(db->holds(parse_atom(s, "advisedby(s1, p1)")));
  EXPECT_FALSE(db->holds(parse_atom(s, "advisedby(s3, p1)")));
  EXPECT_THROW(db->holds(parse_atom(s, "phd(S)")), TypingError);
}

TEST(Text, ConstantsThatLookLikeLogvarsAreQuoted) {
  EXPECT_EQ(format_constant("bob"), "bob");
  EXPECT_EQ(format_constant("Bob"), "'Bob'");
  EXPECT_EQ(format_constant("a b"), "'a b'");
}

TEST(Text, ParseAtomReportsLineAndColumn) {
  auto db = fixtures::advising_db();
  try {
    parse_atom(db->schema(), "advisedby(s1, nobody)");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 15u);
    EXPECT_NE(std::string(e.what()).find("nobody"), std::string::npos);
  }
}

TEST(Modes, FormatAndCheck) {
  auto db = fixtures::advising_db();
  const Schema& s = db->schema();
  ModeDeclaration m{s.predicate_id("advisedby"),
                    {{ArgMode::kOutput, s.population_id("student")}, {ArgMode::kInput, s.population_id("person")}}};
  EXPECT_EQ(format_mode(s, m), "mode: advisedby(-student, +person).");
  check_mode(s, m);
  m.args.pop_back();
  EXPECT_THROW(check_mode(s, m), SchemaError);
}
