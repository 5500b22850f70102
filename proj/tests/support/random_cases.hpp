#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rlr/logic.hpp"

namespace cases {

struct CountingCase {
  std::shared_ptr<const rlr::FactDatabase> db;
  std::vector<rlr::Atom> body;
  rlr::Substitution binding;
};

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Up to 3 populations of 1..5 constants, up to 4 predicates of arity 1..3,
// random facts, a body of 1..3 literals mixing logvars and constants, and
// a random subset of its logvars bound.
inline CountingCase random_counting_case(std::mt19937_64& rng) {
  auto schema = std::make_shared<rlr::Schema>();
  int n_pops = pick(rng, 1, 3);
  for (int p = 0; p < n_pops; ++p) {
    std::vector<std::string> names;
    int size = pick(rng, 1, 5);
    for (int c = 0; c < size; ++c) names.push_back("c" + std::to_string(p) + "_" + std::to_string(c));
    schema->declare_population("t" + std::to_string(p), names);
  }
  int n_preds = pick(rng, 1, 4);
  for (int q = 0; q < n_preds; ++q) {
    std::vector<rlr::TypeId> types;
    int arity = pick(rng, 1, 3);
    for (int a = 0; a < arity; ++a) types.push_back(static_cast<rlr::TypeId>(pick(rng, 0, n_pops - 1)));
    schema->add_predicate("q" + std::to_string(q), types);
  }

  std::vector<rlr::Atom> facts;
  double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (rlr::PredId q = 0; q < schema->predicate_count(); ++q) {
    const auto& sig = schema->predicate(q);
    std::size_t total = 1;
    for (auto t : sig.arg_types) total *= schema->population(t).size();
    for (std::size_t g = 0; g < total; ++g) {
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= density) continue;
      rlr::Atom a{q, {}};
      std::size_t rest = g;
      std::vector<rlr::Term> args(sig.arity());
      for (std::size_t k = sig.arity(); k-- > 0;) {
        std::size_t n = schema->population(sig.arg_types[k]).size();
        args[k] = rlr::Constant{sig.arg_types[k], static_cast<rlr::ConstId>(rest % n)};
        rest /= n;
      }
      a.args = std::move(args);
      facts.push_back(std::move(a));
    }
  }
  // Occasional duplicate facts exercise set semantics.
  if (!facts.empty() && pick(rng, 0, 3) == 0) facts.push_back(facts[pick(rng, 0, static_cast<int>(facts.size()) - 1)]);

  CountingCase out;
  std::vector<std::pair<std::string, rlr::TypeId>> vars;
  int n_lits = pick(rng, 1, 3);
  for (int l = 0; l < n_lits; ++l) {
    rlr::PredId q = static_cast<rlr::PredId>(pick(rng, 0, n_preds - 1));
    const auto& sig = schema->predicate(q);
    rlr::Atom lit{q, {}};
    for (rlr::TypeId t : sig.arg_types) {
      int roll = pick(rng, 0, 9);
      if (roll == 0) {
        lit.args.emplace_back(
            rlr::Constant{t, static_cast<rlr::ConstId>(pick(rng, 0, static_cast<int>(schema->population(t).size()) - 1))});
        continue;
      }
      std::vector<std::string> same_type;
      for (const auto& [name, type] : vars) {
        if (type == t) same_type.push_back(name);
      }
      if (!same_type.empty() && roll <= 5) {
        lit.args.emplace_back(rlr::Var{same_type[pick(rng, 0, static_cast<int>(same_type.size()) - 1)]});
      } else {
        std::string name = "X" + std::to_string(vars.size());
        vars.emplace_back(name, t);
        lit.args.emplace_back(rlr::Var{name});
      }
    }
    out.body.push_back(std::move(lit));
  }
  for (const auto& [name, type] : vars) {
    if (pick(rng, 0, 2) == 0) {
      out.binding[name] =
          rlr::Constant{type, static_cast<rlr::ConstId>(pick(rng, 0, static_cast<int>(schema->population(type).size()) - 1))};
    }
  }
  out.db = std::make_shared<const rlr::FactDatabase>(schema, facts);
  return out;
}

}  // namespace cases
