#pragma once

#include <memory>
#include <string>

#include "rlr/data_io.hpp"
#include "rlr/logic.hpp"
#include "rlr/model.hpp"

namespace fixtures {

// persons {p1}, students {s1, s2, s3}; s1 and s2 are advised by p1; all
// three are PhD students.
inline const char* kAdvisingDeclarations =
    "population person = {p1}.\n"
    "population student = {s1, s2, s3}.\n"
    "predicate advisedby(student, person).\n"
    "predicate phd(student).\n"
    "predicate active(person).\n";

inline const char* kAdvisingFacts =
    "advisedby(s1, p1).\n"
    "advisedby(s2, p1).\n"
    "phd(s1).\nphd(s2).\nphd(s3).\n";

inline std::shared_ptr<const rlr::FactDatabase> advising_db() {
  return std::make_shared<const rlr::FactDatabase>(rlr::parse_facts(kAdvisingFacts, kAdvisingDeclarations));
}

// Five PhD students; p1 advises the first `advised_by_p1` of them, p2 the
// rest.
inline std::shared_ptr<const rlr::FactDatabase> professor_db(int advised_by_p1) {
  std::string facts;
  for (int i = 1; i <= 5; ++i) {
    facts += "phd(s" + std::to_string(i) + ").\n";
    facts += "advisedby(s" + std::to_string(i) + ", " + (i <= advised_by_p1 ? "p1" : "p2") + ").\n";
  }
  return std::make_shared<const rlr::FactDatabase>(rlr::parse_facts(
      facts,
      "population person = {p1, p2}.\n"
      "population student = {s1, s2, s3, s4, s5}.\n"
      "predicate advisedby(student, person).\npredicate phd(student).\npredicate active(person).\n"));
}

// active(A) with one clause [-3.5, 1, 0] :- advisedby(B, A), phd(B).
inline rlr::RLRModel professor_model(const rlr::Schema& schema) {
  rlr::RLRModel model;
  model.target = schema.predicate_id("active");
  rlr::VectorWeightedClause clause;
  clause.head = rlr::parse_atom(schema, "active(A)");
  clause.body = rlr::parse_body(schema, "advisedby(B, A), phd(B)");
  clause.weights = {-3.5, 1.0, 0.0};
  model.clauses.push_back(clause);
  return model;
}

}  // namespace fixtures
