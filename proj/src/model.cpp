#include "rlr/model.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "rlr/error.hpp"
#include "text/atom_parser.hpp"
#include "text/lexer.hpp"

namespace rlr {

double sigmoid(double z) {
  double e = std::exp(-std::abs(z));
  return z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

namespace {

std::string var_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "V" + std::to_string(i);
}

std::vector<std::pair<std::string, TypeId>> head_vars(const Schema& schema, const Atom& head) {
  return schema.variable_types(std::span<const Atom>(&head, 1));
}

std::vector<Constant> head_values(const Atom& example) {
  std::vector<Constant> out;
  out.reserve(example.args.size());
  for (const Term& t : example.args) out.push_back(std::get<Constant>(t));
  return out;
}

void check_example(const Schema& schema, PredId target, const Atom& example) {
  auto describe = [&] {
    try {
      return format_atom(schema, example);
    } catch (const Error&) {
      return std::string("<malformed atom>");
    }
  };
  if (example.pred != target) {
    throw TypingError("example " + describe() + " is not an atom of target '" +
                      schema.predicate(target).functor + "'");
  }
  try {
    schema.check_atom(example);
  } catch (const Error& e) {
    throw TypingError("ill-typed example " + describe() + ": " + e.what());
  }
  if (!example.is_ground()) throw TypingError("example " + describe() + " is not ground");
}

}  // namespace

Atom canonical_head(const Schema& schema, PredId target) {
  Atom head{target, {}};
  for (std::size_t i = 0; i < schema.predicate(target).arity(); ++i) head.args.emplace_back(Var{var_name(i)});
  return head;
}

Substitution head_binding(const Atom& head, const Atom& example) {
  if (head.pred != example.pred || head.args.size() != example.args.size()) {
    throw TypingError("example does not match the clause head");
  }
  Substitution theta;
  for (std::size_t i = 0; i < head.args.size(); ++i) {
    const auto& v = std::get<Var>(head.args[i]);
    const auto* c = std::get_if<Constant>(&example.args[i]);
    if (c == nullptr) throw TypingError("example must be ground");
    theta.emplace(v.name, *c);
  }
  return theta;
}

void check_clause(const Schema& schema, PredId target, const VectorWeightedClause& clause) {
  if (clause.head.pred != target) throw SchemaError("clause head is not the target predicate");
  schema.check_atom(clause.head);
  std::set<std::string> seen;
  for (const Term& t : clause.head.args) {
    const auto* v = std::get_if<Var>(&t);
    if (v == nullptr) throw SchemaError("clause head arguments must be logvars");
    if (!seen.insert(v->name).second) throw SchemaError("clause head logvars must be distinct");
  }
  for (const Atom& lit : clause.body) {
    if (lit.pred == target) throw SchemaError("clause body may not use the target predicate");
  }
  std::vector<Atom> all{clause.head};
  all.insert(all.end(), clause.body.begin(), clause.body.end());
  schema.variable_types(all);
  for (double w : clause.weights) {
    if (!std::isfinite(w)) throw SchemaError("clause weights must be finite");
  }
}

std::string format_clause(const Schema& schema, const VectorWeightedClause& clause) {
  std::string out = format_atom(schema, clause.head);
  if (!clause.body.empty()) out += " :- " + format_body(schema, clause.body);
  return out;
}

double clause_value(const std::array<double, 3>& weights, const GroundingCounts& counts) {
  return weights[0] + weights[1] * static_cast<double>(counts.true_count) +
         weights[2] * static_cast<double>(counts.false_count);
}

double regression_value(const RLRModel& model, const Atom& example, const FactDatabase& db) {
  check_example(db.schema(), model.target, example);
  double value = model.gamma;
  for (const VectorWeightedClause& clause : model.clauses) {
    value += clause_value(clause.weights, count_groundings(clause.body, head_binding(clause.head, example), db));
  }
  return value;
}

double regression_value(const RLRModel& model, const Substitution& example_binding, const FactDatabase& db) {
  double value = model.gamma;
  for (const VectorWeightedClause& clause : model.clauses) {
    Substitution theta;
    for (const Term& t : clause.head.args) {
      const auto& v = std::get<Var>(t);
      auto it = example_binding.find(v.name);
      if (it == example_binding.end()) throw ArgumentError("binding leaves head logvar " + v.name + " unbound");
      theta.emplace(v.name, it->second);
    }
    value += clause_value(clause.weights, count_groundings(clause.body, theta, db));
  }
  return value;
}

std::vector<ExampleScore> predict(const RLRModel& model, std::span<const Atom> examples, const FactDatabase& db) {
  const Schema& schema = db.schema();
  for (const Atom& example : examples) check_example(schema, model.target, example);

  std::vector<GroundingCounter> counters;
  counters.reserve(model.clauses.size());
  for (const VectorWeightedClause& clause : model.clauses) {
    auto bound = head_vars(schema, clause.head);
    counters.emplace_back(schema, clause.body, bound);
  }
  std::vector<ExampleScore> out;
  out.reserve(examples.size());
  for (const Atom& example : examples) {
    auto values = head_values(example);
    double value = model.gamma;
    for (std::size_t c = 0; c < counters.size(); ++c) {
      value += clause_value(model.clauses[c].weights, counters[c].count(db, values));
    }
    out.push_back(ExampleScore{example, value, sigmoid(value)});
  }
  return out;
}

std::string serialize_model(const RLRModel& model, const Schema& schema) {
  const PredicateSignature& sig = schema.predicate(model.target);
  std::string out = "rlr-model v1\ntarget " + sig.functor + "(";
  for (std::size_t i = 0; i < sig.arg_types.size(); ++i) {
    if (i > 0) out += ", ";
    out += schema.population(sig.arg_types[i]).name;
  }
  out += ")\ngamma " + format_double(model.gamma) + "\n";
  for (const VectorWeightedClause& clause : model.clauses) {
    out += "clause [" + format_double(clause.weights[0]) + ", " + format_double(clause.weights[1]) + ", " +
           format_double(clause.weights[2]) + "] :: " + format_clause(schema, clause) + "\n";
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct ModelReader {
  const Schema& schema;
  const std::string& source;

  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) const {
    throw ParseError(source, line, col, msg);
  }

  PredId read_target(std::string_view rest, std::size_t line, std::size_t col) const {
    text::Lexer lex(rest, source, line, col);
    text::Token functor = lex.expect(text::Tok::kIdent, "target predicate name");
    auto pred = schema.find_predicate(functor.text);
    if (!pred) lex.fail(functor, "unknown predicate '" + functor.text + "'");
    const PredicateSignature& sig = schema.predicate(*pred);
    std::vector<std::string> types;
    lex.expect(text::Tok::kLParen, "'('");
    do {
      types.push_back(lex.expect(text::Tok::kIdent, "population name").text);
    } while (lex.accept(text::Tok::kComma));
    lex.expect(text::Tok::kRParen, "')'");
    if (lex.peek().kind != text::Tok::kEnd) lex.fail(lex.peek(), "trailing text after target");
    bool same = types.size() == sig.arity();
    for (std::size_t i = 0; same && i < types.size(); ++i) {
      same = schema.population(sig.arg_types[i]).name == types[i];
    }
    if (!same) lex.fail(functor, "target '" + functor.text + "' does not match the data schema signature");
    return *pred;
  }

  VectorWeightedClause read_clause(std::string_view line_text, std::size_t rest_offset, std::size_t line,
                                   PredId target) const {
    std::string_view rest = line_text.substr(rest_offset);
    std::size_t open = rest.find('[');
    std::size_t close = rest.find(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
        !trim(rest.substr(0, open)).empty()) {
      fail(line, rest_offset + 1, "expected weight vector '[w0, w1, w2]'");
    }
    VectorWeightedClause clause;
    std::string_view weights = rest.substr(open + 1, close - open - 1);
    std::size_t field_start = 0;
    for (int k = 0; k < 3; ++k) {
      std::size_t comma = weights.find(',', field_start);
      if ((k < 2) != (comma != std::string_view::npos)) {
        fail(line, rest_offset + open + 1, "weight vector must have exactly three entries");
      }
      std::string_view field = weights.substr(field_start, k < 2 ? comma - field_start : std::string_view::npos);
      auto value = parse_double(trim(field));
      std::size_t col = rest_offset + open + 2 + field_start;
      if (!value) fail(line, col, "malformed weight '" + std::string(trim(field)) + "'");
      if (!std::isfinite(*value)) fail(line, col, "weights must be finite");
      clause.weights[k] = *value;
      field_start = comma + 1;
    }
    std::size_t after = rest_offset + close + 1;
    std::string_view tail = line_text.substr(after);
    std::size_t sep = tail.find("::");
    if (sep == std::string_view::npos || !trim(tail.substr(0, sep)).empty()) {
      fail(line, after + 1, "expected '::' after the weight vector");
    }
    std::size_t clause_col = after + sep + 2;
    text::Lexer lex(line_text.substr(clause_col), source, line, clause_col + 1);
    text::Token head_tok = lex.peek();
    clause.head = text::parse_clause_atom(lex, schema);
    if (lex.accept(text::Tok::kImplies)) {
      do {
        text::Token at = lex.peek();
        clause.body.push_back(text::parse_clause_atom(lex, schema));
        if (clause.body.back().pred == target) lex.fail(at, "clause body may not use the target predicate");
      } while (lex.accept(text::Tok::kComma));
    }
    if (lex.peek().kind != text::Tok::kEnd) lex.fail(lex.peek(), "trailing text after clause");
    if (clause.head.pred != target) {
      lex.fail(head_tok, "clause head '" + schema.predicate(clause.head.pred).functor + "' is not the target");
    }
    try {
      check_clause(schema, target, clause);
    } catch (const Error& e) {
      lex.fail(head_tok, e.what());
    }
    return clause;
  }
};

}  // namespace

RLRModel deserialize_model(std::string_view text, const Schema& schema, const std::string& source) {
  ModelReader reader{schema, source};
  RLRModel model;
  bool seen_header = false, seen_target = false, seen_gamma = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    std::string_view body = trim(line);
    if (body.empty() || body.front() == '%') continue;
    std::size_t indent = line.find_first_not_of(" \t");
    std::size_t word_end = line.find_first_of(" \t", indent);
    std::string_view word = line.substr(indent, word_end == std::string_view::npos ? std::string_view::npos
                                                                                   : word_end - indent);
    std::size_t rest_offset = word_end == std::string_view::npos ? line.size() : word_end;

    if (!seen_header) {
      if (body != "rlr-model v1") reader.fail(line_no, indent + 1, "expected header 'rlr-model v1'");
      seen_header = true;
    } else if (word == "target") {
      if (seen_target) reader.fail(line_no, indent + 1, "duplicate target line");
      model.target = reader.read_target(line.substr(rest_offset), line_no, rest_offset + 1);
      seen_target = true;
    } else if (word == "gamma") {
      if (seen_gamma) reader.fail(line_no, indent + 1, "duplicate gamma line");
      auto value = parse_double(trim(line.substr(rest_offset)));
      if (!value || !std::isfinite(*value)) reader.fail(line_no, rest_offset + 2, "malformed gamma value");
      model.gamma = *value;
      seen_gamma = true;
    } else if (word == "clause") {
      if (!seen_target) reader.fail(line_no, indent + 1, "clause before target line");
      model.clauses.push_back(reader.read_clause(line, rest_offset, line_no, model.target));
    } else {
      reader.fail(line_no, indent + 1, "unexpected line '" + std::string(word) + "'");
    }
  }
  if (!seen_header) reader.fail(1, 1, "empty model file");
  if (!seen_target) reader.fail(line_no, 1, "missing target line");
  if (!seen_gamma) reader.fail(line_no, 1, "missing gamma line");
  return model;
}

}  // namespace rlr
