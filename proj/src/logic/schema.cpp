#include <algorithm>

#include "rlr/error.hpp"
#include "rlr/logic.hpp"

namespace rlr {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return is_var(t); });
}

std::size_t AtomHash::operator()(const Atom& atom) const noexcept {
  std::size_t h = std::hash<PredId>{}(atom.pred) * 0x9e3779b97f4a7c15ULL;
  for (const Term& t : atom.args) {
    std::size_t v;
    if (const auto* c = std::get_if<Constant>(&t)) {
      v = (static_cast<std::size_t>(c->type) << 32) ^ c->id;
    } else {
      v = std::hash<std::string>{}(std::get<Var>(t).name) ^ 0x5bd1e995;
    }
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

TypeId Schema::add_population(const std::string& name) {
  if (auto found = find_population(name)) return *found;
  auto id = static_cast<TypeId>(populations_.size());
  populations_.push_back(Population{name, {}, {}, false});
  population_index_.emplace(name, id);
  return id;
}

TypeId Schema::declare_population(const std::string& name, std::span<const std::string> constants) {
  if (auto found = find_population(name)) {
    const Population& existing = populations_[*found];
    if (existing.closed || !existing.constants.empty()) {
      throw SchemaError("population '" + name + "' declared twice");
    }
  }
  TypeId id = add_population(name);
  for (const std::string& c : constants) {
    if (populations_[id].index.contains(c)) {
      throw SchemaError("constant '" + c + "' repeated in population '" + name + "'");
    }
    add_constant(id, c);
  }
  populations_[id].closed = true;
  return id;
}

ConstId Schema::add_constant(TypeId type, std::string_view name) {
  Population& pop = populations_.at(type);
  std::string key(name);
  if (auto it = pop.index.find(key); it != pop.index.end()) return it->second;
  if (pop.closed) {
    std::string where;
    for (const Population& other : populations_) {
      if (other.index.contains(key)) {
        where = " (it belongs to population '" + other.name + "')";
        break;
      }
    }
    throw TypingError("constant '" + key + "' is not in population '" + pop.name + "'" + where);
  }
  auto id = static_cast<ConstId>(pop.constants.size());
  pop.constants.push_back(key);
  pop.index.emplace(std::move(key), id);
  return id;
}

PredId Schema::add_predicate(const std::string& functor, std::vector<TypeId> arg_types) {
  if (arg_types.empty()) throw SchemaError("predicate '" + functor + "' must have arity >= 1");
  for (TypeId t : arg_types) {
    if (t >= populations_.size()) {
      throw SchemaError("predicate '" + functor + "' uses an undeclared population");
    }
  }
  if (auto found = find_predicate(functor)) {
    if (predicates_[*found].arg_types != arg_types) {
      throw SchemaError("conflicting signatures for predicate '" + functor + "'");
    }
    return *found;
  }
  auto id = static_cast<PredId>(predicates_.size());
  predicates_.push_back(PredicateSignature{functor, std::move(arg_types)});
  predicate_index_.emplace(functor, id);
  return id;
}

std::optional<TypeId> Schema::find_population(std::string_view name) const {
  auto it = population_index_.find(std::string(name));
  if (it == population_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PredId> Schema::find_predicate(std::string_view functor) const {
  auto it = predicate_index_.find(std::string(functor));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Constant> Schema::find_constant(TypeId type, std::string_view name) const {
  const Population& pop = population(type);
  auto it = pop.index.find(std::string(name));
  if (it == pop.index.end()) return std::nullopt;
  return Constant{type, it->second};
}

TypeId Schema::population_id(std::string_view name) const {
  if (auto id = find_population(name)) return *id;
  throw SchemaError("undeclared population '" + std::string(name) + "'");
}

PredId Schema::predicate_id(std::string_view functor) const {
  if (auto id = find_predicate(functor)) return *id;
  throw SchemaError("undeclared predicate '" + std::string(functor) + "'");
}

const Population& Schema::population(TypeId type) const {
  if (type >= populations_.size()) throw SchemaError("unknown population id " + std::to_string(type));
  return populations_[type];
}

const PredicateSignature& Schema::predicate(PredId pred) const {
  if (pred >= predicates_.size()) throw SchemaError("unknown predicate id " + std::to_string(pred));
  return predicates_[pred];
}

const std::string& Schema::constant_name(const Constant& c) const {
  const Population& pop = population(c.type);
  if (c.id >= pop.size()) {
    throw TypingError("constant id " + std::to_string(c.id) + " out of range for population '" +
                      pop.name + "'");
  }
  return pop.constants[c.id];
}

void Schema::check_atom(const Atom& atom) const {
  const PredicateSignature& sig = predicate(atom.pred);
  if (atom.args.size() != sig.arity()) {
    throw TypingError("'" + sig.functor + "' expects " + std::to_string(sig.arity()) +
                      " arguments, got " + std::to_string(atom.args.size()));
  }
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const auto* c = std::get_if<Constant>(&atom.args[i]);
    if (c == nullptr) continue;
    TypeId expected = sig.arg_types[i];
    if (c->type != expected || c->id >= population(expected).size()) {
      throw TypingError("argument " + std::to_string(i + 1) + " of '" + sig.functor +
                        "' must be a constant of population '" + population(expected).name + "'");
    }
  }
}

std::vector<std::pair<std::string, TypeId>> Schema::variable_types(std::span<const Atom> atoms) const {
  std::vector<std::pair<std::string, TypeId>> out;
  for (const Atom& atom : atoms) {
    check_atom(atom);
    const PredicateSignature& sig = predicate(atom.pred);
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      const auto* v = std::get_if<Var>(&atom.args[i]);
      if (v == nullptr) continue;
      TypeId type = sig.arg_types[i];
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == v->name; });
      if (it == out.end()) {
        out.emplace_back(v->name, type);
      } else if (it->second != type) {
        throw TypingError("logvar " + v->name + " used as both '" + population(it->second).name +
                          "' and '" + population(type).name + "'");
      }
    }
  }
  return out;
}

Atom apply_substitution(const Atom& atom, const Substitution& theta, const Schema& schema) {
  const PredicateSignature& sig = schema.predicate(atom.pred);
  if (atom.args.size() != sig.arity()) {
    throw TypingError("'" + sig.functor + "' expects " + std::to_string(sig.arity()) + " arguments");
  }
  Atom out = atom;
  for (std::size_t i = 0; i < out.args.size(); ++i) {
    const auto* v = std::get_if<Var>(&out.args[i]);
    if (v == nullptr) continue;
    auto it = theta.find(v->name);
    if (it == theta.end()) continue;
    if (it->second.type != sig.arg_types[i]) {
      throw TypingError("binding " + v->name + "/" + schema.constant_name(it->second) +
                        " does not fit argument " + std::to_string(i + 1) + " of '" + sig.functor +
                        "' (population '" + schema.population(sig.arg_types[i]).name + "')");
    }
    out.args[i] = it->second;
  }
  return out;
}

void for_each_grounding(const Atom& pattern, const Schema& schema,
                        const std::function<void(const Substitution&)>& visit) {
  auto vars = schema.variable_types(std::span<const Atom>(&pattern, 1));
  std::vector<std::size_t> sizes;
  for (const auto& [name, type] : vars) {
    sizes.push_back(schema.population(type).size());
    if (sizes.back() == 0) return;
  }
  std::vector<ConstId> odometer(vars.size(), 0);
  Substitution theta;
  while (true) {
    theta.clear();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      theta.emplace(vars[i].first, Constant{vars[i].second, odometer[i]});
    }
    visit(theta);
    std::size_t pos = vars.size();
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < sizes[pos]) break;
      odometer[pos] = 0;
      if (pos == 0) return;
    }
    if (vars.empty()) return;
  }
}

std::vector<Substitution> enumerate_groundings(const Atom& pattern, const Schema& schema) {
  std::vector<Substitution> out;
  for_each_grounding(pattern, schema, [&](const Substitution& theta) { out.push_back(theta); });
  return out;
}

}  // namespace rlr

namespace rlr {

void check_mode(const Schema& schema, const ModeDeclaration& mode) {
  const PredicateSignature& sig = schema.predicate(mode.pred);
  if (mode.args.size() != sig.arity()) {
    throw SchemaError("mode for '" + sig.functor + "' has " + std::to_string(mode.args.size()) +
                      " arguments, signature has " + std::to_string(sig.arity()));
  }
  for (std::size_t i = 0; i < mode.args.size(); ++i) {
    if (mode.args[i].type != sig.arg_types[i]) {
      throw SchemaError("mode for '" + sig.functor + "' types argument " + std::to_string(i + 1) + " as '" +
                        schema.population(mode.args[i].type).name + "', signature says '" +
                        schema.population(sig.arg_types[i]).name + "'");
    }
  }
}

std::string format_mode(const Schema& schema, const ModeDeclaration& mode) {
  const PredicateSignature& sig = schema.predicate(mode.pred);
  std::string out = "mode: " + sig.functor + "(";
  for (std::size_t i = 0; i < mode.args.size(); ++i) {
    if (i > 0) out += ", ";
    switch (mode.args[i].mode) {
      case ArgMode::kInput: out += '+'; break;
      case ArgMode::kOutput: out += '-'; break;
      case ArgMode::kConstant: out += '#'; break;
    }
    out += schema.population(mode.args[i].type).name;
  }
  return out + ").";
}

}  // namespace rlr
