#include <algorithm>
#include <unordered_set>

#include "rlr/error.hpp"
#include "rlr/logic.hpp"

namespace rlr {

namespace {

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

struct TupleHash {
  std::size_t arity;
  const std::vector<ConstId>* data;
  std::size_t operator()(std::uint32_t row) const {
    std::span<const ConstId> t(data->data() + row * arity, arity);
    return Relation::hash_key(0, t);
  }
};

}  // namespace

std::uint64_t Relation::hash_key(std::uint32_t mask, std::span<const ConstId> key) {
  std::uint64_t h = mix(0x9e3779b97f4a7c15ULL ^ mask);
  for (ConstId v : key) h = mix(h ^ (v + 0x632be59bd9b4e019ULL));
  return h;
}

Relation::Relation(std::size_t arity, std::vector<ConstId> tuples) : arity_(arity) {
  // Set semantics: keep the first occurrence of each tuple.
  std::size_t rows = arity_ == 0 ? 0 : tuples.size() / arity_;
  auto same = [&](std::uint32_t a, std::uint32_t b) {
    return std::equal(tuples.begin() + a * arity_, tuples.begin() + (a + 1) * arity_,
                      tuples.begin() + b * arity_);
  };
  std::unordered_set<std::uint32_t, TupleHash, decltype(same)> seen(rows, TupleHash{arity_, &tuples},
                                                                    same);
  for (std::size_t r = 0; r < rows; ++r) {
    if (seen.insert(static_cast<std::uint32_t>(r)).second) {
      tuples_.insert(tuples_.end(), tuples.begin() + r * arity_, tuples.begin() + (r + 1) * arity_);
    }
  }
  all_rows_.resize(size());
  for (std::size_t r = 0; r < all_rows_.size(); ++r) all_rows_[r] = static_cast<std::uint32_t>(r);

  if (arity_ > kMaxIndexedArity) return;
  std::uint32_t masks = 1u << arity_;
  indexes_.resize(masks);
  std::vector<ConstId> key;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    auto& index = indexes_[mask];
    index.reserve(size());
    for (std::size_t r = 0; r < size(); ++r) {
      key.clear();
      auto t = tuple(r);
      for (std::size_t p = 0; p < arity_; ++p) {
        if (mask & (1u << p)) key.push_back(t[p]);
      }
      index[hash_key(mask, key)].push_back(static_cast<std::uint32_t>(r));
    }
  }
}

std::span<const std::uint32_t> Relation::candidates(std::uint32_t mask, std::span<const ConstId> key) const {
  if (mask == 0 || indexes_.empty()) return all_rows_;
  const auto& index = indexes_[mask];
  auto it = index.find(hash_key(mask, key));
  if (it == index.end()) return {};
  return it->second;
}

bool Relation::contains(std::span<const ConstId> values) const {
  std::uint32_t full = arity_ <= kMaxIndexedArity ? (1u << arity_) - 1 : 0;
  for (std::uint32_t row : candidates(full, values)) {
    auto t = tuple(row);
    if (std::equal(t.begin(), t.end(), values.begin())) return true;
  }
  return false;
}

FactDatabase::FactDatabase(std::shared_ptr<const Schema> schema, std::span<const Atom> facts)
    : schema_(std::move(schema)) {
  if (!schema_) throw SchemaError("fact database needs a schema");
  std::vector<std::vector<ConstId>> per_pred(schema_->predicate_count());
  for (const Atom& fact : facts) {
    schema_->check_atom(fact);
    if (!fact.is_ground()) throw TypingError("fact must be ground");
    auto& out = per_pred[fact.pred];
    for (const Term& t : fact.args) out.push_back(std::get<Constant>(t).id);
  }
  for (PredId p = 0; p < schema_->predicate_count(); ++p) {
    const PredicateSignature& sig = schema_->predicate(p);
    for (TypeId t : sig.arg_types) {
      if (schema_->population(t).size() == 0) {
        throw SchemaError("population '" + schema_->population(t).name + "' used by '" + sig.functor +
                          "' has no constants");
      }
    }
    relations_.emplace_back(sig.arity(), std::move(per_pred[p]));
  }
}

bool FactDatabase::holds(const Atom& ground_atom) const {
  schema_->check_atom(ground_atom);
  std::vector<ConstId> values;
  values.reserve(ground_atom.args.size());
  for (const Term& t : ground_atom.args) {
    const auto* c = std::get_if<Constant>(&t);
    if (c == nullptr) throw TypingError("holds() needs a ground atom");
    values.push_back(c->id);
  }
  return relations_.at(ground_atom.pred).contains(values);
}

std::size_t FactDatabase::fact_count() const {
  std::size_t n = 0;
  for (const Relation& r : relations_) n += r.size();
  return n;
}

std::vector<Atom> FactDatabase::facts() const {
  std::vector<Atom> out;
  out.reserve(fact_count());
  for (PredId p = 0; p < relations_.size(); ++p) {
    const auto& types = schema_->predicate(p).arg_types;
    const Relation& rel = relations_[p];
    for (std::size_t r = 0; r < rel.size(); ++r) {
      Atom atom{p, {}};
      auto t = rel.tuple(r);
      for (std::size_t i = 0; i < t.size(); ++i) atom.args.emplace_back(Constant{types[i], t[i]});
      out.push_back(std::move(atom));
    }
  }
  return out;
}

}  // namespace rlr
