#include <algorithm>
#include <limits>

#include "rlr/error.hpp"
#include "rlr/logic.hpp"

namespace rlr {

GroundingCounter::GroundingCounter(const Schema& schema, std::span<const Atom> body,
                                   std::span<const std::pair<std::string, TypeId>> bound_vars)
    : bound_count_(bound_vars.size()) {
  auto body_vars = schema.variable_types(body);

  std::vector<std::string> slot_names;
  for (const auto& [name, type] : bound_vars) {
    slot_names.push_back(name);
    slot_types_.push_back(type);
  }
  for (const auto& [name, type] : body_vars) {
    auto it = std::find(slot_names.begin(), slot_names.end(), name);
    if (it == slot_names.end()) {
      slot_names.push_back(name);
      slot_types_.push_back(type);
    } else if (slot_types_[it - slot_names.begin()] != type) {
      throw TypingError("logvar " + name + " is bound to a constant of population '" +
                        schema.population(slot_types_[it - slot_names.begin()]).name +
                        "' but used as '" + schema.population(type).name + "'");
    }
  }
  auto slot_of = [&](const std::string& name) {
    return static_cast<std::uint32_t>(std::find(slot_names.begin(), slot_names.end(), name) -
                                      slot_names.begin());
  };

  std::vector<bool> known(slot_names.size(), false);
  std::fill(known.begin(), known.begin() + bound_count_, true);
  std::vector<bool> placed(body.size(), false);

  for (std::size_t step = 0; step < body.size(); ++step) {
    std::size_t best = body.size();
    std::size_t best_known = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (placed[i]) continue;
      std::size_t k = 0;
      for (const Term& t : body[i].args) {
        if (const auto* v = std::get_if<Var>(&t)) {
          k += known[slot_of(v->name)] ? 1 : 0;
        } else {
          ++k;
        }
      }
      if (best == body.size() || k > best_known) {
        best = i;
        best_known = k;
      }
    }
    placed[best] = true;

    const Atom& atom = body[best];
    Literal lit{atom.pred, 0, {}};
    std::vector<std::uint32_t> bound_here;
    for (std::size_t p = 0; p < atom.args.size(); ++p) {
      if (const auto* c = std::get_if<Constant>(&atom.args[p])) {
        lit.mask |= 1u << p;
        lit.args.push_back({Arg::Kind::kConst, c->id});
        continue;
      }
      std::uint32_t slot = slot_of(std::get<Var>(atom.args[p]).name);
      if (known[slot]) {
        lit.mask |= 1u << p;
        lit.args.push_back({Arg::Kind::kBoundSlot, slot});
      } else if (std::find(bound_here.begin(), bound_here.end(), slot) != bound_here.end()) {
        lit.args.push_back({Arg::Kind::kRepeatSlot, slot});
      } else {
        bound_here.push_back(slot);
        lit.args.push_back({Arg::Kind::kBindSlot, slot});
      }
    }
    if (atom.args.size() > 31) lit.mask = 0;  // unindexed: scan and verify
    for (std::uint32_t s : bound_here) known[s] = true;
    literals_.push_back(std::move(lit));
  }
}

std::uint64_t GroundingCounter::total_groundings(const FactDatabase& db) const {
  std::uint64_t total = 1;
  for (std::size_t s = bound_count_; s < slot_types_.size(); ++s) {
    std::uint64_t n = db.schema().population(slot_types_[s]).size();
    if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n) {
      throw DataError("number of groundings overflows 64 bits");
    }
    total *= n;
  }
  return total;
}

GroundingCounts GroundingCounter::count(const FactDatabase& db, std::span<const Constant> bound_values) const {
  if (bound_values.size() != bound_count_) {
    throw ArgumentError("expected " + std::to_string(bound_count_) + " bound values, got " +
                        std::to_string(bound_values.size()));
  }
  std::vector<ConstId> slots(slot_types_.size(), 0);
  for (std::size_t i = 0; i < bound_count_; ++i) {
    const Constant& c = bound_values[i];
    if (c.type != slot_types_[i] || c.id >= db.schema().population(c.type).size()) {
      throw TypingError("bound value " + std::to_string(i) + " has the wrong population");
    }
    slots[i] = c.id;
  }
  GroundingCounts out;
  std::uint64_t total = total_groundings(db);
  out.true_count = join(db, 0, slots);
  out.false_count = total - out.true_count;
  return out;
}

std::uint64_t GroundingCounter::join(const FactDatabase& db, std::size_t level,
                                     std::vector<ConstId>& slots) const {
  if (level == literals_.size()) return 1;
  const Literal& lit = literals_[level];
  const Relation& rel = db.relation(lit.pred);

  ConstId key_buf[32];
  std::size_t key_len = 0;
  for (std::size_t p = 0; p < lit.args.size() && p < 32; ++p) {
    if (!(lit.mask & (1u << p))) continue;
    const Arg& a = lit.args[p];
    key_buf[key_len++] = a.kind == Arg::Kind::kConst ? a.value : slots[a.value];
  }

  std::uint64_t total = 0;
  for (std::uint32_t row : rel.candidates(lit.mask, std::span<const ConstId>(key_buf, key_len))) {
    auto t = rel.tuple(row);
    bool ok = true;
    for (std::size_t p = 0; p < lit.args.size() && ok; ++p) {
      const Arg& a = lit.args[p];
      switch (a.kind) {
        case Arg::Kind::kConst: ok = t[p] == a.value; break;
        case Arg::Kind::kBoundSlot:
        case Arg::Kind::kRepeatSlot: ok = t[p] == slots[a.value]; break;
        case Arg::Kind::kBindSlot: slots[a.value] = t[p]; break;
      }
    }
    if (ok) total += join(db, level + 1, slots);
  }
  return total;
}

GroundingCounts count_groundings(std::span<const Atom> body, const Substitution& head_binding,
                                 const FactDatabase& db) {
  std::vector<std::pair<std::string, TypeId>> bound;
  std::vector<Constant> values;
  for (const auto& [name, c] : head_binding) {
    bound.emplace_back(name, c.type);
    values.push_back(c);
  }
  GroundingCounter counter(db.schema(), body, bound);
  return counter.count(db, values);
}

}  // namespace rlr
