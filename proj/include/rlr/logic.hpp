#pragma once

// Typed finite-domain, function-free first-order logic: populations,
// predicate signatures, atoms, substitutions and a closed-world fact
// database with true/false grounding counts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace rlr {

using TypeId = std::uint32_t;
using PredId = std::uint32_t;
using ConstId = std::uint32_t;

// A constant is identified by its population and its index in it; the same
// spelling in two populations denotes two different objects.
struct Constant {
  TypeId type = 0;
  ConstId id = 0;

  friend bool operator==(const Constant&, const Constant&) = default;
  friend auto operator<=>(const Constant&, const Constant&) = default;
};

struct Var {
  std::string name;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

using Term = std::variant<Var, Constant>;

inline bool is_var(const Term& t) { return std::holds_alternative<Var>(t); }

struct Atom {
  PredId pred = 0;
  std::vector<Term> args;

  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct AtomHash {
  std::size_t operator()(const Atom& atom) const noexcept;
};

// Maps logvar names to constants. std::map keeps iteration deterministic.
using Substitution = std::map<std::string, Constant>;

struct Population {
  std::string name;
  std::vector<std::string> constants;
  std::unordered_map<std::string, ConstId> index;
  // Explicitly declared populations do not grow when unseen constants show up.
  bool closed = false;

  std::size_t size() const { return constants.size(); }
};

struct PredicateSignature {
  std::string functor;
  std::vector<TypeId> arg_types;

  std::size_t arity() const { return arg_types.size(); }
};

// Populations and predicate signatures. Mutable while a data set is being
// loaded; shared as `std::shared_ptr<const Schema>` afterwards.
class Schema {
 public:
  TypeId add_population(const std::string& name);
  // Declares a population with a fixed constant list. Throws SchemaError if
  // the name is taken or a constant repeats.
  TypeId declare_population(const std::string& name, std::span<const std::string> constants);
  // Returns the existing id when the constant is already present. Throws
  // TypingError when the population is closed and the constant is new.
  ConstId add_constant(TypeId type, std::string_view name);
  // Idempotent for an identical signature; SchemaError on a conflicting one.
  PredId add_predicate(const std::string& functor, std::vector<TypeId> arg_types);

  std::optional<TypeId> find_population(std::string_view name) const;
  std::optional<PredId> find_predicate(std::string_view functor) const;
  std::optional<Constant> find_constant(TypeId type, std::string_view name) const;

  TypeId population_id(std::string_view name) const;  // SchemaError if absent
  PredId predicate_id(std::string_view functor) const;  // SchemaError if absent

  const Population& population(TypeId type) const;
  const PredicateSignature& predicate(PredId pred) const;
  std::size_t population_count() const { return populations_.size(); }
  std::size_t predicate_count() const { return predicates_.size(); }

  const std::string& constant_name(const Constant& c) const;

  // Arity, argument types and constant ranges. SchemaError for an unknown
  // predicate, TypingError for a mistyped argument.
  void check_atom(const Atom& atom) const;
  // Types of the logvars of `atoms`, in order of first appearance. Throws
  // TypingError when one logvar is used at positions of different types.
  std::vector<std::pair<std::string, TypeId>> variable_types(std::span<const Atom> atoms) const;

 private:
  std::vector<Population> populations_;
  std::vector<PredicateSignature> predicates_;
  std::unordered_map<std::string, TypeId> population_index_;
  std::unordered_map<std::string, PredId> predicate_index_;
};

enum class ArgMode : std::uint8_t {
  kInput,     // +  an existing logvar
  kOutput,    // -  an existing logvar or one fresh logvar
  kConstant,  // #  each constant of the population
};

struct ModeArg {
  ArgMode mode = ArgMode::kInput;
  TypeId type = 0;

  friend bool operator==(const ModeArg&, const ModeArg&) = default;
};

// Search constraint for one predicate, e.g. `mode: advisedby(-student, +person).`
struct ModeDeclaration {
  PredId pred = 0;
  std::vector<ModeArg> args;

  friend bool operator==(const ModeDeclaration&, const ModeDeclaration&) = default;
};

// SchemaError when arity or argument types disagree with the signature.
void check_mode(const Schema& schema, const ModeDeclaration& mode);
std::string format_mode(const Schema& schema, const ModeDeclaration& mode);

// Ground facts of one predicate, with hash indexes over every projection of
// bound argument positions.
class Relation {
 public:
  Relation(std::size_t arity, std::vector<ConstId> tuples);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return arity_ == 0 ? 0 : tuples_.size() / arity_; }
  std::span<const ConstId> tuple(std::size_t row) const {
    return {tuples_.data() + row * arity_, arity_};
  }
  bool contains(std::span<const ConstId> values) const;

  // Rows whose positions in `mask` may equal `key` (hash bucket; callers
  // verify). `key` holds the values of the masked positions in order.
  std::span<const std::uint32_t> candidates(std::uint32_t mask, std::span<const ConstId> key) const;

  static std::uint64_t hash_key(std::uint32_t mask, std::span<const ConstId> key);

 private:
  static constexpr std::size_t kMaxIndexedArity = 6;

  std::size_t arity_;
  std::vector<ConstId> tuples_;
  std::vector<std::uint32_t> all_rows_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> indexes_;
};

// Closed-world truth assignment over a fixed schema: an atom holds iff it
// was given as a fact. Immutable and safe for concurrent readers.
class FactDatabase {
 public:
  // Duplicate facts collapse. Every fact must be ground and well typed.
  // Throws SchemaError if a population referenced by a predicate is empty.
  FactDatabase(std::shared_ptr<const Schema> schema, std::span<const Atom> facts);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

  bool holds(const Atom& ground_atom) const;
  const Relation& relation(PredId pred) const { return relations_.at(pred); }
  std::size_t fact_count() const;
  // Facts in predicate-declaration order, then insertion order.
  std::vector<Atom> facts() const;

 private:
  std::shared_ptr<const Schema> schema_;
  std::vector<Relation> relations_;
};

struct GroundingCounts {
  std::uint64_t true_count = 0;
  std::uint64_t false_count = 0;

  friend bool operator==(const GroundingCounts&, const GroundingCounts&) = default;
};

// A conjunctive body compiled against a fixed set of logvars that will be
// bound at query time (normally the head logvars). Literals are joined in
// order of most-bound arguments first. Reusable and thread-safe.
class GroundingCounter {
 public:
  GroundingCounter(const Schema& schema, std::span<const Atom> body,
                   std::span<const std::pair<std::string, TypeId>> bound_vars);

  // `bound_values[i]` is the constant for `bound_vars[i]`.
  GroundingCounts count(const FactDatabase& db, std::span<const Constant> bound_values) const;

  // Number of groundings of the free logvars, i.e. t + f.
  std::uint64_t total_groundings(const FactDatabase& db) const;

 private:
  struct Arg {
    enum class Kind : std::uint8_t { kConst, kBoundSlot, kBindSlot, kRepeatSlot } kind;
    std::uint32_t value;  // constant id or slot index
  };
  struct Literal {
    PredId pred;
    std::uint32_t mask;  // positions known before the literal is joined
    std::vector<Arg> args;
  };

  std::uint64_t join(const FactDatabase& db, std::size_t level, std::vector<ConstId>& slots) const;

  std::size_t bound_count_ = 0;
  std::vector<TypeId> slot_types_;
  std::vector<Literal> literals_;
};

// True/false grounding counts of `body` under `head_binding`: the free
// logvars are those of the body not bound by the substitution.
GroundingCounts count_groundings(std::span<const Atom> body, const Substitution& head_binding,
                                 const FactDatabase& db);

Atom apply_substitution(const Atom& atom, const Substitution& theta, const Schema& schema);

// Every full binding of the pattern's logvars. Logvars are ordered by first
// appearance, constants by population order, first logvar varying slowest.
void for_each_grounding(const Atom& pattern, const Schema& schema,
                        const std::function<void(const Substitution&)>& visit);
std::vector<Substitution> enumerate_groundings(const Atom& pattern, const Schema& schema);

// --- text -----------------------------------------------------------------

// `functor(arg, ...)` with logvars printed by name and constants quoted when
// they could be read back as a logvar.
std::string format_atom(const Schema& schema, const Atom& atom);
std::string format_body(const Schema& schema, std::span<const Atom> body);
std::string format_constant(const std::string& name);

// Parses one atom. Identifiers starting with an upper-case letter or `_`
// are logvars, other identifiers and quoted names are constants that must
// exist in the population of their position.
Atom parse_atom(const Schema& schema, std::string_view text);
// Comma-separated atoms; empty text gives an empty body.
std::vector<Atom> parse_body(const Schema& schema, std::string_view text);

}  // namespace rlr
