#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "rlr/data_io.hpp"
#include "rlr/error.hpp"
#include "util/rng.hpp"

namespace rlr {

std::vector<Atom> generate_negatives(const Schema& schema, PredId target, std::span<const Atom> positives,
                                     std::optional<double> ratio, std::uint64_t seed, std::ostream* warnings) {
  if (ratio && !(std::isfinite(*ratio) && *ratio > 0.0)) {
    throw ArgumentError("negative ratio must be a positive number or 'all'");
  }
  const PredicateSignature& sig = schema.predicate(target);
  std::unordered_set<Atom, AtomHash> positive_set;
  for (const Atom& p : positives) {
    if (p.pred != target || !p.is_ground()) {
      throw TypingError("positive example " + format_atom(schema, p) + " is not a ground atom of the target");
    }
    schema.check_atom(p);
    positive_set.insert(p);
  }

  std::uint64_t total = 1;
  for (TypeId t : sig.arg_types) {
    std::uint64_t n = schema.population(t).size();
    if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n) {
      throw ArgumentError("too many groundings of '" + sig.functor + "' to enumerate");
    }
    total *= n;
  }
  const std::uint64_t available = total - positive_set.size();

  // Indices into the sequence of non-positive groundings to keep.
  std::vector<std::size_t> keep;
  bool keep_all = true;
  if (ratio) {
    auto wanted = static_cast<std::uint64_t>(std::ceil(*ratio * static_cast<double>(positive_set.size())));
    if (wanted > available) {
      if (warnings) {
        *warnings << "warning: " << wanted << " negatives requested but only " << available
                  << " are available; using all of them\n";
      }
    } else {
      util::Rng rng(seed);
      keep = rng.sample(available, wanted);
      keep_all = false;
    }
  }

  std::vector<Atom> out;
  out.reserve(keep_all ? available : keep.size());
  std::vector<ConstId> digits(sig.arity(), 0);
  std::size_t rank = 0;  // position among non-positive groundings
  std::size_t next_keep = 0;
  for (std::uint64_t g = 0; g < total; ++g) {
    Atom atom{target, {}};
    for (std::size_t i = 0; i < digits.size(); ++i) atom.args.emplace_back(Constant{sig.arg_types[i], digits[i]});
    if (!positive_set.contains(atom)) {
      if (keep_all) {
        out.push_back(std::move(atom));
      } else if (next_keep < keep.size() && keep[next_keep] == rank) {
        out.push_back(std::move(atom));
        if (++next_keep == keep.size()) break;
      }
      ++rank;
    }
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < schema.population(sig.arg_types[i]).size()) break;
      digits[i] = 0;
    }
  }
  return out;
}

}  // namespace rlr
