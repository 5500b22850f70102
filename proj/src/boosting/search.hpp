#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlr/boosting.hpp"

namespace rlr::detail {

// Clause search over a fixed example list. Grounding counts depend only on
// the body and the example, never on the gradients, so they are cached per
// body for the lifetime of the search (one boosting run).
class ClauseSearch {
 public:
  ClauseSearch(const FactDatabase& db, PredId target, std::span<const ModeDeclaration> modes,
               const BoostConfig& config, std::vector<Atom> examples);

  // `active` indexes the example list; `gradients[k]` belongs to active[k].
  FittedClause fit(std::span<const std::size_t> active, std::span<const double> gradients);

  // [1, t, f] of `body` for each example in `ids`.
  std::vector<CountFeature> features(const std::vector<Atom>& body, std::span<const std::size_t> ids);

  const Atom& head() const { return head_; }

 private:
  struct CacheEntry {
    std::vector<CountFeature> counts;
    std::vector<char> have;
  };

  CacheEntry& entry_for(const std::vector<Atom>& body);
  // Fills missing counts of `entry` for `ids`. Safe to run concurrently on
  // distinct entries.
  void fill(CacheEntry& entry, const std::vector<Atom>& body, std::span<const std::size_t> ids) const;

  const FactDatabase& db_;
  PredId target_;
  std::vector<ModeDeclaration> modes_;
  BoostConfig config_;
  std::vector<Atom> examples_;
  Atom head_;
  std::vector<std::pair<std::string, TypeId>> head_vars_;
  std::vector<std::vector<Constant>> bound_values_;
  std::unordered_map<std::string, CacheEntry> cache_;
};

}  // namespace rlr::detail
