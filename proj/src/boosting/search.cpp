#include "boosting/search.hpp"

#include <algorithm>
#include <set>

#include "rlr/error.hpp"
#include "util/parallel.hpp"

namespace rlr::detail {

namespace {

std::string body_key(const Schema& schema, const std::vector<Atom>& body) {
  return format_body(schema, body);
}

// Order-insensitive key, so beam members that differ only in literal order
// collapse.
std::string body_set_key(const Schema& schema, const std::vector<Atom>& body) {
  std::vector<std::string> parts;
  for (const Atom& a : body) parts.push_back(format_atom(schema, a));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

struct Node {
  std::vector<Atom> body;
  RidgeFit fit;
};

// Index of the lowest score; a later candidate must beat the current
// minimum by more than `tie` to replace it.
std::size_t argmin_score(std::span<const Node> nodes, std::span<const char> excluded, double tie) {
  std::size_t best = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (excluded[i]) continue;
    if (best == nodes.size() || nodes[i].fit.score < nodes[best].fit.score - tie) best = i;
  }
  return best;
}

}  // namespace

ClauseSearch::ClauseSearch(const FactDatabase& db, PredId target, std::span<const ModeDeclaration> modes,
                           const BoostConfig& config, std::vector<Atom> examples)
    : db_(db),
      target_(target),
      modes_(modes.begin(), modes.end()),
      config_(config),
      examples_(std::move(examples)),
      head_(canonical_head(db.schema(), target)) {
  const Schema& schema = db_.schema();
  head_vars_ = schema.variable_types(std::span<const Atom>(&head_, 1));
  bound_values_.reserve(examples_.size());
  for (const Atom& ex : examples_) {
    if (ex.pred != target_) throw TypingError("example " + format_atom(schema, ex) + " is not of the target");
    schema.check_atom(ex);
    if (!ex.is_ground()) throw TypingError("example " + format_atom(schema, ex) + " is not ground");
    std::vector<Constant> values;
    for (const Term& t : ex.args) values.push_back(std::get<Constant>(t));
    bound_values_.push_back(std::move(values));
  }
}

ClauseSearch::CacheEntry& ClauseSearch::entry_for(const std::vector<Atom>& body) {
  auto [it, inserted] = cache_.try_emplace(body_key(db_.schema(), body));
  if (inserted) {
    it->second.counts.resize(examples_.size());
    it->second.have.assign(examples_.size(), 0);
  }
  return it->second;
}

void ClauseSearch::fill(CacheEntry& entry, const std::vector<Atom>& body, std::span<const std::size_t> ids) const {
  bool missing = std::any_of(ids.begin(), ids.end(), [&](std::size_t i) { return !entry.have[i]; });
  if (!missing) return;
  if (body.empty()) {
    for (std::size_t i : ids) {
      entry.counts[i] = CountFeature{1.0, 1, 0};
      entry.have[i] = 1;
    }
    return;
  }
  GroundingCounter counter(db_.schema(), body, head_vars_);
  for (std::size_t i : ids) {
    if (entry.have[i]) continue;
    GroundingCounts c = counter.count(db_, bound_values_[i]);
    entry.counts[i] = CountFeature{1.0, c.true_count, c.false_count};
    entry.have[i] = 1;
  }
}

std::vector<CountFeature> ClauseSearch::features(const std::vector<Atom>& body, std::span<const std::size_t> ids) {
  CacheEntry& entry = entry_for(body);
  fill(entry, body, ids);
  std::vector<CountFeature> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(entry.counts[i]);
  return out;
}

FittedClause ClauseSearch::fit(std::span<const std::size_t> active, std::span<const double> gradients) {
  if (active.empty()) throw ArgumentError("clause search needs at least one example");
  if (active.size() != gradients.size()) throw ArgumentError("one gradient per active example expected");
  const Schema& schema = db_.schema();

  Node best{{}, solve_ridge(features({}, active), gradients, config_.lambda)};
  std::vector<Node> beam{best};

  for (int length = 0; length < config_.max_clause_length; ++length) {
    std::vector<Node> children;
    std::set<std::string> seen;
    for (const Node& parent : beam) {
      for (Atom& lit : generate_candidate_literals(schema, head_, parent.body, modes_)) {
        std::vector<Atom> body = parent.body;
        body.push_back(std::move(lit));
        if (seen.insert(body_set_key(schema, body)).second) children.push_back(Node{std::move(body), {}});
      }
    }
    if (children.empty()) break;

    std::vector<CacheEntry*> entries;
    entries.reserve(children.size());
    for (const Node& child : children) entries.push_back(&entry_for(child.body));
    util::parallel_for(children.size(), config_.jobs, [&](std::size_t k) {
      fill(*entries[k], children[k].body, active);
      std::vector<CountFeature> feats;
      feats.reserve(active.size());
      for (std::size_t i : active) feats.push_back(entries[k]->counts[i]);
      children[k].fit = solve_ridge(feats, gradients, config_.lambda);
    });

    std::vector<char> taken(children.size(), 0);
    std::vector<Node> next_beam;
    for (int b = 0; b < config_.beam_width; ++b) {
      std::size_t pick = argmin_score(children, taken, config_.tie_epsilon);
      if (pick == children.size()) break;
      taken[pick] = 1;
      next_beam.push_back(children[pick]);
    }
    if (!(next_beam.front().fit.score < best.fit.score - config_.improvement_epsilon)) break;
    best = next_beam.front();
    beam = std::move(next_beam);
  }

  FittedClause out;
  out.clause.head = head_;
  out.clause.body = best.body;
  out.clause.weights = best.fit.weights;
  out.score = best.fit.score;
  return out;
}

}  // namespace rlr::detail

namespace rlr {

FittedClause fit_regression_clause(std::span<const GradientExample> grads, const FactDatabase& db, PredId target,
                                   std::span<const ModeDeclaration> modes, const BoostConfig& config) {
  config.validate();
  if (grads.empty()) throw ArgumentError("fit_regression_clause needs at least one gradient example");
  std::vector<Atom> examples;
  std::vector<double> deltas;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    examples.push_back(grads[i].example);
    deltas.push_back(grads[i].gradient);
    active.push_back(i);
  }
  detail::ClauseSearch search(db, target, modes, config, std::move(examples));
  return search.fit(active, deltas);
}

}  // namespace rlr
