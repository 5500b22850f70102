#include <algorithm>
#include <map>
#include <unordered_map>

#include "rlr/data_io.hpp"
#include "rlr/error.hpp"
#include "util/rng.hpp"

namespace rlr {

std::vector<std::pair<std::string, std::string>> parse_groups(std::string_view text, const std::string& source) {
  ParsedFile file = parse_statements(text, source);
  std::vector<std::pair<std::string, std::string>> out;
  std::map<std::string, std::string> seen;
  for (const RawAtom& raw : file.atoms) {
    if (raw.functor != "group" || raw.args.size() != 2) {
      throw ParseError(raw.where.source, raw.where.line, raw.where.column, "expected `group(constant, group).`");
    }
    auto [it, inserted] = seen.emplace(raw.args[0], raw.args[1]);
    if (!inserted && it->second != raw.args[1]) {
      throw ParseError(raw.where.source, raw.where.line, raw.where.column,
                       "constant '" + raw.args[0] + "' assigned to two groups");
    }
    if (inserted) out.emplace_back(raw.args[0], raw.args[1]);
  }
  if (!file.populations.empty() || !file.predicates.empty() || !file.modes.empty()) {
    throw ParseError(source, 0, 0, "a group file holds only `group(constant, group).` lines");
  }
  return out;
}

namespace {

DatasetBundle with_examples(const DatasetBundle& bundle, std::shared_ptr<const FactDatabase> db) {
  DatasetBundle out;
  out.db = std::move(db);
  out.target = bundle.target;
  out.modes = bundle.modes;
  out.header = bundle.header;
  return out;
}

std::vector<FoldSplit> random_folds(const DatasetBundle& bundle, const FoldConfig& config) {
  const auto k = static_cast<std::size_t>(config.k);
  util::Rng rng(util::derive_seed(config.seed, 0x666f6c64));
  std::vector<std::size_t> pos_order(bundle.positives.size());
  std::vector<std::size_t> neg_order(bundle.negatives.size());
  for (std::size_t i = 0; i < pos_order.size(); ++i) pos_order[i] = i;
  for (std::size_t i = 0; i < neg_order.size(); ++i) neg_order[i] = i;
  rng.shuffle(pos_order);
  rng.shuffle(neg_order);

  // fold_of_*[i]: fold of the i-th positive / negative. Negatives continue
  // the deal where the positives stopped so fold sizes differ by at most one.
  std::vector<std::size_t> fold_of_pos(pos_order.size()), fold_of_neg(neg_order.size());
  for (std::size_t r = 0; r < pos_order.size(); ++r) fold_of_pos[pos_order[r]] = r % k;
  for (std::size_t r = 0; r < neg_order.size(); ++r) fold_of_neg[neg_order[r]] = (pos_order.size() + r) % k;

  std::vector<FoldSplit> out;
  for (std::size_t f = 0; f < k; ++f) {
    FoldSplit split;
    split.fold_id = static_cast<int>(f);
    split.train = with_examples(bundle, bundle.db);
    split.test = with_examples(bundle, bundle.db);
    for (std::size_t i = 0; i < bundle.positives.size(); ++i) {
      (fold_of_pos[i] == f ? split.test : split.train).positives.push_back(bundle.positives[i]);
    }
    for (std::size_t i = 0; i < bundle.negatives.size(); ++i) {
      (fold_of_neg[i] == f ? split.test : split.train).negatives.push_back(bundle.negatives[i]);
    }
    out.push_back(std::move(split));
  }
  return out;
}

std::vector<FoldSplit> group_folds(const DatasetBundle& bundle, const FoldConfig& config) {
  if (config.groups.empty()) throw ArgumentError("by_group folds need a group file");
  const Schema& schema = bundle.schema();
  const auto k = static_cast<std::size_t>(config.k);

  std::unordered_map<std::string, std::size_t> group_index;
  std::unordered_map<std::string, std::size_t> constant_group;
  for (const auto& [constant, group] : config.groups) {
    auto [it, inserted] = group_index.emplace(group, group_index.size());
    constant_group.emplace(constant, it->second);
  }
  if (group_index.size() < k) {
    throw ArgumentError("by_group folds: " + std::to_string(group_index.size()) + " groups cannot fill " +
                        std::to_string(k) + " folds");
  }

  // Group of the first grouped constant of the atom, if any.
  auto group_of = [&](const Atom& atom) -> std::optional<std::size_t> {
    for (const Term& t : atom.args) {
      if (auto it = constant_group.find(schema.constant_name(std::get<Constant>(t))); it != constant_group.end()) {
        return it->second;
      }
    }
    return std::nullopt;
  };

  std::vector<Atom> facts = bundle.db->facts();
  std::vector<std::optional<std::size_t>> fact_fold(facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (auto g = group_of(facts[i])) fact_fold[i] = *g % k;
  }
  auto example_fold = [&](const Atom& ex) {
    auto g = group_of(ex);
    if (!g) throw DataError("example " + format_atom(schema, ex) + " has no grouped constant");
    return *g % k;
  };
  std::vector<std::size_t> pos_fold, neg_fold;
  for (const Atom& a : bundle.positives) pos_fold.push_back(example_fold(a));
  for (const Atom& a : bundle.negatives) neg_fold.push_back(example_fold(a));

  std::vector<FoldSplit> out;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Atom> train_facts, test_facts;
    for (std::size_t i = 0; i < facts.size(); ++i) {
      if (!fact_fold[i] || *fact_fold[i] != f) train_facts.push_back(facts[i]);
      if (!fact_fold[i] || *fact_fold[i] == f) test_facts.push_back(facts[i]);
    }
    FoldSplit split;
    split.fold_id = static_cast<int>(f);
    split.train = with_examples(bundle, std::make_shared<const FactDatabase>(bundle.db->schema_ptr(), train_facts));
    split.test = with_examples(bundle, std::make_shared<const FactDatabase>(bundle.db->schema_ptr(), test_facts));
    for (std::size_t i = 0; i < bundle.positives.size(); ++i) {
      (pos_fold[i] == f ? split.test : split.train).positives.push_back(bundle.positives[i]);
    }
    for (std::size_t i = 0; i < bundle.negatives.size(); ++i) {
      (neg_fold[i] == f ? split.test : split.train).negatives.push_back(bundle.negatives[i]);
    }
    out.push_back(std::move(split));
  }
  return out;
}

}  // namespace

std::vector<FoldSplit> make_folds(const DatasetBundle& bundle, const FoldConfig& config) {
  if (config.k < 2) throw ArgumentError("the number of folds must be at least 2");
  std::size_t examples = bundle.positives.size() + bundle.negatives.size();
  if (static_cast<std::size_t>(config.k) > examples) {
    throw ArgumentError(std::to_string(config.k) + " folds requested for " + std::to_string(examples) + " examples");
  }
  return config.scheme == FoldScheme::kRandom ? random_folds(bundle, config) : group_folds(bundle, config);
}

}  // namespace rlr
