#include "rlr/data_io.hpp"
#include "rlr/error.hpp"
#include "rlr/model.hpp"
#include "util/rng.hpp"

namespace rlr {

void SmokesCancerParams::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_people < 1) throw ConfigError("n_people must be at least 1");
  if (k_threshold < 1) throw ConfigError("k_threshold must be at least 1");
  if (!in_unit(edge_prob)) throw ConfigError("edge_prob must lie in [0, 1]");
  if (!(noise >= 0.0 && noise < 1.0)) throw ConfigError("noise must lie in [0, 1)");
  if (!in_unit(smoke_prob)) throw ConfigError("smoke_prob must lie in [0, 1]");
}

DatasetBundle generate_smokes_cancer(const SmokesCancerParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_people);

  auto schema = std::make_shared<Schema>();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  TypeId person = schema->declare_population("person", names);
  PredId friends = schema->add_predicate("friends", {person, person});
  PredId smokes = schema->add_predicate("smokes", {person});
  PredId cancer = schema->add_predicate("cancer", {person});

  // Separate streams so that changing one rate leaves the other draws alone.
  util::Rng edge_rng(util::derive_seed(params.seed, 0));
  util::Rng smoke_rng(util::derive_seed(params.seed, 1));
  util::Rng noise_rng(util::derive_seed(params.seed, 2));

  auto person_const = [&](std::size_t i) { return Term{Constant{person, static_cast<ConstId>(i)}}; };

  std::vector<Atom> facts;
  std::vector<std::vector<std::size_t>> out_edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (edge_rng.bernoulli(params.edge_prob)) {
        out_edges[i].push_back(j);
        facts.push_back(Atom{friends, {person_const(i), person_const(j)}});
      }
    }
  }
  std::vector<char> smoker(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    smoker[i] = smoke_rng.bernoulli(params.smoke_prob) ? 1 : 0;
    if (smoker[i]) facts.push_back(Atom{smokes, {person_const(i)}});
  }

  DatasetBundle bundle;
  bundle.target = cancer;
  for (std::size_t i = 0; i < n; ++i) {
    int smoking_friends = 0;
    for (std::size_t j : out_edges[i]) smoking_friends += smoker[j];
    bool label = smoking_friends >= params.k_threshold;
    if (noise_rng.bernoulli(params.noise)) label = !label;
    Atom example{cancer, {person_const(i)}};
    (label ? bundle.positives : bundle.negatives).push_back(std::move(example));
  }

  bundle.db = std::make_shared<const FactDatabase>(schema, facts);
  bundle.modes = {
      ModeDeclaration{friends, {{ArgMode::kInput, person}, {ArgMode::kOutput, person}}},
      ModeDeclaration{friends, {{ArgMode::kOutput, person}, {ArgMode::kInput, person}}},
      ModeDeclaration{smokes, {{ArgMode::kInput, person}}},
  };
  bundle.header = {
      "synthetic smokes/cancer/friends domain",
      "n_people=" + std::to_string(params.n_people) + " k_threshold=" + std::to_string(params.k_threshold) +
          " edge_prob=" + format_double(params.edge_prob) + " noise=" + format_double(params.noise) +
          " smoke_prob=" + format_double(params.smoke_prob) + " seed=" + std::to_string(params.seed),
      "friends(x, y): directed edge, x != y; smokes(x): independent draw",
      "cancer(x) iff #{y : friends(x, y), smokes(y)} >= k_threshold, then flipped with probability noise",
  };
  return bundle;
}

}  // namespace rlr
