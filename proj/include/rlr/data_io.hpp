#pragma once

// Fact, example, mode and population files; closed-world negatives;
// cross-validation folds; the synthetic smokes/cancer/friends generator.
//
// File grammar (one statement per line, `%` comments):
//   population student = {s1, s2, s3}.
//   predicate advisedby(student, person).
//   mode: advisedby(-student, +person).
//   advisedby(s1, p1).
// A mode declares the signature of its predicate if no `predicate` line
// did. Populations without a declaration collect the constants seen at
// their argument positions, in order of first appearance.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlr/boosting.hpp"
#include "rlr/logic.hpp"

namespace rlr {

struct DatasetBundle {
  std::shared_ptr<const FactDatabase> db;
  PredId target = 0;
  std::vector<Atom> positives;
  std::vector<Atom> negatives;
  std::vector<ModeDeclaration> modes;
  // Provenance comment lines (without the leading `%`).
  std::vector<std::string> header;

  const Schema& schema() const { return db->schema(); }
  // Positives first, then negatives.
  std::vector<LabeledExample> labeled() const;
};

// --- raw statements ---------------------------------------------------------

struct SourceLocation {
  std::string source;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RawAtom {
  std::string functor;
  std::vector<std::string> args;
  SourceLocation where;
};

struct PopulationStatement {
  std::string name;
  std::vector<std::string> constants;
  SourceLocation where;
};

struct PredicateStatement {
  std::string functor;
  std::vector<std::string> types;
  SourceLocation where;
};

struct ModeStatement {
  std::string functor;
  std::vector<std::pair<ArgMode, std::string>> args;
  SourceLocation where;
};

struct ParsedFile {
  std::vector<PopulationStatement> populations;
  std::vector<PredicateStatement> predicates;
  std::vector<ModeStatement> modes;
  std::vector<RawAtom> atoms;
};

// Syntax only; names are resolved later. ParseError with line and column.
ParsedFile parse_statements(std::string_view text, const std::string& source);

// --- loading ---------------------------------------------------------------

struct DatasetTexts {
  std::string facts;
  std::string positives;
  std::optional<std::string> negatives;  // nullopt: every other grounding of the target
  std::string modes;
  std::string populations;
  // Further `predicate`/`population` lines, e.g. a model's target signature.
  std::string declarations;
  std::string facts_source = "<facts>";
  std::string positives_source = "<pos>";
  std::string negatives_source = "<neg>";
  std::string modes_source = "<modes>";
  std::string populations_source = "<pop>";
  std::string declarations_source = "<declarations>";
};

struct DatasetFiles {
  std::filesystem::path facts;
  std::filesystem::path positives;
  std::optional<std::filesystem::path> negatives;
  std::filesystem::path modes;
  std::optional<std::filesystem::path> populations;
};

DatasetBundle make_dataset(const DatasetTexts& texts, const std::string& target);
// DataError naming the file when one cannot be read.
DatasetBundle load_dataset(const DatasetFiles& files, const std::string& target);

// Database from a facts text plus optional declarations (populations,
// predicate signatures, modes). Facts of undeclared predicates are errors.
FactDatabase parse_facts(std::string_view facts, std::string_view declarations = {});

// Ground atoms of `pred`, resolved against an existing schema. Unknown
// constants are errors.
std::vector<Atom> parse_ground_atoms(std::string_view text, const Schema& schema, PredId pred,
                                     const std::string& source);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// --- writing ---------------------------------------------------------------

// `population` and `predicate` lines followed by every fact; parses back
// to an identical database.
std::string format_database(const FactDatabase& db);
std::string format_facts(const FactDatabase& db);
std::string format_atoms(const Schema& schema, std::span<const Atom> atoms);
std::string format_modes(const Schema& schema, std::span<const ModeDeclaration> modes);

// Writes <dir>/<name>.facts, .pos, .neg and .modes; returns the paths.
std::vector<std::filesystem::path> write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir,
                                                 const std::string& name);

// --- closed-world negatives --------------------------------------------------

// Every grounding of the target that is not a positive (ratio nullopt), or a
// seeded uniform sample of ceil(ratio * |positives|) of them, in grounding
// order. If the sample would exceed the available negatives all are
// returned and a warning goes to `warnings`.
std::vector<Atom> generate_negatives(const Schema& schema, PredId target, std::span<const Atom> positives,
                                     std::optional<double> ratio, std::uint64_t seed,
                                     std::ostream* warnings = nullptr);

// --- synthetic domain --------------------------------------------------------

struct SmokesCancerParams {
  int n_people = 200;
  int k_threshold = 2;
  double edge_prob = 0.05;
  double noise = 0.05;
  double smoke_prob = 0.15;
  std::uint64_t seed = 7;

  void validate() const;  // ConfigError
};

// People p0..p{n-1}; directed friends(x, y) edges with probability
// edge_prob; smokes(x) with probability smoke_prob; cancer(x) iff x has at
// least k smoking friends, then flipped with probability noise.
DatasetBundle generate_smokes_cancer(const SmokesCancerParams& params);

// --- folds -----------------------------------------------------------------

enum class FoldScheme { kRandom, kByGroup };

struct FoldConfig {
  int k = 4;
  FoldScheme scheme = FoldScheme::kRandom;
  std::uint64_t seed = 0;
  // Constant name -> group name, in file order (by_group only).
  std::vector<std::pair<std::string, std::string>> groups;
};

// `group(constant, group).` lines.
std::vector<std::pair<std::string, std::string>> parse_groups(std::string_view text, const std::string& source);

struct FoldSplit {
  int fold_id = 0;
  DatasetBundle train;
  DatasetBundle test;
};

// Random folds are stratified: shuffled positives and negatives are dealt
// round-robin. Group folds assign whole groups (groups in order of first
// appearance, group i to fold i mod k) and split the facts along with the
// examples; facts without a grouped constant go to both sides.
std::vector<FoldSplit> make_folds(const DatasetBundle& bundle, const FoldConfig& config);

}  // namespace rlr
