#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rlr/data_io.hpp"
#include "rlr/error.hpp"

namespace rlr {

std::vector<LabeledExample> DatasetBundle::labeled() const {
  std::vector<LabeledExample> out;
  out.reserve(positives.size() + negatives.size());
  for (const Atom& a : positives) out.push_back({a, 1});
  for (const Atom& a : negatives) out.push_back({a, 0});
  return out;
}

namespace {

[[noreturn]] void fail_at(const SourceLocation& where, const std::string& message) {
  throw ParseError(where.source, where.line, where.column, message);
}

// Resolves statements from several files into one schema. Declarations of
// every file are applied before any atom is read, so a population declared
// in the population file constrains the facts whatever the file order.
class Builder {
 public:
  void declare(std::span<const ParsedFile* const> files) {
    for (const ParsedFile* f : files) {
      for (const PopulationStatement& st : f->populations) {
        try {
          schema_.declare_population(st.name, st.constants);
        } catch (const SchemaError& e) {
          fail_at(st.where, e.what());
        }
      }
    }
    for (const ParsedFile* f : files) {
      for (const PredicateStatement& st : f->predicates) {
        std::vector<TypeId> types;
        for (const std::string& t : st.types) types.push_back(schema_.add_population(t));
        try {
          schema_.add_predicate(st.functor, types);
        } catch (const SchemaError& e) {
          fail_at(st.where, e.what());
        }
      }
    }
    for (const ParsedFile* f : files) {
      for (const ModeStatement& st : f->modes) {
        ModeDeclaration mode;
        std::vector<TypeId> types;
        for (const auto& [m, t] : st.args) {
          types.push_back(schema_.add_population(t));
          mode.args.push_back(ModeArg{m, types.back()});
        }
        auto existing = schema_.find_predicate(st.functor);
        if (existing && schema_.predicate(*existing).arg_types != types) {
          fail_at(st.where, "mode for '" + st.functor + "' disagrees with its declared argument types");
        }
        mode.pred = existing ? *existing : schema_.add_predicate(st.functor, types);
        if (std::find(modes_.begin(), modes_.end(), mode) == modes_.end()) modes_.push_back(std::move(mode));
      }
    }
  }

  Atom resolve(const RawAtom& raw) {
    auto pred = schema_.find_predicate(raw.functor);
    if (!pred) {
      fail_at(raw.where, "undeclared predicate '" + raw.functor +
                             "' (declare it with a `predicate` line or a mode)");
    }
    const PredicateSignature& sig = schema_.predicate(*pred);
    if (raw.args.size() != sig.arity()) {
      fail_at(raw.where, "arity mismatch: '" + raw.functor + "' expects " + std::to_string(sig.arity()) +
                             " arguments, got " + std::to_string(raw.args.size()));
    }
    Atom atom{*pred, {}};
    for (std::size_t i = 0; i < raw.args.size(); ++i) {
      TypeId type = sig.arg_types[i];
      try {
        atom.args.emplace_back(Constant{type, schema_.add_constant(type, raw.args[i])});
      } catch (const TypingError& e) {
        fail_at(raw.where, std::string("type conflict: ") + e.what());
      }
    }
    return atom;
  }

  std::vector<Atom> resolve_all(const ParsedFile& file) {
    std::vector<Atom> out;
    out.reserve(file.atoms.size());
    for (const RawAtom& raw : file.atoms) out.push_back(resolve(raw));
    return out;
  }

  Schema& schema() { return schema_; }
  std::vector<ModeDeclaration>& modes() { return modes_; }

 private:
  Schema schema_;
  std::vector<ModeDeclaration> modes_;
};

void reject_atoms(const ParsedFile& file, const char* what) {
  if (!file.atoms.empty()) fail_at(file.atoms.front().where, std::string("facts are not allowed in ") + what);
}

void reject_declarations(const ParsedFile& file, const char* what) {
  if (!file.populations.empty()) fail_at(file.populations.front().where, std::string("declaration not allowed in ") + what);
  if (!file.predicates.empty()) fail_at(file.predicates.front().where, std::string("declaration not allowed in ") + what);
  if (!file.modes.empty()) fail_at(file.modes.front().where, std::string("declaration not allowed in ") + what);
}

std::vector<Atom> examples_of(Builder& builder, const ParsedFile& file, PredId target) {
  std::vector<Atom> out;
  std::unordered_set<Atom, AtomHash> seen;
  for (const RawAtom& raw : file.atoms) {
    Atom atom = builder.resolve(raw);
    if (atom.pred != target) {
      fail_at(raw.where, "example '" + raw.functor + "(...)' is not an atom of the target predicate '" +
                             builder.schema().predicate(target).functor + "'");
    }
    if (seen.insert(atom).second) out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace

DatasetBundle make_dataset(const DatasetTexts& texts, const std::string& target) {
  ParsedFile pop = parse_statements(texts.populations, texts.populations_source);
  ParsedFile extra = parse_statements(texts.declarations, texts.declarations_source);
  ParsedFile modes = parse_statements(texts.modes, texts.modes_source);
  ParsedFile facts = parse_statements(texts.facts, texts.facts_source);
  ParsedFile pos = parse_statements(texts.positives, texts.positives_source);
  std::optional<ParsedFile> neg;
  if (texts.negatives) neg = parse_statements(*texts.negatives, texts.negatives_source);

  reject_atoms(pop, "a population file");
  reject_atoms(extra, "declarations");
  reject_atoms(modes, "a mode file");
  reject_declarations(pos, "an example file");
  if (neg) reject_declarations(*neg, "an example file");

  Builder builder;
  const ParsedFile* declaring[] = {&pop, &modes, &facts, &extra};
  builder.declare(declaring);

  auto target_id = builder.schema().find_predicate(target);
  if (!target_id) {
    throw SchemaError("target predicate '" + target +
                      "' is not declared (add `predicate " + target + "(...).` or a mode for it)");
  }

  std::vector<Atom> fact_atoms = builder.resolve_all(facts);
  for (std::size_t i = 0; i < fact_atoms.size(); ++i) {
    if (fact_atoms[i].pred == *target_id) {
      fail_at(facts.atoms[i].where, "the facts contain the target predicate '" + target +
                                        "'; examples belong in the example files");
    }
  }

  DatasetBundle bundle;
  bundle.target = *target_id;
  bundle.positives = examples_of(builder, pos, *target_id);
  if (neg) bundle.negatives = examples_of(builder, *neg, *target_id);
  bundle.modes = std::move(builder.modes());

  auto schema = std::make_shared<const Schema>(std::move(builder.schema()));
  bundle.db = std::make_shared<const FactDatabase>(schema, fact_atoms);

  if (neg) {
    std::unordered_set<Atom, AtomHash> positive_set(bundle.positives.begin(), bundle.positives.end());
    for (const Atom& a : bundle.negatives) {
      if (positive_set.contains(a)) {
        throw DataError("example " + format_atom(*schema, a) + " is both positive and negative");
      }
    }
  } else {
    bundle.negatives = generate_negatives(*schema, bundle.target, bundle.positives, std::nullopt, 0);
  }
  return bundle;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

DatasetBundle load_dataset(const DatasetFiles& files, const std::string& target) {
  DatasetTexts texts;
  texts.facts = read_text_file(files.facts);
  texts.facts_source = files.facts.string();
  texts.positives = read_text_file(files.positives);
  texts.positives_source = files.positives.string();
  texts.modes = read_text_file(files.modes);
  texts.modes_source = files.modes.string();
  if (files.negatives) {
    texts.negatives = read_text_file(*files.negatives);
    texts.negatives_source = files.negatives->string();
  }
  if (files.populations) {
    texts.populations = read_text_file(*files.populations);
    texts.populations_source = files.populations->string();
  }
  return make_dataset(texts, target);
}

FactDatabase parse_facts(std::string_view facts_text, std::string_view declarations) {
  ParsedFile decl = parse_statements(declarations, "<declarations>");
  ParsedFile facts = parse_statements(facts_text, "<facts>");
  reject_atoms(decl, "declarations");
  Builder builder;
  const ParsedFile* declaring[] = {&decl, &facts};
  builder.declare(declaring);
  std::vector<Atom> atoms = builder.resolve_all(facts);
  auto schema = std::make_shared<const Schema>(std::move(builder.schema()));
  return FactDatabase(schema, atoms);
}

std::vector<Atom> parse_ground_atoms(std::string_view text, const Schema& schema, PredId pred,
                                     const std::string& source) {
  ParsedFile file = parse_statements(text, source);
  reject_declarations(file, "an example file");
  std::vector<Atom> out;
  for (const RawAtom& raw : file.atoms) {
    auto found = schema.find_predicate(raw.functor);
    if (!found) fail_at(raw.where, "unknown predicate '" + raw.functor + "'");
    if (*found != pred) {
      fail_at(raw.where, "expected an atom of '" + schema.predicate(pred).functor + "', found '" + raw.functor + "'");
    }
    const PredicateSignature& sig = schema.predicate(pred);
    if (raw.args.size() != sig.arity()) {
      fail_at(raw.where, "arity mismatch: '" + raw.functor + "' expects " + std::to_string(sig.arity()) +
                             " arguments, got " + std::to_string(raw.args.size()));
    }
    Atom atom{pred, {}};
    for (std::size_t i = 0; i < raw.args.size(); ++i) {
      auto c = schema.find_constant(sig.arg_types[i], raw.args[i]);
      if (!c) {
        fail_at(raw.where, "unknown constant '" + raw.args[i] + "' in population '" +
                               schema.population(sig.arg_types[i]).name + "'");
      }
      atom.args.emplace_back(*c);
    }
    out.push_back(std::move(atom));
  }
  return out;
}

// --- writing -----------------------------------------------------------------

std::string format_atoms(const Schema& schema, std::span<const Atom> atoms) {
  std::string out;
  for (const Atom& a : atoms) out += format_atom(schema, a) + ".\n";
  return out;
}

std::string format_facts(const FactDatabase& db) {
  std::vector<Atom> facts = db.facts();
  return format_atoms(db.schema(), facts);
}

namespace {

std::string predicate_line(const Schema& schema, PredId p) {
  const PredicateSignature& sig = schema.predicate(p);
  std::string out = "predicate " + sig.functor + "(";
  for (std::size_t i = 0; i < sig.arity(); ++i) {
    if (i > 0) out += ", ";
    out += schema.population(sig.arg_types[i]).name;
  }
  return out + ").\n";
}

std::string population_line(const Schema& schema, TypeId t) {
  const Population& pop = schema.population(t);
  std::string out = "population " + pop.name + " = {";
  for (std::size_t i = 0; i < pop.constants.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_constant(pop.constants[i]);
  }
  return out + "}.\n";
}

}  // namespace

std::string format_database(const FactDatabase& db) {
  const Schema& schema = db.schema();
  std::string out;
  for (TypeId t = 0; t < schema.population_count(); ++t) out += population_line(schema, t);
  for (PredId p = 0; p < schema.predicate_count(); ++p) out += predicate_line(schema, p);
  out += format_facts(db);
  return out;
}

std::string format_modes(const Schema& schema, std::span<const ModeDeclaration> modes) {
  std::string out;
  for (const ModeDeclaration& m : modes) out += format_mode(schema, m) + "\n";
  return out;
}

std::vector<std::filesystem::path> write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir,
                                                 const std::string& name) {
  std::filesystem::create_directories(dir);
  const Schema& schema = bundle.schema();
  std::string header;
  for (const std::string& line : bundle.header) header += "%" + (line.empty() ? "" : " " + line) + "\n";

  // Populations and signatures are written out so constant and predicate
  // order survive a reload.
  std::string declarations;
  for (TypeId t = 0; t < schema.population_count(); ++t) declarations += population_line(schema, t);
  for (PredId p = 0; p < schema.predicate_count(); ++p) declarations += predicate_line(schema, p);

  std::vector<std::filesystem::path> paths{dir / (name + ".facts"), dir / (name + ".pos"), dir / (name + ".neg"),
                                           dir / (name + ".modes")};
  write_text_file(paths[0], header + format_facts(*bundle.db));
  write_text_file(paths[1], header + format_atoms(schema, bundle.positives));
  write_text_file(paths[2], header + format_atoms(schema, bundle.negatives));
  write_text_file(paths[3], header + declarations + format_modes(schema, bundle.modes));
  return paths;
}

}  // namespace rlr
