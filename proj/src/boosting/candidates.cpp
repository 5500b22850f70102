#include <algorithm>
#include <set>

#include "rlr/boosting.hpp"
#include "rlr/error.hpp"

namespace rlr {

namespace {

std::string nth_var_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "V" + std::to_string(i);
}

struct Fill {
  enum class Kind { kVar, kFresh, kConst } kind;
  std::string var;
  Constant constant;
};

}  // namespace

std::vector<Atom> generate_candidate_literals(const Schema& schema, const Atom& head, std::span<const Atom> body,
                                              std::span<const ModeDeclaration> modes) {
  for (PredId p = 0; p < schema.predicate_count(); ++p) {
    if (p == head.pred) continue;
    bool covered = std::any_of(modes.begin(), modes.end(), [&](const ModeDeclaration& m) { return m.pred == p; });
    if (!covered) throw ConfigError("no mode declared for predicate '" + schema.predicate(p).functor + "'");
  }

  std::vector<Atom> clause{head};
  clause.insert(clause.end(), body.begin(), body.end());
  auto existing = schema.variable_types(clause);
  std::set<std::string> used;
  for (const auto& [name, type] : existing) used.insert(name);

  std::vector<Atom> out;
  for (const ModeDeclaration& mode : modes) {
    check_mode(schema, mode);
    if (mode.pred == head.pred) continue;

    std::vector<std::vector<Fill>> options(mode.args.size());
    bool feasible = true;
    for (std::size_t p = 0; p < mode.args.size(); ++p) {
      const ModeArg& arg = mode.args[p];
      if (arg.mode == ArgMode::kConstant) {
        for (ConstId c = 0; c < schema.population(arg.type).size(); ++c) {
          options[p].push_back({Fill::Kind::kConst, {}, Constant{arg.type, c}});
        }
      } else {
        for (const auto& [name, type] : existing) {
          if (type == arg.type) options[p].push_back({Fill::Kind::kVar, name, {}});
        }
        if (arg.mode == ArgMode::kOutput) options[p].push_back({Fill::Kind::kFresh, {}, {}});
      }
      if (options[p].empty()) feasible = false;
    }
    if (!feasible) continue;

    std::vector<std::size_t> pick(mode.args.size(), 0);
    while (true) {
      Atom atom{mode.pred, {}};
      std::set<std::string> taken = used;
      std::size_t next_name = 0;
      for (std::size_t p = 0; p < pick.size(); ++p) {
        const Fill& fill = options[p][pick[p]];
        switch (fill.kind) {
          case Fill::Kind::kVar: atom.args.emplace_back(Var{fill.var}); break;
          case Fill::Kind::kConst: atom.args.emplace_back(fill.constant); break;
          case Fill::Kind::kFresh: {
            while (taken.contains(nth_var_name(next_name))) ++next_name;
            std::string name = nth_var_name(next_name);
            taken.insert(name);
            atom.args.emplace_back(Var{std::move(name)});
            break;
          }
        }
      }
      bool in_body = std::find(body.begin(), body.end(), atom) != body.end();
      if (!in_body && std::find(out.begin(), out.end(), atom) == out.end()) out.push_back(std::move(atom));

      std::size_t pos = pick.size();
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++pick[pos] < options[pos].size()) {
          done = false;
          break;
        }
        pick[pos] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

}  // namespace rlr
