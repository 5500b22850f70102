#include <algorithm>

#include "rlr/error.hpp"
#include "rlr/logic.hpp"
#include "text/atom_parser.hpp"
#include "text/lexer.hpp"

namespace rlr {

std::string format_constant(const std::string& name) {
  bool plain = !name.empty() && !text::is_var_name(name) &&
               std::all_of(name.begin(), name.end(), text::is_ident_char);
  return plain ? name : "'" + name + "'";
}

std::string format_atom(const Schema& schema, const Atom& atom) {
  std::string out = schema.predicate(atom.pred).functor;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i > 0) out += ',';
    if (const auto* v = std::get_if<Var>(&atom.args[i])) {
      out += v->name;
    } else {
      out += format_constant(schema.constant_name(std::get<Constant>(atom.args[i])));
    }
  }
  out += ')';
  return out;
}

std::string format_body(const Schema& schema, std::span<const Atom> body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_atom(schema, body[i]);
  }
  return out;
}

namespace text {

Atom parse_clause_atom(Lexer& lex, const Schema& schema) {
  Token functor = lex.expect(Tok::kIdent, "predicate name");
  auto pred = schema.find_predicate(functor.text);
  if (!pred) lex.fail(functor, "unknown predicate '" + functor.text + "'");
  const PredicateSignature& sig = schema.predicate(*pred);
  Atom atom{*pred, {}};
  lex.expect(Tok::kLParen, "'('");
  do {
    Token arg = lex.next();
    if (arg.kind != Tok::kIdent && arg.kind != Tok::kQuoted) lex.fail(arg, "expected a term");
    std::size_t pos = atom.args.size();
    if (pos >= sig.arity()) {
      lex.fail(arg, "'" + sig.functor + "' expects " + std::to_string(sig.arity()) + " arguments");
    }
    if (arg.kind == Tok::kIdent && is_var_name(arg.text)) {
      atom.args.emplace_back(Var{arg.text});
      continue;
    }
    TypeId type = sig.arg_types[pos];
    auto c = schema.find_constant(type, arg.text);
    if (!c) {
      lex.fail(arg, "unknown constant '" + arg.text + "' in population '" +
                        schema.population(type).name + "'");
    }
    atom.args.emplace_back(*c);
  } while (lex.accept(Tok::kComma));
  Token close = lex.expect(Tok::kRParen, "')'");
  if (atom.args.size() != sig.arity()) {
    lex.fail(close, "'" + sig.functor + "' expects " + std::to_string(sig.arity()) + " arguments, got " +
                        std::to_string(atom.args.size()));
  }
  return atom;
}

}  // namespace text

Atom parse_atom(const Schema& schema, std::string_view input) {
  text::Lexer lex(input, "<atom>");
  Atom atom = text::parse_clause_atom(lex, schema);
  if (lex.peek().kind != text::Tok::kEnd) lex.fail(lex.peek(), "trailing text after atom");
  return atom;
}

std::vector<Atom> parse_body(const Schema& schema, std::string_view input) {
  text::Lexer lex(input, "<body>");
  std::vector<Atom> out;
  if (lex.peek().kind == text::Tok::kEnd) return out;
  do {
    out.push_back(text::parse_clause_atom(lex, schema));
  } while (lex.accept(text::Tok::kComma));
  if (lex.peek().kind != text::Tok::kEnd) lex.fail(lex.peek(), "trailing text after body");
  schema.variable_types(out);
  return out;
}

}  // namespace rlr
