#include "rlr/data_io.hpp"
#include "text/lexer.hpp"

namespace rlr {

namespace {

using text::Lexer;
using text::Tok;
using text::Token;

SourceLocation at(const Lexer& lex, const Token& tok) { return {lex.source(), tok.line, tok.column}; }

std::string name_token(Lexer& lex, const char* what) {
  Token tok = lex.next();
  if (tok.kind != Tok::kIdent && tok.kind != Tok::kQuoted) {
    lex.fail(tok, std::string("expected ") + what);
  }
  return tok.text;
}

void parse_population(Lexer& lex, const Token& keyword, ParsedFile& out) {
  PopulationStatement st;
  st.where = at(lex, keyword);
  st.name = lex.expect(Tok::kIdent, "population name").text;
  lex.expect(Tok::kEquals, "'='");
  lex.expect(Tok::kLBrace, "'{'");
  if (!lex.accept(Tok::kRBrace)) {
    do {
      st.constants.push_back(name_token(lex, "a constant"));
    } while (lex.accept(Tok::kComma));
    lex.expect(Tok::kRBrace, "'}'");
  }
  lex.expect(Tok::kDot, "'.'");
  out.populations.push_back(std::move(st));
}

void parse_predicate(Lexer& lex, const Token& keyword, ParsedFile& out) {
  PredicateStatement st;
  st.where = at(lex, keyword);
  st.functor = lex.expect(Tok::kIdent, "predicate name").text;
  lex.expect(Tok::kLParen, "'('");
  do {
    st.types.push_back(lex.expect(Tok::kIdent, "population name").text);
  } while (lex.accept(Tok::kComma));
  lex.expect(Tok::kRParen, "')'");
  lex.expect(Tok::kDot, "'.'");
  out.predicates.push_back(std::move(st));
}

void parse_mode(Lexer& lex, const Token& keyword, ParsedFile& out) {
  ModeStatement st;
  st.where = at(lex, keyword);
  lex.expect(Tok::kColon, "':'");
  st.functor = lex.expect(Tok::kIdent, "predicate name").text;
  lex.expect(Tok::kLParen, "'('");
  do {
    Token sign = lex.next();
    ArgMode mode;
    switch (sign.kind) {
      case Tok::kPlus: mode = ArgMode::kInput; break;
      case Tok::kMinus: mode = ArgMode::kOutput; break;
      case Tok::kHash: mode = ArgMode::kConstant; break;
      default: lex.fail(sign, "expected '+', '-' or '#' before a population name");
    }
    st.args.emplace_back(mode, lex.expect(Tok::kIdent, "population name").text);
  } while (lex.accept(Tok::kComma));
  lex.expect(Tok::kRParen, "')'");
  lex.expect(Tok::kDot, "'.'");
  out.modes.push_back(std::move(st));
}

void parse_fact(Lexer& lex, Token functor, ParsedFile& out) {
  RawAtom atom;
  atom.where = at(lex, functor);
  atom.functor = std::move(functor.text);
  lex.expect(Tok::kLParen, "'('");
  do {
    atom.args.push_back(name_token(lex, "a constant"));
  } while (lex.accept(Tok::kComma));
  lex.expect(Tok::kRParen, "')'");
  lex.expect(Tok::kDot, "'.'");
  out.atoms.push_back(std::move(atom));
}

}  // namespace

ParsedFile parse_statements(std::string_view input, const std::string& source) {
  Lexer lex(input, source);
  ParsedFile out;
  while (lex.peek().kind != Tok::kEnd) {
    Token head = lex.expect(Tok::kIdent, "a statement");
    Tok following = lex.peek().kind;
    if (head.text == "population" && following == Tok::kIdent) {
      parse_population(lex, head, out);
    } else if (head.text == "predicate" && following == Tok::kIdent) {
      parse_predicate(lex, head, out);
    } else if (head.text == "mode" && following == Tok::kColon) {
      parse_mode(lex, head, out);
    } else {
      parse_fact(lex, std::move(head), out);
    }
  }
  return out;
}

}  // namespace rlr
