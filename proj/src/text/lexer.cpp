#include "text/lexer.hpp"

namespace rlr::text {

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::kIdent: return "identifier";
    case Tok::kQuoted: return "quoted name";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kComma: return "','";
    case Tok::kDot: return "'.'";
    case Tok::kColon: return "':'";
    case Tok::kImplies: return "':-'";
    case Tok::kEquals: return "'='";
    case Tok::kPlus: return "'+'";
    case Tok::kMinus: return "'-'";
    case Tok::kHash: return "'#'";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

Lexer::Lexer(std::string_view input, std::string source, std::size_t first_line,
             std::size_t first_column)
    : input_(input), source_(std::move(source)), line_(first_line), column_(first_column) {
  current_ = scan();
}

Token Lexer::next() {
  Token out = std::move(current_);
  current_ = scan();
  return out;
}

bool Lexer::accept(Tok kind) {
  if (current_.kind != kind) return false;
  next();
  return true;
}

Token Lexer::expect(Tok kind, const char* what) {
  if (current_.kind != kind) {
    std::string found = current_.kind == Tok::kIdent || current_.kind == Tok::kQuoted
                            ? "'" + current_.text + "'"
                            : describe(current_.kind);
    fail(current_, std::string("expected ") + what + ", found " + found);
  }
  return next();
}

void Lexer::fail(const Token& at, const std::string& message) const {
  throw ParseError(source_, at.line, at.column, message);
}

void Lexer::skip_blank() {
  while (pos_ < input_.size()) {
    char c = input_[pos_];
    if (c == '\n') {
      ++line_;
      column_ = 1;
      ++pos_;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++column_;
      ++pos_;
    } else if (c == '%') {
      while (pos_ < input_.size() && input_[pos_] != '\n') ++pos_;
    } else {
      break;
    }
  }
}

Token Lexer::scan() {
  skip_blank();
  Token tok;
  tok.line = line_;
  tok.column = column_;
  if (pos_ >= input_.size()) {
    tok.kind = Tok::kEnd;
    return tok;
  }
  char c = input_[pos_];
  auto single = [&](Tok kind) {
    tok.kind = kind;
    tok.text = std::string(1, c);
    ++pos_;
    ++column_;
    return tok;
  };
  switch (c) {
    case '(': return single(Tok::kLParen);
    case ')': return single(Tok::kRParen);
    case '{': return single(Tok::kLBrace);
    case '}': return single(Tok::kRBrace);
    case ',': return single(Tok::kComma);
    case '.': return single(Tok::kDot);
    case '=': return single(Tok::kEquals);
    case '+': return single(Tok::kPlus);
    case '-': return single(Tok::kMinus);
    case '#': return single(Tok::kHash);
    case ':':
      if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '-') {
        tok.kind = Tok::kImplies;
        tok.text = ":-";
        pos_ += 2;
        column_ += 2;
        return tok;
      }
      return single(Tok::kColon);
    case '\'': {
      std::size_t end = input_.find('\'', pos_ + 1);
      std::size_t newline = input_.find('\n', pos_ + 1);
      if (end == std::string_view::npos || (newline != std::string_view::npos && newline < end)) {
        throw ParseError(source_, tok.line, tok.column, "unterminated quoted name");
      }
      tok.kind = Tok::kQuoted;
      tok.text = std::string(input_.substr(pos_ + 1, end - pos_ - 1));
      if (tok.text.empty()) throw ParseError(source_, tok.line, tok.column, "empty quoted name");
      column_ += end + 1 - pos_;
      pos_ = end + 1;
      return tok;
    }
    default:
      break;
  }
  if (is_ident_char(c)) {
    std::size_t start = pos_;
    while (pos_ < input_.size() && is_ident_char(input_[pos_])) ++pos_;
    tok.kind = Tok::kIdent;
    tok.text = std::string(input_.substr(start, pos_ - start));
    column_ += pos_ - start;
    return tok;
  }
  throw ParseError(source_, tok.line, tok.column, std::string("unexpected character '") + c + "'");
}

}  // namespace rlr::text
