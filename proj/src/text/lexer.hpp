#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "rlr/error.hpp"

namespace rlr::text {

enum class Tok {
  kIdent,   // [A-Za-z0-9_]+
  kQuoted,  // '...' (text holds the unquoted content)
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kDot,
  kColon,
  kImplies,  // :-
  kEquals,
  kPlus,
  kMinus,
  kHash,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

const char* describe(Tok kind);

// Single-pass tokenizer. `%` starts a comment running to the end of the line.
class Lexer {
 public:
  Lexer(std::string_view input, std::string source, std::size_t first_line = 1,
        std::size_t first_column = 1);

  const Token& peek() const { return current_; }
  Token next();
  bool accept(Tok kind);
  Token expect(Tok kind, const char* what);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  const std::string& source() const { return source_; }

 private:
  Token scan();
  void skip_blank();

  std::string_view input_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
  Token current_;
};

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Logvar spelling in clause text.
inline bool is_var_name(std::string_view s) {
  return !s.empty() && ((s[0] >= 'A' && s[0] <= 'Z') || s[0] == '_');
}

}  // namespace rlr::text
