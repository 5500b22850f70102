#include "rlr/error.hpp"

namespace rlr {

namespace {

std::string locate(const std::string& source, std::size_t line, std::size_t column,
                   const std::string& message) {
  std::string out = source.empty() ? std::string("<input>") : source;
  if (line > 0) {
    out += ":" + std::to_string(line);
    if (column > 0) out += ":" + std::to_string(column);
  }
  return out + ": " + message;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(locate(source, line, column, message)),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

}  // namespace rlr
