#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace narrsmooth {

// Malformed input. `line` is 1-based, 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A character name (or pair) that does not exist in the corpus.
class UnknownEntityError : public std::invalid_argument {
 public:
  UnknownEntityError(std::string name, std::vector<std::string> suggestions)
      : std::invalid_argument("unknown character '" + name + "'"),
        name_(std::move(name)),
        suggestions_(std::move(suggestions)) {}
  const std::string& name() const { return name_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::string name_;
  std::vector<std::string> suggestions_;
};

}  // namespace narrsmooth
