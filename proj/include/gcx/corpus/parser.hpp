#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gcx/corpus/ast.hpp"

namespace gcx::corpus {

/// Lexical, syntactic or semantic problem in a scenario, with a 1-based
/// source position. `expected` lists the tokens that would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message, std::set<std::string> expected = {});
  int line() const { return line_; }
  int column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
};

/// Statement keywords; `named` ones take an identifier after the keyword.
bool is_keyword(const std::string& word);
bool keyword_takes_name(const std::string& word);

/// Parses scenario text. Lines are statements; parentheses may span lines and
/// a trailing backslash continues a line. `#` starts a comment, and a comment
/// `# reproduces: <text>` names the statement the scenario reproduces.
Scenario parse_scenario(std::string_view text, const std::string& name = "scenario");

}  // namespace gcx::corpus
