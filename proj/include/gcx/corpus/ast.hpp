#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gcx::corpus {

/// Expression node of the scenario language. Numbers keep their source text
/// so printing reproduces them exactly.
struct Node {
  enum class Kind { number, ident, string, call, unary, binary, list, modulus };
  Kind kind = Kind::number;
  std::string text;  // literal text, identifier, callee or operator
  std::vector<Node> kids;
  int line = 0;
  int column = 0;

  static Node number(std::string t) { return {Kind::number, std::move(t), {}, 0, 0}; }
  static Node ident(std::string t) { return {Kind::ident, std::move(t), {}, 0, 0}; }
  static Node string(std::string t) { return {Kind::string, std::move(t), {}, 0, 0}; }
  static Node call(std::string f, std::vector<Node> args) { return {Kind::call, std::move(f), std::move(args), 0, 0}; }
  static Node unary(std::string op, Node a) { return {Kind::unary, std::move(op), {std::move(a)}, 0, 0}; }
  static Node binary(std::string op, Node a, Node b) {
    return {Kind::binary, std::move(op), {std::move(a), std::move(b)}, 0, 0};
  }
  static Node list(std::vector<Node> items) { return {Kind::list, "", std::move(items), 0, 0}; }
  static Node modulus(Node a) { return {Kind::modulus, "", {std::move(a)}, 0, 0}; }
};

/// Structural equality, ignoring source positions.
bool same(const Node& a, const Node& b);

/// Canonical text with the fewest parentheses the grammar needs.
/// `top` prints a list without surrounding parentheses.
std::string print(const Node& n, bool top = true);

/// Text used when comparing an expected value with a computed one: strings
/// unquoted, lists joined by ", ", everything else as printed.
std::string expected_text(const Node& n);

using Clause = std::pair<std::string, Node>;

/// keyword [name] [= value] {key=value} [expect {key=value}]
struct Statement {
  int line = 0;
  std::string keyword;
  std::string name;
  std::optional<Node> value;
  std::vector<Clause> clauses;
  std::vector<Clause> expects;

  const Node* clause(const std::string& key) const;
};

bool same(const Statement& a, const Statement& b);
std::string print(const Statement& s);

struct Scenario {
  std::string name;
  /// From a `# reproduces: ...` comment, empty when absent.
  std::string reproduces;
  std::vector<Statement> statements;
  std::vector<std::string> warnings;
};

bool same(const Scenario& a, const Scenario& b);
/// Round-trippable source text (the reproduces line is kept).
std::string print(const Scenario& s);

}  // namespace gcx::corpus
