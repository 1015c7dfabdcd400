#include "gcx/corpus/ast.hpp"

#include <sstream>

namespace gcx::corpus {

bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.text != b.text || a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!same(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

namespace {

// Binding strength; larger binds tighter.
int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::list:
      return 0;
    case Node::Kind::binary:
      if (n.text == "and") return 1;
      if (n.text == "<" || n.text == "<=" || n.text == ">" || n.text == ">=" || n.text == "==" || n.text == "!=")
        return 2;
      if (n.text == ":") return 3;
      if (n.text == "+" || n.text == "-") return 4;
      if (n.text == "*" || n.text == "/") return 5;
      if (n.text == "^") return 7;
      if (n.text == "**") return 9;
      return 10;
    case Node::Kind::unary:
      return 6;
    default:
      return 10;
  }
}

bool right_assoc(const std::string& op) { return op == "**" || op == "^"; }

// comparisons and ':' do not chain
bool non_assoc(int prec) { return prec == 2 || prec == 3; }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string wrap(const Node& n, int min_prec) {
  const std::string s = print(n, false);
  return precedence(n) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Node& n, bool top) {
  switch (n.kind) {
    case Node::Kind::number:
    case Node::Kind::ident:
      return n.text;
    case Node::Kind::string:
      return quote(n.text);
    case Node::Kind::modulus:
      return "|" + print(n.kids[0], false) + "|";
    case Node::Kind::call: {
      std::string s = n.text + "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += ", ";
        s += wrap(n.kids[i], 1);
      }
      return s + ")";
    }
    case Node::Kind::list: {
      if (n.kids.empty()) return "()";
      std::string s;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += ", ";
        s += wrap(n.kids[i], 1);
      }
      if (n.kids.size() == 1) s += ",";
      return top ? s : "(" + s + ")";
    }
    case Node::Kind::unary:
      return n.text + wrap(n.kids[0], precedence(n));
    case Node::Kind::binary: {
      const int p = precedence(n);
      const bool ra = right_assoc(n.text);
      const std::string l = wrap(n.kids[0], ra || non_assoc(p) ? p + 1 : p);
      const std::string r = wrap(n.kids[1], ra ? p : p + 1);
      if (n.text == "^" || n.text == "**" || n.text == ":") {
        return n.text == ":" ? l + ": " + r : l + n.text + r;
      }
      return l + " " + n.text + " " + r;
    }
  }
  return "";
}

std::string expected_text(const Node& n) {
  switch (n.kind) {
    case Node::Kind::string:
      return n.text;
    case Node::Kind::list: {
      std::string s;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += ", ";
        s += expected_text(n.kids[i]);
      }
      return s;
    }
    default:
      return print(n);
  }
}

const Node* Statement::clause(const std::string& key) const {
  for (const auto& [k, v] : clauses) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

bool same_clauses(const std::vector<Clause>& a, const std::vector<Clause>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || !same(a[i].second, b[i].second)) return false;
  }
  return true;
}

// Clause values are printed as parenthesized lists so the next key=value
// cannot be swallowed.
std::string clause_value(const Node& n) {
  if (n.kind == Node::Kind::list) return print(n, false);
  const std::string s = print(n);
  return n.kind == Node::Kind::binary && n.text != "^" && n.text != "**" ? "(" + s + ")" : s;
}

}  // namespace

bool same(const Statement& a, const Statement& b) {
  if (a.keyword != b.keyword || a.name != b.name || a.value.has_value() != b.value.has_value()) return false;
  if (a.value && !same(*a.value, *b.value)) return false;
  return same_clauses(a.clauses, b.clauses) && same_clauses(a.expects, b.expects);
}

std::string print(const Statement& s) {
  std::string out = s.keyword;
  if (!s.name.empty()) out += " " + s.name;
  if (s.value) out += " = " + print(*s.value);
  for (const auto& [k, v] : s.clauses) out += " " + k + "=" + clause_value(v);
  if (!s.expects.empty()) {
    out += " expect";
    for (const auto& [k, v] : s.expects) out += " " + k + "=" + clause_value(v);
  }
  return out;
}

bool same(const Scenario& a, const Scenario& b) {
  if (a.reproduces != b.reproduces || a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    if (!same(a.statements[i], b.statements[i])) return false;
  }
  return true;
}

std::string print(const Scenario& s) {
  std::ostringstream out;
  if (!s.reproduces.empty()) out << "# reproduces: " << s.reproduces << "\n";
  for (const Statement& st : s.statements) out << print(st) << "\n";
  return out.str();
}

}  // namespace gcx::corpus
