#include "gcx/corpus/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace gcx::corpus {

namespace {

std::string describe(const std::string& message, const std::set<std::string>& expected) {
  if (expected.empty()) return message;
  std::string s = message + "; expected one of {";
  bool first = true;
  for (const std::string& e : expected) {
    if (!first) s += ", ";
    s += e;
    first = false;
  }
  return s + "}";
}

constexpr std::array kNamed{"chart",    "use",        "bump",          "region",     "scalar",     "form",
                            "vector",   "section",    "spinor",        "bfield",     "luttinger",  "gluck",
                            "map",      "model",      "group",         "manifold",   "locus",      "surgery",
                            "twist",    "cover",      "branched",      "type",       "nondegenerate",
                            "integrable", "stable",   "verify",        "compare",    "lemma",      "glue",
                            "invariants", "abelianize", "components",  "quotient",   "free_product"};
constexpr std::array kUnnamed{"params", "scan_params", "classify5", "riemann_hurwitz", "realize", "note"};

}  // namespace

ParseError::ParseError(int line, int column, const std::string& message, std::set<std::string> expected)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         describe(message, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

bool is_keyword(const std::string& word) {
  return std::find(kNamed.begin(), kNamed.end(), word) != kNamed.end() ||
         std::find(kUnnamed.begin(), kUnnamed.end(), word) != kUnnamed.end();
}

bool keyword_takes_name(const std::string& word) {
  return std::find(kNamed.begin(), kNamed.end(), word) != kNamed.end();
}

namespace {

struct Token {
  enum class Kind { ident, number, string, op, newline, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0;
  int column = 0;
};

std::string token_name(const Token& t) {
  switch (t.kind) {
    case Token::Kind::ident:
      return "'" + t.text + "'";
    case Token::Kind::number:
      return "number " + t.text;
    case Token::Kind::string:
      return "string \"" + t.text + "\"";
    case Token::Kind::op:
      return "'" + t.text + "'";
    case Token::Kind::newline:
      return "end of line";
    case Token::Kind::end:
      return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Token> run(std::string& reproduces) {
    std::vector<Token> out;
    int depth = 0;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        const std::size_t end = s_.find('\n', pos_);
        std::string comment(s_.substr(pos_ + 1, end == std::string_view::npos ? end : end - pos_ - 1));
        const std::size_t k = comment.find_first_not_of(" \t");
        if (reproduces.empty() && k != std::string::npos && comment.compare(k, 11, "reproduces:") == 0) {
          reproduces = trim(comment.substr(k + 11));
        }
        advance(end == std::string_view::npos ? s_.size() - pos_ : end - pos_);
        continue;
      }
      if (c == '\\' && next_is_newline()) {
        advance(1);
        while (pos_ < s_.size() && s_[pos_] != '\n') advance(1);
        advance(1);
        continue;
      }
      if (c == '\n') {
        if (depth == 0) out.push_back({Token::Kind::newline, "", line_, col_});
        advance(1);
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
        continue;
      }
      const int line = line_, col = col_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t n = 0;
        while (pos_ + n < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + n])) || s_[pos_ + n] == '_'))
          ++n;
        out.push_back({Token::Kind::ident, std::string(s_.substr(pos_, n)), line, col});
        advance(n);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t n = 0;
        while (pos_ + n < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + n]))) ++n;
        if (pos_ + n + 1 < s_.size() && s_[pos_ + n] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + n + 1]))) {
          ++n;
          while (pos_ + n < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + n]))) ++n;
        }
        out.push_back({Token::Kind::number, std::string(s_.substr(pos_, n)), line, col});
        advance(n);
        continue;
      }
      if (c == '"') {
        advance(1);
        std::string v;
        while (true) {
          if (pos_ >= s_.size() || s_[pos_] == '\n') throw ParseError(line, col, "unterminated string");
          if (s_[pos_] == '"') break;
          if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) advance(1);
          v += s_[pos_];
          advance(1);
        }
        advance(1);
        out.push_back({Token::Kind::string, v, line, col});
        continue;
      }
      static const std::array two{"**", "<=", ">=", "==", "!="};
      bool matched = false;
      for (const char* op : two) {
        if (s_.substr(pos_, 2) == op) {
          out.push_back({Token::Kind::op, op, line, col});
          advance(2);
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("+-*/^(),:<>=|;").find(c) != std::string_view::npos) {
        if (c == '(') ++depth;
        if (c == ')' && depth > 0) --depth;
        out.push_back({Token::Kind::op, std::string(1, c), line, col});
        advance(1);
        continue;
      }
      throw ParseError(line, col, "unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({Token::Kind::newline, "", line_, col_});
    out.push_back({Token::Kind::end, "", line_, col_});
    return out;
  }

 private:
  static std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }

  bool next_is_newline() const {
    std::size_t k = pos_ + 1;
    while (k < s_.size() && (s_[k] == ' ' || s_[k] == '\t' || s_[k] == '\r')) ++k;
    return k >= s_.size() || s_[k] == '\n';
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      // count columns in code points, not bytes
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(s_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kOperand{"number", "identifier", "string", "(", "|", "-"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, Scenario& out) : t_(std::move(tokens)), out_(out) {}

  void run() {
    while (peek().kind != Token::Kind::end) {
      if (peek().kind == Token::Kind::newline) {
        ++i_;
        continue;
      }
      out_.statements.push_back(statement());
    }
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  const Token& take() { return t_[i_++]; }
  bool is_op(const std::string& op, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::op && peek(k).text == op;
  }
  bool is_ident(const std::string& w, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::ident && peek(k).text == w;
  }
  bool at_clause() const { return peek().kind == Token::Kind::ident && is_op("=", 1); }
  bool at_line_end() const { return peek().kind == Token::Kind::newline || peek().kind == Token::Kind::end; }

  [[noreturn]] void fail(const std::string& what, const std::set<std::string>& expected) const {
    throw ParseError(peek().line, peek().column, what + ", found " + token_name(peek()), expected);
  }

  void expect_op(const std::string& op) {
    if (!is_op(op)) fail("unexpected token", {op});
    ++i_;
  }

  Statement statement() {
    Statement s;
    s.line = peek().line;
    if (peek().kind != Token::Kind::ident || !is_keyword(peek().text)) {
      std::set<std::string> kws(kNamed.begin(), kNamed.end());
      kws.insert(kUnnamed.begin(), kUnnamed.end());
      fail("expected a statement keyword", kws);
    }
    s.keyword = take().text;
    if (keyword_takes_name(s.keyword)) {
      if (peek().kind != Token::Kind::ident) fail("'" + s.keyword + "' needs a name", {"identifier"});
      s.name = take().text;
    }
    if (is_op("=")) {
      ++i_;
      s.value = list();
    }
    bool expecting = false;
    while (!at_line_end()) {
      if (!expecting && is_ident("expect") && !is_op("=", 1)) {
        ++i_;
        expecting = true;
        if (at_line_end()) fail("'expect' needs at least one key=value", {"key=value"});
        continue;
      }
      if (!at_clause()) {
        fail("unexpected token", expecting ? std::set<std::string>{"key=value", "end of line"}
                                           : std::set<std::string>{"key=value", "expect", "end of line"});
      }
      std::string key = take().text;
      ++i_;  // '='
      Node v = list();
      auto& target = expecting ? s.expects : s.clauses;
      for (const auto& [k, _] : target) {
        if (k == key) throw ParseError(s.line, 1, "duplicate key '" + key + "'");
      }
      target.emplace_back(std::move(key), std::move(v));
    }
    take();
    note_zero_wedges(s);
    return s;
  }

  // Flags literal dx^dx, which is the zero form.
  void note_zero_wedges(const Statement& s) {
    if (!s.value) return;
    std::vector<const Node*> stack{&*s.value};
    while (!stack.empty()) {
      const Node* n = stack.back();
      stack.pop_back();
      if (n->kind == Node::Kind::binary && n->text == "^" && n->kids[0].kind == Node::Kind::ident &&
          n->kids[1].kind == Node::Kind::ident && n->kids[0].text == n->kids[1].text) {
        out_.warnings.push_back("line " + std::to_string(s.line) + ": " + n->kids[0].text + "^" + n->kids[1].text +
                                " is the zero form");
      }
      for (const Node& k : n->kids) stack.push_back(&k);
    }
  }

  Node positioned(Node n, const Token& at) {
    n.line = at.line;
    n.column = at.column;
    return n;
  }

  bool list_continues() const {
    const bool closes_modulus = is_op("|") && !open_.empty() && open_.back() == '|';
    return !(at_line_end() || is_op(")") || closes_modulus || at_clause() || (is_ident("expect") && !is_op("=", 1)));
  }

  Node list() {
    const Token& start = peek();
    Node first = conj();
    if (!is_op(",")) return first;
    std::vector<Node> items{std::move(first)};
    while (is_op(",")) {
      ++i_;
      if (!list_continues()) break;
      items.push_back(conj());
    }
    return positioned(Node::list(std::move(items)), start);
  }

  Node conj() {
    Node l = comparison();
    while (is_ident("and")) {
      const Token& at = take();
      l = positioned(Node::binary("and", std::move(l), comparison()), at);
    }
    return l;
  }

  Node comparison() {
    Node l = colon();
    for (const char* op : {"<", "<=", ">", ">=", "==", "!="}) {
      if (is_op(op)) {
        const Token& at = take();
        return positioned(Node::binary(op, std::move(l), colon()), at);
      }
    }
    return l;
  }

  Node colon() {
    Node l = additive();
    if (is_op(":")) {
      const Token& at = take();
      return positioned(Node::binary(":", std::move(l), additive()), at);
    }
    return l;
  }

  Node additive() {
    Node l = multiplicative();
    while (is_op("+") || is_op("-")) {
      const Token& at = take();
      l = positioned(Node::binary(at.text, std::move(l), multiplicative()), at);
    }
    return l;
  }

  Node multiplicative() {
    Node l = unary();
    while (is_op("*") || is_op("/")) {
      const Token& at = take();
      l = positioned(Node::binary(at.text, std::move(l), unary()), at);
    }
    return l;
  }

  Node unary() {
    if (is_op("-")) {
      const Token& at = take();
      return positioned(Node::unary("-", unary()), at);
    }
    return wedge();
  }

  Node wedge() {
    Node l = power();
    if (is_op("^")) {
      const Token& at = take();
      return positioned(Node::binary("^", std::move(l), wedge()), at);
    }
    return l;
  }

  Node power() {
    Node base = primary();
    if (is_op("**")) {
      const Token& at = take();
      return positioned(Node::binary("**", std::move(base), power()), at);
    }
    return base;
  }

  Node primary() {
    const Token& at = peek();
    switch (at.kind) {
      case Token::Kind::number:
        ++i_;
        return positioned(Node::number(at.text), at);
      case Token::Kind::string:
        ++i_;
        return positioned(Node::string(at.text), at);
      case Token::Kind::ident: {
        if (at.text == "and" || at.text == "expect") fail("keyword where an operand belongs", kOperand);
        ++i_;
        if (!is_op("(")) return positioned(Node::ident(at.text), at);
        ++i_;
        std::vector<Node> args;
        open_.push_back('(');
        if (!is_op(")")) {
          args.push_back(conj());
          while (is_op(",") || is_op(";")) {
            ++i_;
            args.push_back(conj());
          }
        }
        expect_op(")");
        open_.pop_back();
        return positioned(Node::call(at.text, std::move(args)), at);
      }
      case Token::Kind::op:
        if (at.text == "(") {
          ++i_;
          if (is_op(")")) {
            ++i_;
            return positioned(Node::list({}), at);
          }
          open_.push_back('(');
          Node inner = list();
          expect_op(")");
          open_.pop_back();
          return inner;
        }
        if (at.text == "|") {
          ++i_;
          open_.push_back('|');
          Node inner = list();
          expect_op("|");
          open_.pop_back();
          return positioned(Node::modulus(std::move(inner)), at);
        }
        break;
      default:
        break;
    }
    fail("expected an operand", kOperand);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  // innermost open bracket decides whether '|' closes a list
  std::vector<char> open_;
  Scenario& out_;
};

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& name) {
  Scenario s;
  s.name = name;
  std::vector<Token> tokens = Lexer(text).run(s.reproduces);
  Parser(std::move(tokens), s).run();
  return s;
}

}  // namespace gcx::corpus
