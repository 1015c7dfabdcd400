#include "gcx/topology/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "gcx/topology/smith.hpp"

namespace gcx {

Word free_reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(Word w) {
  w = free_reduce(std::move(w));
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(w.begin() + static_cast<long>(lo), w.begin() + static_cast<long>(hi));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(std::move(out));
}

Word power(const Word& w, long n) {
  const Word base = n < 0 ? inverse(w) : w;
  Word out;
  for (long k = 0; k < std::labs(n); ++k) out.insert(out.end(), base.begin(), base.end());
  return free_reduce(std::move(out));
}

Word commutator(const Word& a, const Word& b) { return concat(concat(a, b), concat(inverse(a), inverse(b))); }

long exponent_sum(const Word& w, int gen) {
  long s = 0;
  for (int l : w) {
    if (std::abs(l) == gen + 1) s += l > 0 ? 1 : -1;
  }
  return s;
}

// ---------------------------------------------------------------------------

GroupPresentation::GroupPresentation(std::vector<std::string> generators, std::vector<Word> relators)
    : generators_(std::move(generators)) {
  std::set<std::string> seen;
  for (const std::string& g : generators_) {
    if (!seen.insert(g).second) throw TopologyError("duplicate generator '" + g + "'");
  }
  for (Word& r : relators) add_relator(std::move(r));
}

int GroupPresentation::generator_index(const std::string& name) const {
  auto it = std::find(generators_.begin(), generators_.end(), name);
  return it == generators_.end() ? -1 : static_cast<int>(it - generators_.begin());
}

int GroupPresentation::add_generator(const std::string& name) {
  if (generator_index(name) >= 0) throw TopologyError("duplicate generator '" + name + "'");
  generators_.push_back(name);
  return rank() - 1;
}

void GroupPresentation::add_relator(Word w) {
  for (int l : w) {
    if (l == 0 || std::abs(l) > rank()) throw TopologyError("relator uses an undeclared generator");
  }
  relators_.push_back(std::move(w));
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, const GroupPresentation& g) : text_(text), g_(g) {}

  Word parse_all() {
    Word w = parse_product();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

  Word parse_product() {
    Word w;
    while (true) {
      skip();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c == '*' && !(pos_ + 1 < text_.size() && text_[pos_ + 1] == '*')) {
        ++pos_;
        continue;
      }
      if (c == ')' || c == ']' || c == ',') break;
      if (c == '=') {
        // u = v is the relator u v^-1
        ++pos_;
        Word rhs = parse_product();
        return concat(w, inverse(rhs));
      }
      w = concat(w, parse_factor());
    }
    return w;
  }

 private:
  Word parse_factor() {
    Word base = parse_atom();
    skip();
    long n = 1;
    if (match("**") || match("^")) {
      skip();
      bool neg = false;
      if (match("-")) neg = true;
      else match("+");
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an integer exponent");
      n = std::stol(std::string(text_.substr(start, pos_ - start)));
      if (neg) n = -n;
    }
    return power(base, n);
  }

  Word parse_atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of word");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = parse_product();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word a = parse_product();
      expect(',');
      Word b = parse_product();
      expect(']');
      return commutator(a, b);
    }
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '\'')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      const int idx = g_.generator_index(name);
      if (idx < 0) fail("unknown generator '" + name + "'");
      return {idx + 1};
    }
    fail("unexpected '" + std::string(1, c) + "'");
    return {};
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool match(std::string_view s) {
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw TopologyError("malformed word '" + std::string(text_) + "': " + msg);
  }

  std::string_view text_;
  const GroupPresentation& g_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(' || s[i] == '[') ++depth;
    if (s[i] == ')' || s[i] == ']') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Word GroupPresentation::parse_word(std::string_view text) const { return WordParser(text, *this).parse_all(); }

GroupPresentation GroupPresentation::parse(std::string_view text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '<' || t.back() != '>') throw TopologyError("presentation must be <gens | rels>");
  std::string_view body(t);
  body = body.substr(1, body.size() - 2);
  const auto bar = body.find('|');
  if (bar == std::string_view::npos) throw TopologyError("presentation is missing '|'");
  GroupPresentation g;
  for (std::string_view part : split_top_level(body.substr(0, bar))) {
    std::string name = trim(part);
    if (!name.empty()) g.add_generator(name);
  }
  for (std::string_view part : split_top_level(body.substr(bar + 1))) {
    std::string rel = trim(part);
    if (!rel.empty()) g.add_relator(g.parse_word(rel));
  }
  return g;
}

std::string GroupPresentation::word_str(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const long n = static_cast<long>(j - i) * (w[i] > 0 ? 1 : -1);
    if (!out.empty()) out += '*';
    out += generators_[static_cast<std::size_t>(std::abs(w[i]) - 1)];
    if (n != 1) out += "^" + std::to_string(n);
    i = j;
  }
  return out;
}

std::string GroupPresentation::str() const {
  std::string out = "<";
  for (std::size_t i = 0; i < generators_.size(); ++i) out += (i ? ", " : "") + generators_[i];
  out += " | ";
  for (std::size_t i = 0; i < relators_.size(); ++i) out += (i ? ", " : "") + word_str(relators_[i]);
  out += ">";
  return out;
}

// ---------------------------------------------------------------------------

FreeProduct free_product(const GroupPresentation& g, const GroupPresentation& h) {
  FreeProduct out{g, {}};
  std::vector<int> index(h.generators().size());
  for (std::size_t i = 0; i < h.generators().size(); ++i) {
    std::string name = h.generators()[i];
    while (out.group.generator_index(name) >= 0) name += "'";
    out.renamed[h.generators()[i]] = name;
    index[i] = out.group.add_generator(name) + 1;
  }
  for (const Word& r : h.relators()) {
    Word w;
    for (int l : r) w.push_back(l > 0 ? index[l - 1] : -index[-l - 1]);
    out.group.add_relator(std::move(w));
  }
  return out;
}

namespace {

// Least rotation of w or its inverse, so conjugate/inverse relators coincide.
Word canonical_relator(const Word& w) {
  Word best;
  bool first = true;
  for (const Word& v : {w, inverse(w)}) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      Word rot(v.begin() + static_cast<long>(k), v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(k));
      if (first || rot < best) {
        best = std::move(rot);
        first = false;
      }
    }
  }
  return best;
}

bool tidy(std::vector<Word>& rels) {
  const std::size_t before = rels.size();
  std::set<Word> seen;
  std::vector<Word> out;
  bool changed = false;
  for (Word& r : rels) {
    Word c = cyclic_reduce(r);
    changed = changed || c.size() != r.size();
    if (c.empty()) continue;
    if (!seen.insert(canonical_relator(c)).second) continue;
    out.push_back(std::move(c));
  }
  changed = changed || out.size() != before;
  rels = std::move(out);
  return changed;
}

constexpr std::size_t kMaxSubstitutionLength = 24;

}  // namespace

GroupPresentation simplify(const GroupPresentation& g, int max_passes) {
  std::vector<std::string> gens = g.generators();
  std::vector<Word> rels = g.relators();
  tidy(rels);
  for (int pass = 0; pass < max_passes; ++pass) {
    bool eliminated = false;
    std::vector<std::size_t> order(rels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rels[a].size() < rels[b].size(); });
    for (std::size_t ri : order) {
      const Word& r = rels[ri];
      if (r.size() > kMaxSubstitutionLength + 1) continue;
      for (std::size_t pos = 0; pos < r.size(); ++pos) {
        const int gen = std::abs(r[pos]);
        const long occurrences = std::count_if(r.begin(), r.end(), [&](int l) { return std::abs(l) == gen; });
        if (occurrences != 1) continue;
        // rotate so the generator leads: r ~ g^e w, hence g = w^{-e}
        Word rot(r.begin() + static_cast<long>(pos), r.end());
        rot.insert(rot.end(), r.begin(), r.begin() + static_cast<long>(pos));
        const int e = rot[0] > 0 ? 1 : -1;
        Word rest(rot.begin() + 1, rot.end());
        const Word value = e > 0 ? inverse(rest) : rest;
        std::vector<Word> next;
        for (std::size_t k = 0; k < rels.size(); ++k) {
          if (k == ri) continue;
          Word w;
          for (int l : rels[k]) {
            if (std::abs(l) == gen) {
              const Word sub = l > 0 ? value : inverse(value);
              w.insert(w.end(), sub.begin(), sub.end());
            } else {
              w.push_back(l);
            }
          }
          next.push_back(free_reduce(std::move(w)));
        }
        // drop the generator and shift the later indices down
        for (Word& w : next) {
          for (int& l : w) {
            if (std::abs(l) > gen) l += l > 0 ? -1 : 1;
          }
        }
        gens.erase(gens.begin() + (gen - 1));
        rels = std::move(next);
        tidy(rels);
        eliminated = true;
        break;
      }
      if (eliminated) break;
    }
    if (!eliminated) break;
  }
  return GroupPresentation(std::move(gens), std::move(rels));
}

GroupPresentation quotient_normal_closure(const GroupPresentation& g, const std::vector<Word>& words, int max_passes) {
  GroupPresentation q = g;
  for (const Word& w : words) q.add_relator(w);
  return simplify(q, max_passes);
}

std::string Abelianization::str() const {
  std::string out;
  if (rank > 0) out = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  for (long t : torsion) out += (out.empty() ? "" : " + ") + std::string("Z_") + std::to_string(t);
  return out.empty() ? "0" : out;
}

Abelianization abelianization(const GroupPresentation& g) {
  IntMatrix m;
  for (const Word& r : g.relators()) {
    std::vector<long> row(static_cast<std::size_t>(g.rank()), 0);
    for (int i = 0; i < g.rank(); ++i) row[static_cast<std::size_t>(i)] = exponent_sum(r, i);
    m.push_back(std::move(row));
  }
  Abelianization out;
  const std::vector<long> inv = g.rank() ? smith_invariants(m) : std::vector<long>{};
  out.rank = g.rank() - static_cast<long>(inv.size());
  for (long t : inv) {
    if (t > 1) out.torsion.push_back(t);
  }
  return out;
}

Abelianization direct_sum(const Abelianization& a, const Abelianization& b) {
  std::vector<long> diag = a.torsion;
  diag.insert(diag.end(), b.torsion.begin(), b.torsion.end());
  IntMatrix m(diag.size(), std::vector<long>(diag.size(), 0));
  for (std::size_t i = 0; i < diag.size(); ++i) m[i][i] = diag[i];
  Abelianization out;
  out.rank = a.rank + b.rank;
  for (long t : smith_invariants(m)) {
    if (t > 1) out.torsion.push_back(t);
  }
  return out;
}

}  // namespace gcx
