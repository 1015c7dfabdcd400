#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcx {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Free-group word: letter k > 0 is generator k-1, letter -k its inverse.
using Word = std::vector<int>;

Word free_reduce(Word w);
/// Free reduction followed by cancelling letters across the cyclic seam.
Word cyclic_reduce(Word w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, long n);
Word commutator(const Word& a, const Word& b);
/// Exponent sum of generator `gen` (0-based).
long exponent_sum(const Word& w, int gen);

/// Finitely presented group ⟨generators | relators⟩.
class GroupPresentation {
 public:
  GroupPresentation() = default;
  GroupPresentation(std::vector<std::string> generators, std::vector<Word> relators);

  /// Parses "<x, y | x^2, [x,y], x*y*x**-1*y^-1>"; "< | >" is the trivial group.
  static GroupPresentation parse(std::string_view text);

  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  int rank() const { return static_cast<int>(generators_.size()); }

  int generator_index(const std::string& name) const;  // -1 if absent
  int add_generator(const std::string& name);
  void add_relator(Word w);

  /// Parses a word over this group's generators: products by `*` or
  /// juxtaposition with spaces, powers `^n` / `**n`, groups `( )`,
  /// commutators `[u, v]`, and `1` for the identity.
  Word parse_word(std::string_view text) const;
  std::string word_str(const Word& w) const;
  std::string str() const;

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

struct FreeProduct {
  GroupPresentation group;
  /// Generator name in the second factor -> name in the product.
  std::map<std::string, std::string> renamed;
};

/// G ∗ H; clashing generator names of H get a prime suffix.
FreeProduct free_product(const GroupPresentation& g, const GroupPresentation& h);

/// Bounded Tietze simplification: reduce relators, drop trivial and duplicate
/// ones, eliminate generators that occur exactly once in some relator.
GroupPresentation simplify(const GroupPresentation& g, int max_passes = 32);

/// G / ⟨⟨words⟩⟩ followed by simplify().
GroupPresentation quotient_normal_closure(const GroupPresentation& g, const std::vector<Word>& words,
                                          int max_passes = 32);

/// Z^rank ⊕ Z_t1 ⊕ ... with t1 | t2 | ...
struct Abelianization {
  long rank = 0;
  std::vector<long> torsion;

  std::string str() const;
  friend bool operator==(const Abelianization&, const Abelianization&) = default;
};

Abelianization abelianization(const GroupPresentation& g);

/// Direct sum of two abelian groups, torsion renormalized to invariant factors.
Abelianization direct_sum(const Abelianization& a, const Abelianization& b);

}  // namespace gcx
