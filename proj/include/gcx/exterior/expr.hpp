#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gcx/exterior/errors.hpp"
#include "gcx/exterior/number.hpp"

namespace gcx {

enum class ExprKind : std::uint8_t { constant, symbol, opaque, function, power, mul, add };

enum class Function : std::uint8_t { log, exp, sqrt, sin, cos };

std::string_view function_name(Function f);

/// Opaque smooth profile: identically 0 for arguments below `zero_below`,
/// identically 1 above `one_above`, unspecified in between.
///
/// Numeric evaluation in the interpolation zone uses a concrete C^4 smooth
/// step; symbolic checks should be restricted to the two constant zones.
struct Bump {
  std::string name;
  Rational zero_below;
  Rational one_above;
};
using BumpPtr = std::shared_ptr<const Bump>;

enum class BumpZone { zero, interpolating, one };

BumpZone bump_zone(const Bump& b, double t);

/// Value of the order-th derivative of the concrete smooth step at t.
double bump_value(const Bump& b, int order, double t);

/// Symbol name -> value. Complex-pair symbols carry both z and zbar entries.
using Point = std::map<std::string, Gaussian>;

/// Immutable symbolic scalar.
///
/// Built only through the canonicalizing constructors below: sums and
/// products are flattened, constants folded, like terms and like bases
/// collected, exp factors merged. Two structurally equal values compare
/// equal; full canonical simplification is not attempted (see expand()).
class Expr {
 public:
  Expr();
  Expr(int v);                // NOLINT(google-explicit-constructor)
  Expr(long v);               // NOLINT(google-explicit-constructor)
  Expr(const Rational& v);    // NOLINT(google-explicit-constructor)
  Expr(const Gaussian& v);    // NOLINT(google-explicit-constructor)

  static Expr symbol(const std::string& name);
  static Expr imaginary_unit();
  static Expr apply(Function f, const Expr& arg);
  static Expr bump(const BumpPtr& profile, int order, const Expr& arg);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, long exponent);

  ExprKind kind() const;
  const Gaussian& value() const;
  const std::string& name() const;
  Function function() const;
  long exponent() const;
  int order() const;
  const BumpPtr& profile() const;
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i) const { return args()[i]; }
  std::size_t hash() const;

  bool is_constant() const { return kind() == ExprKind::constant; }
  bool is_zero() const;
  bool is_one() const;
  /// True when a function or opaque node occurs anywhere in the tree.
  bool transcendental() const;
  bool depends_on(const std::string& symbol) const;

  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend int compare(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Node node);
  std::shared_ptr<const Node> node_;
};

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }
Expr pow(const Expr& base, long exponent);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);

class ExpansionLimit : public Error {
 public:
  using Error::Error;
};

/// Distributes products over sums and multiplies out positive integer powers
/// of sums, recursively inside function arguments. Result is a sum of
/// coefficient × atom-power monomials. Throws ExpansionLimit past `max_terms`.
Expr expand(const Expr& e, std::size_t max_terms = 20000);

/// expand(), falling back to the input when the expansion limit is hit.
Expr try_expand(const Expr& e);

Expr diff(const Expr& e, const std::string& symbol);

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values);

/// Complex conjugate; `partner` maps each complex symbol to its conjugate
/// symbol (both directions). Unlisted symbols are real.
Expr conjugate(const Expr& e, const std::map<std::string, std::string>& partner);

/// Free symbols of e.
std::set<std::string> symbols(const Expr& e);

/// Exact value when every node evaluates in Gaussian rationals; nullopt once a
/// transcendental node has no exact value. Throws DomainError on singularities.
std::optional<Gaussian> eval_exact(const Expr& e, const Point& p);

/// Double-precision evaluation. Throws DomainError on singularities.
std::complex<double> eval_numeric(const Expr& e, const Point& p);

}  // namespace gcx
