#include "gcx/exterior/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace gcx {

struct Expr::Node {
  ExprKind kind = ExprKind::constant;
  Gaussian value;
  std::string name;
  Function fn = Function::log;
  long exponent = 0;
  int order = 0;
  BumpPtr profile;
  std::vector<Expr> args;
  std::size_t hash = 0;
  std::uint64_t symbol_mask = 0;  // Bloom-style mask of free symbol names
  bool transcendental = false;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = static_cast<std::size_t>(mpz_get_si(q.get_num_mpz_t()));
  h = mix(h, mpz_size(q.get_num_mpz_t()));
  h = mix(h, static_cast<std::size_t>(mpz_get_ui(q.get_den_mpz_t())));
  return mix(h, static_cast<std::size_t>(sgn(q) + 2));
}

std::uint64_t symbol_bit(const std::string& name) {
  return std::uint64_t{1} << (std::hash<std::string>{}(name) % 64);
}

int kind_rank(ExprKind k) { return static_cast<int>(k); }

}  // namespace

std::string_view function_name(Function f) {
  switch (f) {
    case Function::log: return "log";
    case Function::exp: return "exp";
    case Function::sqrt: return "sqrt";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Bump profile

BumpZone bump_zone(const Bump& b, double t) {
  if (t < b.zero_below.get_d()) return BumpZone::zero;
  if (t > b.one_above.get_d()) return BumpZone::one;
  return BumpZone::interpolating;
}

namespace {

// Generalized smoothstep of order 4 on [0,1], as a polynomial in s.
const std::vector<double>& smoothstep_coefficients() {
  static const std::vector<double> coeffs = [] {
    constexpr int n = 4;
    auto binom = [](int a, int b) {
      double r = 1;
      for (int k = 1; k <= b; ++k) r = r * (a - b + k) / k;
      return r;
    };
    std::vector<double> c(2 * n + 2, 0.0);
    for (int k = 0; k <= n; ++k) {
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      c[n + 1 + k] = sign * binom(n + k, k) * binom(2 * n + 1, n - k);
    }
    return c;
  }();
  return coeffs;
}

}  // namespace

double bump_value(const Bump& b, int order, double t) {
  switch (bump_zone(b, t)) {
    case BumpZone::zero: return 0.0;
    case BumpZone::one: return order == 0 ? 1.0 : 0.0;
    case BumpZone::interpolating: break;
  }
  const double lo = b.zero_below.get_d();
  const double width = b.one_above.get_d() - lo;
  const double s = (t - lo) / width;
  std::vector<double> c = smoothstep_coefficients();
  for (int k = 0; k < order; ++k) {
    for (std::size_t j = 0; j + 1 < c.size(); ++j) c[j] = c[j + 1] * static_cast<double>(j + 1);
    c.back() = 0.0;
  }
  double v = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) v = v * s + c[j];
  return v / std::pow(width, order);
}

// ---------------------------------------------------------------------------
// Construction

Expr Expr::make(Node node) {
  std::size_t h = std::hash<int>{}(kind_rank(node.kind));
  std::uint64_t mask = 0;
  bool transcendental = false;
  switch (node.kind) {
    case ExprKind::constant:
      h = mix(mix(h, hash_rational(node.value.re())), hash_rational(node.value.im()));
      break;
    case ExprKind::symbol:
      h = mix(h, std::hash<std::string>{}(node.name));
      mask = symbol_bit(node.name);
      break;
    case ExprKind::opaque:
      h = mix(mix(h, std::hash<std::string>{}(node.name)), static_cast<std::size_t>(node.order));
      transcendental = true;
      break;
    case ExprKind::function:
      h = mix(h, static_cast<std::size_t>(node.fn));
      transcendental = true;
      break;
    case ExprKind::power:
      h = mix(h, static_cast<std::size_t>(node.exponent));
      break;
    default:
      break;
  }
  for (const Expr& a : node.args) {
    h = mix(h, a.hash());
    mask |= a.node_->symbol_mask;
    transcendental = transcendental || a.node_->transcendental;
  }
  node.hash = h;
  node.symbol_mask = mask;
  node.transcendental = transcendental;
  return Expr(std::make_shared<const Node>(std::move(node)));
}

namespace {

const Expr& zero_expr() {
  static const Expr z = Expr(Gaussian(0));
  return z;
}

}  // namespace

Expr::Expr() : Expr(Gaussian(0)) {}
Expr::Expr(int v) : Expr(Gaussian(static_cast<long>(v))) {}
Expr::Expr(long v) : Expr(Gaussian(v)) {}
Expr::Expr(const Rational& v) : Expr(Gaussian(v)) {}
Expr::Expr(const Gaussian& v) {
  Node n;
  n.kind = ExprKind::constant;
  n.value = v;
  *this = make(std::move(n));
}

Expr Expr::symbol(const std::string& name) {
  Node n;
  n.kind = ExprKind::symbol;
  n.name = name;
  return make(std::move(n));
}

Expr Expr::imaginary_unit() { return Expr(Gaussian::i()); }

Expr Expr::apply(Function f, const Expr& arg) {
  if (arg.is_constant()) {
    const Gaussian& v = arg.value();
    switch (f) {
      case Function::exp:
        if (v.is_zero()) return Expr(1);
        break;
      case Function::log:
        if (v.is_one()) return Expr(0);
        if (v.is_zero()) throw DomainError("log(0)");
        break;
      case Function::sqrt:
        if (v.is_real()) {
          if (auto r = exact_sqrt(v.re())) return Expr(*r);
        }
        break;
      case Function::sin:
        if (v.is_zero()) return Expr(0);
        break;
      case Function::cos:
        if (v.is_zero()) return Expr(1);
        break;
    }
  }
  Node n;
  n.kind = ExprKind::function;
  n.fn = f;
  n.args = {arg};
  return make(std::move(n));
}

Expr Expr::bump(const BumpPtr& profile, int order, const Expr& arg) {
  if (arg.is_constant() && arg.value().is_real()) {
    switch (bump_zone(*profile, arg.value().re().get_d())) {
      case BumpZone::zero: return Expr(0);
      case BumpZone::one: return Expr(order == 0 ? 1 : 0);
      case BumpZone::interpolating: break;
    }
  }
  Node n;
  n.kind = ExprKind::opaque;
  n.name = profile->name;
  n.profile = profile;
  n.order = order;
  n.args = {arg};
  return make(std::move(n));
}

namespace {

// Splits a term into numeric coefficient and remaining monomial.
std::pair<Gaussian, Expr> split_coefficient(const Expr& t) {
  if (t.kind() == ExprKind::mul && t.arg(0).is_constant()) {
    auto rest = t.args().subspan(1);
    if (rest.size() == 1) return {t.arg(0).value(), rest[0]};
    return {t.arg(0).value(), Expr::product(std::vector<Expr>(rest.begin(), rest.end()))};
  }
  return {Gaussian(1), t};
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  Gaussian constant(0);
  std::map<Expr, Gaussian, ExprLess> collected;
  std::function<void(const Expr&)> absorb = [&](const Expr& t) {
    switch (t.kind()) {
      case ExprKind::constant:
        constant += t.value();
        break;
      case ExprKind::add:
        for (const Expr& a : t.args()) absorb(a);
        break;
      default: {
        auto [c, rest] = split_coefficient(t);
        auto it = collected.find(rest);
        if (it == collected.end()) {
          collected.emplace(rest, c);
        } else {
          it->second += c;
        }
      }
    }
  };
  for (const Expr& t : terms) absorb(t);

  std::vector<Expr> out;
  if (!constant.is_zero()) out.push_back(Expr(constant));
  for (auto& [rest, c] : collected) {
    if (c.is_zero()) continue;
    if (c.is_one()) {
      out.push_back(rest);
    } else {
      Node m;
      m.kind = ExprKind::mul;
      m.args.push_back(Expr(c));
      if (rest.kind() == ExprKind::mul) {
        m.args.insert(m.args.end(), rest.args().begin(), rest.args().end());
      } else {
        m.args.push_back(rest);
      }
      out.push_back(make(std::move(m)));
    }
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  Node n;
  n.kind = ExprKind::add;
  n.args = std::move(out);
  return make(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  Gaussian coeff(1);
  std::map<Expr, long, ExprLess> powers;
  std::vector<Expr> exp_args;
  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    switch (f.kind()) {
      case ExprKind::constant:
        coeff *= f.value();
        break;
      case ExprKind::mul:
        for (const Expr& a : f.args()) absorb(a);
        break;
      case ExprKind::power:
        powers[f.arg(0)] += f.exponent();
        break;
      case ExprKind::function:
        if (f.function() == Function::exp) {
          exp_args.push_back(f.arg(0));
          break;
        }
        powers[f] += 1;
        break;
      default:
        powers[f] += 1;
    }
  };
  for (const Expr& f : factors) absorb(f);
  if (coeff.is_zero()) return zero_expr();
  if (!exp_args.empty()) {
    Expr e = apply(Function::exp, sum(std::move(exp_args)));
    if (e.is_constant()) {
      coeff *= e.value();
    } else {
      powers[e] += 1;
    }
  }

  std::vector<Expr> out;
  std::vector<Expr> again;
  for (auto& [base, n] : powers) {
    if (n == 0) continue;
    Expr f = power(base, n);
    if (f.is_constant()) {
      coeff *= f.value();
    } else if (f.kind() == ExprKind::mul ||
               (f.kind() == ExprKind::power && powers.count(f.arg(0)) && !(f.arg(0) == base)) ||
               (f.kind() == ExprKind::function && f.function() == Function::exp && !(f == base))) {
      again.push_back(f);
    } else {
      out.push_back(f);
    }
  }
  if (coeff.is_zero()) return zero_expr();
  if (!again.empty()) {
    again.push_back(Expr(coeff));
    again.insert(again.end(), out.begin(), out.end());
    return product(std::move(again));
  }
  if (out.empty()) return Expr(coeff);
  if (coeff.is_one() && out.size() == 1) return out[0];
  Node n;
  n.kind = ExprKind::mul;
  if (!coeff.is_one()) n.args.push_back(Expr(coeff));
  std::sort(out.begin(), out.end(), ExprLess{});
  n.args.insert(n.args.end(), out.begin(), out.end());
  return make(std::move(n));
}

Expr Expr::power(const Expr& base, long exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  switch (base.kind()) {
    case ExprKind::constant:
      return Expr(base.value().pow(exponent));
    case ExprKind::power:
      return power(base.arg(0), base.exponent() * exponent);
    case ExprKind::mul: {
      std::vector<Expr> fs;
      for (const Expr& a : base.args()) fs.push_back(power(a, exponent));
      return product(std::move(fs));
    }
    case ExprKind::function:
      if (base.function() == Function::exp) return apply(Function::exp, Expr(exponent) * base.arg(0));
      if (base.function() == Function::sqrt && exponent % 2 == 0) return power(base.arg(0), exponent / 2);
      break;
    default:
      break;
  }
  Node n;
  n.kind = ExprKind::power;
  n.exponent = exponent;
  n.args = {base};
  return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Accessors

ExprKind Expr::kind() const { return node_->kind; }
const Gaussian& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Function Expr::function() const { return node_->fn; }
long Expr::exponent() const { return node_->exponent; }
int Expr::order() const { return node_->order; }
const BumpPtr& Expr::profile() const { return node_->profile; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return is_constant() && value().is_zero(); }
bool Expr::is_one() const { return is_constant() && value().is_one(); }
bool Expr::transcendental() const { return node_->transcendental; }

bool Expr::depends_on(const std::string& symbol) const {
  if (!(node_->symbol_mask & symbol_bit(symbol))) return false;
  if (kind() == ExprKind::symbol) return name() == symbol;
  for (const Expr& a : args()) {
    if (a.depends_on(symbol)) return true;
  }
  return false;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::constant:
      return compare(a.value(), b.value());
    case ExprKind::symbol:
      return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
    case ExprKind::opaque:
      if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      break;
    case ExprKind::function:
      if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
      break;
    case ExprKind::power:
      if (int c = compare(a.arg(0), b.arg(0))) return c;
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      return 0;
    default:
      break;
  }
  auto aa = a.args();
  auto ba = b.args();
  for (std::size_t i = 0; i < aa.size() && i < ba.size(); ++i) {
    if (int c = compare(aa[i], ba[i])) return c;
  }
  if (aa.size() != ba.size()) return aa.size() < ba.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Arithmetic

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::sum({a, b});
}
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  return Expr::sum({a, -b});
}
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::product({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by the zero expression");
  return Expr::product({a, Expr::power(b, -1)});
}
Expr pow(const Expr& base, long exponent) { return Expr::power(base, exponent); }
Expr exp(const Expr& e) { return Expr::apply(Function::exp, e); }
Expr log(const Expr& e) { return Expr::apply(Function::log, e); }
Expr sqrt(const Expr& e) { return Expr::apply(Function::sqrt, e); }
Expr sin(const Expr& e) { return Expr::apply(Function::sin, e); }
Expr cos(const Expr& e) { return Expr::apply(Function::cos, e); }

// ---------------------------------------------------------------------------
// Expansion

namespace {

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == ExprKind::add) return {e.args().begin(), e.args().end()};
  return {e};
}

Expr multiply_out(const Expr& a, const Expr& b, std::size_t max_terms) {
  auto ta = terms_of(a);
  auto tb = terms_of(b);
  if (ta.size() * tb.size() > max_terms) throw ExpansionLimit("expansion exceeds term limit");
  std::vector<Expr> out;
  out.reserve(ta.size() * tb.size());
  for (const Expr& x : ta) {
    for (const Expr& y : tb) out.push_back(x * y);
  }
  return Expr::sum(std::move(out));
}

}  // namespace

Expr expand(const Expr& e, std::size_t max_terms) {
  switch (e.kind()) {
    case ExprKind::constant:
    case ExprKind::symbol:
      return e;
    case ExprKind::add: {
      std::vector<Expr> ts;
      for (const Expr& a : e.args()) ts.push_back(expand(a, max_terms));
      return Expr::sum(std::move(ts));
    }
    case ExprKind::mul: {
      Expr acc(1);
      for (const Expr& a : e.args()) acc = multiply_out(acc, expand(a, max_terms), max_terms);
      return acc;
    }
    case ExprKind::power: {
      Expr base = expand(e.arg(0), max_terms);
      long n = e.exponent();
      if (n > 1 && base.kind() == ExprKind::add) {
        Expr acc = base;
        for (long k = 1; k < n; ++k) acc = multiply_out(acc, base, max_terms);
        return acc;
      }
      Expr p = Expr::power(base, n);
      // Powers of products may split into factors that are themselves sums.
      if (p.kind() == ExprKind::mul && !(p == e)) return expand(p, max_terms);
      return p;
    }
    case ExprKind::function:
      return Expr::apply(e.function(), expand(e.arg(0), max_terms));
    case ExprKind::opaque:
      return Expr::bump(e.profile(), e.order(), expand(e.arg(0), max_terms));
  }
  return e;
}

Expr try_expand(const Expr& e) {
  try {
    return expand(e);
  } catch (const ExpansionLimit&) {
    return e;
  }
}

// ---------------------------------------------------------------------------
// Calculus and rewriting

Expr diff(const Expr& e, const std::string& s) {
  if (!e.depends_on(s)) return Expr(0);
  switch (e.kind()) {
    case ExprKind::constant:
      return Expr(0);
    case ExprKind::symbol:
      return Expr(e.name() == s ? 1 : 0);
    case ExprKind::add: {
      std::vector<Expr> ts;
      for (const Expr& a : e.args()) ts.push_back(diff(a, s));
      return Expr::sum(std::move(ts));
    }
    case ExprKind::mul: {
      std::vector<Expr> ts;
      auto args = e.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr di = diff(args[i], s);
        if (di.is_zero()) continue;
        std::vector<Expr> fs{di};
        for (std::size_t j = 0; j < args.size(); ++j) {
          if (j != i) fs.push_back(args[j]);
        }
        ts.push_back(Expr::product(std::move(fs)));
      }
      return Expr::sum(std::move(ts));
    }
    case ExprKind::power: {
      const Expr& b = e.arg(0);
      return Expr::product({Expr(e.exponent()), Expr::power(b, e.exponent() - 1), diff(b, s)});
    }
    case ExprKind::function: {
      const Expr& u = e.arg(0);
      Expr du = diff(u, s);
      switch (e.function()) {
        case Function::log: return du / u;
        case Function::exp: return e * du;
        case Function::sqrt: return Expr::product({Expr(Rational(1, 2)), Expr::power(e, -1), du});
        case Function::sin: return cos(u) * du;
        case Function::cos: return -(sin(u) * du);
      }
      break;
    }
    case ExprKind::opaque:
      return Expr::bump(e.profile(), e.order() + 1, e.arg(0)) * diff(e.arg(0), s);
  }
  return Expr(0);
}

namespace {

Expr rebuild(const Expr& e, const std::vector<Expr>& args) {
  switch (e.kind()) {
    case ExprKind::add: return Expr::sum(args);
    case ExprKind::mul: return Expr::product(args);
    case ExprKind::power: return Expr::power(args[0], e.exponent());
    case ExprKind::function: return Expr::apply(e.function(), args[0]);
    case ExprKind::opaque: return Expr::bump(e.profile(), e.order(), args[0]);
    default: return e;
  }
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values) {
  if (e.kind() == ExprKind::constant) return e;
  if (e.kind() == ExprKind::symbol) {
    auto it = values.find(e.name());
    return it == values.end() ? e : it->second;
  }
  bool touched = false;
  for (const auto& [name, v] : values) {
    if (e.depends_on(name)) {
      touched = true;
      break;
    }
  }
  if (!touched) return e;
  std::vector<Expr> args;
  for (const Expr& a : e.args()) args.push_back(substitute(a, values));
  return rebuild(e, args);
}

Expr conjugate(const Expr& e, const std::map<std::string, std::string>& partner) {
  switch (e.kind()) {
    case ExprKind::constant:
      return e.value().is_real() ? e : Expr(e.value().conj());
    case ExprKind::symbol: {
      auto it = partner.find(e.name());
      return it == partner.end() ? e : Expr::symbol(it->second);
    }
    default: {
      std::vector<Expr> args;
      for (const Expr& a : e.args()) args.push_back(conjugate(a, partner));
      return rebuild(e, args);
    }
  }
}

std::set<std::string> symbols(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.kind() == ExprKind::symbol) out.insert(x.name());
    for (const Expr& a : x.args()) walk(a);
  };
  walk(e);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

const Gaussian& lookup(const Expr& sym, const Point& p) {
  auto it = p.find(sym.name());
  if (it == p.end()) throw Error("no value for symbol '" + sym.name() + "'");
  return it->second;
}

double real_argument(std::complex<double> v, const std::string& what) {
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    throw DomainError(what + " applied to a non-real argument");
  }
  return v.real();
}

// A factor that vanishes identically near the point (a bump or one of its
// derivatives inside a constant zone) annihilates a product even when other
// factors are singular there.
bool annihilates(const Expr& f, const Point& p) {
  const Expr* b = &f;
  if (f.kind() == ExprKind::power && f.exponent() > 0) b = &f.arg(0);
  if (b->kind() != ExprKind::opaque) return false;
  double t = real_argument(eval_numeric(b->arg(0), p), b->name());
  switch (bump_zone(*b->profile(), t)) {
    case BumpZone::zero: return true;
    case BumpZone::one: return b->order() > 0;
    case BumpZone::interpolating: return false;
  }
  return false;
}

}  // namespace

std::optional<Gaussian> eval_exact(const Expr& e, const Point& p) {
  switch (e.kind()) {
    case ExprKind::constant:
      return e.value();
    case ExprKind::symbol:
      return lookup(e, p);
    case ExprKind::add: {
      Gaussian acc(0);
      for (const Expr& a : e.args()) {
        auto v = eval_exact(a, p);
        if (!v) return std::nullopt;
        acc += *v;
      }
      return acc;
    }
    case ExprKind::mul: {
      for (const Expr& a : e.args()) {
        if (annihilates(a, p)) return Gaussian(0);
      }
      Gaussian acc(1);
      for (const Expr& a : e.args()) {
        auto v = eval_exact(a, p);
        if (!v) return std::nullopt;
        acc *= *v;
      }
      return acc;
    }
    case ExprKind::power: {
      if (annihilates(e, p)) return Gaussian(0);
      auto b = eval_exact(e.arg(0), p);
      if (!b) return std::nullopt;
      if (e.exponent() < 0 && b->is_zero()) throw DomainError("division by zero at " + e.arg(0).str() + " = 0");
      return b->pow(e.exponent());
    }
    case ExprKind::function: {
      auto u = eval_exact(e.arg(0), p);
      if (!u) return std::nullopt;
      switch (e.function()) {
        case Function::exp:
          if (u->is_zero()) return Gaussian(1);
          return std::nullopt;
        case Function::log:
          if (u->is_zero()) throw DomainError("log(0) at " + e.arg(0).str() + " = 0");
          if (u->is_one()) return Gaussian(0);
          return std::nullopt;
        case Function::sqrt:
          if (u->is_real()) {
            if (auto r = exact_sqrt(u->re())) return Gaussian(*r);
          }
          return std::nullopt;
        case Function::sin:
          if (u->is_zero()) return Gaussian(0);
          return std::nullopt;
        case Function::cos:
          if (u->is_zero()) return Gaussian(1);
          return std::nullopt;
      }
      return std::nullopt;
    }
    case ExprKind::opaque: {
      double t = real_argument(eval_numeric(e.arg(0), p), e.name());
      switch (bump_zone(*e.profile(), t)) {
        case BumpZone::zero: return Gaussian(0);
        case BumpZone::one: return Gaussian(e.order() == 0 ? 1 : 0);
        case BumpZone::interpolating: return std::nullopt;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::complex<double> eval_numeric(const Expr& e, const Point& p) {
  using C = std::complex<double>;
  switch (e.kind()) {
    case ExprKind::constant:
      return e.value().to_complex();
    case ExprKind::symbol:
      return lookup(e, p).to_complex();
    case ExprKind::add: {
      C acc = 0;
      for (const Expr& a : e.args()) acc += eval_numeric(a, p);
      return acc;
    }
    case ExprKind::mul: {
      for (const Expr& a : e.args()) {
        if (annihilates(a, p)) return 0.0;
      }
      C acc = 1;
      for (const Expr& a : e.args()) acc *= eval_numeric(a, p);
      return acc;
    }
    case ExprKind::power: {
      if (annihilates(e, p)) return 0.0;
      C b = eval_numeric(e.arg(0), p);
      if (e.exponent() < 0 && std::abs(b) == 0.0) throw DomainError("division by zero at " + e.arg(0).str() + " = 0");
      return std::pow(b, static_cast<int>(e.exponent()));
    }
    case ExprKind::function: {
      C u = eval_numeric(e.arg(0), p);
      switch (e.function()) {
        case Function::exp: return std::exp(u);
        case Function::log:
          if (std::abs(u) == 0.0) throw DomainError("log(0) at " + e.arg(0).str() + " = 0");
          return std::log(u);
        case Function::sqrt: return std::sqrt(u);
        case Function::sin: return std::sin(u);
        case Function::cos: return std::cos(u);
      }
      return 0.0;
    }
    case ExprKind::opaque: {
      double t = real_argument(eval_numeric(e.arg(0), p), e.name());
      return bump_value(*e.profile(), e.order(), t);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool negative_leading(const Expr& t) {
  const Expr* c = nullptr;
  if (t.is_constant()) {
    c = &t;
  } else if (t.kind() == ExprKind::mul && t.arg(0).is_constant()) {
    c = &t.arg(0);
  }
  if (!c) return false;
  const Gaussian& v = c->value();
  if (v.is_real()) return sgn(v.re()) < 0;
  return sgn(v.re()) == 0 && sgn(v.im()) < 0;
}

bool atomic_for_power(const Expr& e) {
  return e.kind() == ExprKind::symbol || e.kind() == ExprKind::function || e.kind() == ExprKind::opaque ||
         (e.is_constant() && e.value().is_real() && sgn(e.value().re()) >= 0 && e.value().re().get_den() == 1);
}

void print(std::ostream& os, const Expr& e);

void print_factor(std::ostream& os, const Expr& f) {
  if (f.kind() == ExprKind::add) {
    os << '(';
    print(os, f);
    os << ')';
  } else {
    print(os, f);
  }
}

void print(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case ExprKind::constant:
      os << e.value().str();
      return;
    case ExprKind::symbol:
      os << e.name();
      return;
    case ExprKind::opaque:
      os << e.name() << std::string(static_cast<std::size_t>(e.order()), '\'') << '(';
      print(os, e.arg(0));
      os << ')';
      return;
    case ExprKind::function:
      os << function_name(e.function()) << '(';
      print(os, e.arg(0));
      os << ')';
      return;
    case ExprKind::power:
      if (atomic_for_power(e.arg(0))) {
        print(os, e.arg(0));
      } else {
        os << '(';
        print(os, e.arg(0));
        os << ')';
      }
      os << "**" << e.exponent();
      return;
    case ExprKind::mul: {
      auto args = e.args();
      std::size_t start = 0;
      if (args[0].is_constant()) {
        const Gaussian& c = args[0].value();
        if (c == Gaussian(-1)) {
          os << '-';
          start = 1;
        } else if (!c.is_real() && sgn(c.re()) == 0 && c.im() == -1) {
          os << "-i*";
          start = 1;
        }
      }
      for (std::size_t k = start; k < args.size(); ++k) {
        if (k > start) os << '*';
        print_factor(os, args[k]);
      }
      return;
    }
    case ExprKind::add: {
      bool first = true;
      for (const Expr& t : e.args()) {
        if (first) {
          print(os, t);
          first = false;
        } else if (negative_leading(t)) {
          os << " - ";
          print(os, -t);
        } else {
          os << " + ";
          print(os, t);
        }
      }
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

}  // namespace gcx
