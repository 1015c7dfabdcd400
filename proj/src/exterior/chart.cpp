#include "gcx/exterior/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace gcx {

std::string_view coord_kind_name(CoordKind k) {
  switch (k) {
    case CoordKind::real: return "real";
    case CoordKind::radial: return "radial";
    case CoordKind::angle: return "angle";
    case CoordKind::complex: return "complex";
  }
  return "?";
}

Chart::Chart(std::string name, std::vector<Coordinate> coordinates)
    : name_(std::move(name)), coordinates_(std::move(coordinates)) {
  std::set<std::string> seen;
  auto claim = [&](const std::string& s) {
    if (s.empty()) return;
    if (!seen.insert(s).second) throw Error("chart '" + name_ + "': duplicate coordinate name '" + s + "'");
  };
  for (std::size_t c = 0; c < coordinates_.size(); ++c) {
    Coordinate& co = coordinates_[c];
    claim(co.name);
    const int ci = static_cast<int>(c);
    if (co.kind == CoordKind::complex) {
      const std::string bar = co.name + "bar";
      claim(bar);
      claim(co.re_name);
      claim(co.im_name);
      slots_.push_back({co.name, ci, false});
      slots_.push_back({bar, ci, true});
      partners_[co.name] = bar;
      partners_[bar] = co.name;
      Expr z = Expr::symbol(co.name);
      Expr zb = Expr::symbol(bar);
      if (!co.re_name.empty()) rewrites_[co.re_name] = (z + zb) * Expr(Rational(1, 2));
      if (!co.im_name.empty()) rewrites_[co.im_name] = (z - zb) / (Expr(2) * Expr::imaginary_unit());
    } else {
      slots_.push_back({co.name, ci, false});
    }
  }
  if (slots_.size() > 30) throw Error("chart '" + name_ + "': too many real dimensions");
}

std::optional<int> Chart::slot_index(const std::string& symbol) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].symbol == symbol) return static_cast<int>(i);
  }
  return std::nullopt;
}

const Coordinate* Chart::coordinate(const std::string& name) const {
  for (const Coordinate& c : coordinates_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

int Chart::partner_slot(int slot) const {
  const Slot& s = slots_[slot];
  if (coordinates_[s.coordinate].kind != CoordKind::complex) return slot;
  return s.conjugate ? slot - 1 : slot + 1;
}

std::string Chart::str() const {
  std::ostringstream os;
  os << "chart " << name_ << " = ";
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    const Coordinate& c = coordinates_[i];
    if (i) os << ", ";
    os << coord_kind_name(c.kind) << ' ' << c.name;
    if (c.kind == CoordKind::complex && !c.re_name.empty()) os << '(' << c.re_name << ", " << c.im_name << ')';
  }
  return os.str();
}

ChartPtr make_chart(std::string name, std::vector<Coordinate> coordinates) {
  return std::make_shared<const Chart>(std::move(name), std::move(coordinates));
}

// ---------------------------------------------------------------------------

std::string_view relation_text(Relation r) {
  switch (r) {
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::gt: return ">";
    case Relation::ge: return ">=";
    case Relation::eq: return "=";
    case Relation::ne: return "!=";
  }
  return "?";
}

Constraint Constraint::make(const Chart& chart, Expr lhs, Relation rel, Gaussian rhs) {
  Constraint c{std::move(lhs), rel, std::move(rhs), {}, false};
  if (c.lhs.kind() == ExprKind::symbol) {
    auto slot = chart.slot_index(c.lhs.name());
    if (slot && !chart.slots()[*slot].conjugate) c.hint_coordinate = c.lhs.name();
  } else if (c.lhs.kind() == ExprKind::function && c.lhs.function() == Function::sqrt) {
    // |z| is written sqrt(z*zbar)
    for (const Coordinate& co : chart.coordinates()) {
      if (co.kind != CoordKind::complex) continue;
      Expr m = Expr::symbol(co.name) * Expr::symbol(co.name + "bar");
      if (c.lhs.arg(0) == m) {
        c.hint_coordinate = co.name;
        c.modulus = true;
      }
    }
  }
  return c;
}

bool Constraint::holds(const Point& p, double tolerance) const {
  std::complex<double> v;
  if (auto exact = eval_exact(lhs, p)) {
    const Gaussian d = *exact - rhs;
    switch (rel) {
      case Relation::eq: return d.is_zero();
      case Relation::ne: return !d.is_zero();
      default: break;
    }
    if (!d.is_real()) throw DomainError("ordering constraint on a non-real value: " + str());
    const int s = sgn(d.re());
    switch (rel) {
      case Relation::lt: return s < 0;
      case Relation::le: return s <= 0;
      case Relation::gt: return s > 0;
      case Relation::ge: return s >= 0;
      default: return false;
    }
  }
  v = eval_numeric(lhs, p) - rhs.to_complex();
  const double scale = std::max(1.0, std::abs(rhs.to_complex()));
  switch (rel) {
    case Relation::eq: return std::abs(v) <= tolerance * scale;
    case Relation::ne: return std::abs(v) > tolerance * scale;
    default: break;
  }
  if (std::abs(v.imag()) > 1e-9 * scale) throw DomainError("ordering constraint on a non-real value: " + str());
  switch (rel) {
    case Relation::lt: return v.real() < 0;
    case Relation::le: return v.real() <= 0;
    case Relation::gt: return v.real() > 0;
    case Relation::ge: return v.real() >= 0;
    default: return false;
  }
}

std::string Constraint::str() const {
  std::string l = modulus ? "|" + hint_coordinate + "|" : lhs.str();
  return l + " " + std::string(relation_text(rel)) + " " + rhs.str();
}

bool Region::contains(const Point& p) const { return !violated(p).has_value(); }

std::optional<Constraint> Region::violated(const Point& p) const {
  for (const Constraint& c : constraints_) {
    if (!c.holds(p)) return c;
  }
  return std::nullopt;
}

Region Region::intersect(const Region& other) const {
  std::vector<Constraint> cs = constraints_;
  for (const Constraint& c : other.constraints_) {
    bool dup = std::any_of(cs.begin(), cs.end(), [&](const Constraint& x) {
      return x.rel == c.rel && x.rhs == c.rhs && x.lhs == c.lhs;
    });
    if (!dup) cs.push_back(c);
  }
  return Region(std::move(cs));
}

Region Region::substitute(const Chart& chart, const std::map<std::string, Expr>& values) const {
  std::vector<Constraint> cs;
  for (const Constraint& c : constraints_) {
    cs.push_back(Constraint::make(chart, gcx::substitute(c.lhs, values), c.rel, c.rhs));
  }
  return Region(std::move(cs));
}

std::string Region::str() const {
  if (constraints_.empty()) return "everywhere";
  std::string out;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i) out += ", ";
    out += constraints_[i].str();
  }
  return out;
}

// ---------------------------------------------------------------------------

Point make_point(const Chart& chart, const std::map<std::string, Gaussian>& coordinate_values) {
  Point p;
  for (const auto& [name, v] : coordinate_values) {
    if (!chart.coordinate(name) && !chart.slot_index(name)) {
      throw Error("chart '" + chart.name() + "' has no coordinate '" + name + "'");
    }
  }
  for (const Coordinate& c : chart.coordinates()) {
    auto it = coordinate_values.find(c.name);
    Gaussian v = it != coordinate_values.end() ? it->second : Gaussian(c.kind == CoordKind::radial ? 1 : 0);
    if (c.kind != CoordKind::complex && !v.is_real()) {
      throw DomainError("real coordinate '" + c.name + "' given a complex value");
    }
    if (c.kind == CoordKind::radial && sgn(v.re()) <= 0) {
      throw DomainError("radial coordinate '" + c.name + "' must be positive");
    }
    p[c.name] = v;
    if (c.kind == CoordKind::complex) p[c.name + "bar"] = v.conj();
  }
  return p;
}

Rational to_rational(double v, int bits) {
  const double scale = std::ldexp(1.0, bits);
  Rational q(mpz_class(static_cast<long>(std::llround(v * scale))), mpz_class(1) << bits);
  q.canonicalize();
  return q;
}

PointSampler::PointSampler(const Chart& chart, const Region& region, std::uint64_t seed)
    : chart_(chart), region_(region), rng_(seed) {
  for (const Coordinate& c : chart.coordinates()) {
    switch (c.kind) {
      case CoordKind::real:
        bounds_[c.name] = {Rational(-2), Rational(2)};
        break;
      case CoordKind::angle:
        bounds_[c.name] = {Rational(0), Rational(6)};
        break;
      case CoordKind::radial:
        bounds_[c.name] = {Rational(1, 64), Rational(2)};
        break;
      case CoordKind::complex:
        bounds_[c.name + ".re"] = {Rational(-2), Rational(2)};
        bounds_[c.name + ".im"] = {Rational(-2), Rational(2)};
        break;
    }
  }
  for (const Constraint& c : region.constraints()) {
    if (c.hint_coordinate.empty()) continue;
    const Coordinate* co = chart.coordinate(c.hint_coordinate);
    if (!co) continue;
    if (c.rel == Relation::eq) {
      fixed_[co->name] = c.rhs;
      continue;
    }
    if (!c.rhs.is_real() || c.rel == Relation::ne) continue;
    Interval* iv = nullptr;
    if (c.modulus) {
      auto [it, fresh] = modulus_.try_emplace(co->name, Interval{Rational(0), Rational(2)});
      iv = &it->second;
    } else if (co->kind != CoordKind::complex) {
      iv = &bounds_[co->name];
    }
    if (!iv) continue;
    if (c.rel == Relation::gt || c.rel == Relation::ge) iv->lo = std::max(iv->lo, c.rhs.re());
    if (c.rel == Relation::lt || c.rel == Relation::le) iv->hi = std::min(iv->hi, c.rhs.re());
  }
}

Rational PointSampler::uniform01() {
  // 20 random bits; exact dyadic rational in [0, 1].
  const auto bits = static_cast<long>(rng_() >> 44);
  Rational q(bits, 1L << 20);
  q.canonicalize();
  return q;
}

Rational PointSampler::draw(const Interval& iv) { return Rational(iv.lo + (iv.hi - iv.lo) * uniform01()); }

Point PointSampler::next() {
  while (true) {
    if (++attempts_ > budget_) {
      throw SamplingError("could not sample region {" + region_.str() + "} on chart " + chart_.name() + " within " +
                          std::to_string(budget_) + " attempts");
    }
    std::map<std::string, Gaussian> values;
    for (const Coordinate& c : chart_.coordinates()) {
      if (auto f = fixed_.find(c.name); f != fixed_.end()) {
        values[c.name] = f->second;
        continue;
      }
      if (c.kind != CoordKind::complex) {
        values[c.name] = draw(bounds_.at(c.name));
        continue;
      }
      if (auto m = modulus_.find(c.name); m != modulus_.end()) {
        const double radius = draw(m->second).get_d();
        const double angle = 2 * std::numbers::pi * uniform01().get_d();
        values[c.name] = Gaussian(to_rational(radius * std::cos(angle)), to_rational(radius * std::sin(angle)));
      } else {
        values[c.name] = Gaussian(draw(bounds_.at(c.name + ".re")), draw(bounds_.at(c.name + ".im")));
      }
    }
    Point p;
    try {
      p = make_point(chart_, values);
      if (!region_.contains(p)) continue;
    } catch (const DomainError&) {
      continue;
    }
    return p;
  }
}

}  // namespace gcx
