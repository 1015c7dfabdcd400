#include "gcx/exterior/form.hpp"

#include <algorithm>
#include <sstream>

namespace gcx {

MixedForm::MixedForm(ChartPtr chart, Region domain) : chart_(std::move(chart)), domain_(std::move(domain)) {}

MixedForm MixedForm::scalar(ChartPtr chart, const Expr& f, Region domain) {
  MixedForm out(std::move(chart), std::move(domain));
  out.accumulate(0, f);
  return out;
}

MixedForm MixedForm::differential(ChartPtr chart, int slot) {
  if (slot < 0 || slot >= chart->dim()) throw Error("slot out of range");
  return monomial(std::move(chart), Mask{1} << slot, Expr(1));
}

MixedForm MixedForm::monomial(ChartPtr chart, Mask mask, const Expr& coefficient) {
  MixedForm out(std::move(chart));
  out.accumulate(mask, coefficient);
  return out;
}

Expr MixedForm::coefficient(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Expr(0) : it->second;
}

void MixedForm::accumulate(Mask m, const Expr& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  Expr v = try_expand(it == terms_.end() ? c : it->second + c);
  if (v.is_zero()) {
    if (it != terms_.end()) terms_.erase(it);
  } else if (it == terms_.end()) {
    terms_.emplace(m, std::move(v));
  } else {
    it->second = std::move(v);
  }
}

MixedForm MixedForm::part(int k) const {
  MixedForm out(chart_, domain_);
  for (const auto& [m, c] : terms_) {
    if (degree_of(m) == k) out.terms_.emplace(m, c);
  }
  return out;
}

int MixedForm::max_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) best = std::max(best, degree_of(m));
  return best;
}

int MixedForm::min_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    if (best < 0 || degree_of(m) < best) best = degree_of(m);
  }
  return best;
}

bool MixedForm::homogeneous() const { return min_degree() == max_degree(); }

MixedForm MixedForm::with_domain(Region r) const {
  MixedForm out = *this;
  out.domain_ = std::move(r);
  return out;
}

std::string MixedForm::monomial_str(Mask m) const {
  if (m == 0) return "1";
  std::string out;
  for (int s = 0; s < chart_->dim(); ++s) {
    if (!(m & (Mask{1} << s))) continue;
    if (!out.empty()) out += '^';
    out += chart_->differential_name(s);
  }
  return out;
}

std::string MixedForm::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    if (m == 0) {
      out += c.kind() == ExprKind::add ? "(" + c.str() + ")" : c.str();
    } else if (c.is_one()) {
      out += monomial_str(m);
    } else if (c.kind() == ExprKind::add) {
      out += "(" + c.str() + ")*" + monomial_str(m);
    } else {
      out += c.str() + "*" + monomial_str(m);
    }
  }
  return out;
}

void require_same_chart(const MixedForm& a, const MixedForm& b, const char* op) {
  if (a.chart() != b.chart()) {
    throw ChartMismatch(std::string(op) + ": forms live on different charts (" + (a.chart() ? a.chart()->name() : "?") +
                        " vs " + (b.chart() ? b.chart()->name() : "?") + ")");
  }
}

MixedForm operator+(const MixedForm& a, const MixedForm& b) {
  require_same_chart(a, b, "+");
  MixedForm out = a.with_domain(a.domain().intersect(b.domain()));
  for (const auto& [m, c] : b.terms()) out.accumulate(m, c);
  return out;
}

MixedForm operator-(const MixedForm& a) {
  MixedForm out(a.chart(), a.domain());
  for (const auto& [m, c] : a.terms()) out.accumulate(m, -c);
  return out;
}

MixedForm operator-(const MixedForm& a, const MixedForm& b) { return a + (-b); }

MixedForm operator*(const Expr& f, const MixedForm& a) {
  MixedForm out(a.chart(), a.domain());
  if (f.is_zero()) return out;
  for (const auto& [m, c] : a.terms()) out.accumulate(m, f * c);
  return out;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

MixedForm wedge(const MixedForm& a, const MixedForm& b) {
  require_same_chart(a, b, "wedge");
  MixedForm out(a.chart(), a.domain().intersect(b.domain()));
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      Expr c = ca * cb;
      out.accumulate(ma | mb, s > 0 ? c : -c);
    }
  }
  return out;
}

MixedForm d(const MixedForm& a) {
  MixedForm out(a.chart(), a.domain());
  const Chart& chart = *a.chart();
  for (const auto& [m, c] : a.terms()) {
    for (int s = 0; s < chart.dim(); ++s) {
      const Mask bit = Mask{1} << s;
      if (m & bit) continue;
      Expr dc = diff(c, chart.slots()[s].symbol);
      if (dc.is_zero()) continue;
      out.accumulate(m | bit, wedge_sign(bit, m) > 0 ? dc : -dc);
    }
  }
  return out;
}

MixedForm exp_form(const MixedForm& b) {
  for (const auto& [m, c] : b.terms()) {
    const int k = degree_of(m);
    if (k == 0) throw DegreeError("exp_form: argument has a degree-0 component");
    if (k % 2) throw DegreeError("exp_form: argument has an odd-degree component");
  }
  MixedForm out = MixedForm::scalar(b.chart(), Expr(1), b.domain());
  MixedForm term = out;
  const int dim = b.chart()->dim();
  for (long k = 1; k <= dim / 2; ++k) {
    term = Expr(Rational(1, k)) * wedge(term, b);
    if (term.is_zero()) break;
    out = out + term;
  }
  return out;
}

MixedForm conj(const MixedForm& a) {
  const Chart& chart = *a.chart();
  MixedForm out(a.chart(), a.domain());
  for (const auto& [m, c] : a.terms()) {
    std::vector<int> image;
    for (int s = 0; s < chart.dim(); ++s) {
      if (m & (Mask{1} << s)) image.push_back(chart.partner_slot(s));
    }
    int inversions = 0;
    Mask target = 0;
    for (std::size_t i = 0; i < image.size(); ++i) {
      target |= Mask{1} << image[i];
      for (std::size_t j = i + 1; j < image.size(); ++j) inversions += image[i] > image[j];
    }
    Expr cc = conjugate(c, chart.partners());
    out.accumulate(target, inversions % 2 ? -cc : cc);
  }
  return out;
}

MixedForm real_part(const MixedForm& a) { return Expr(Rational(1, 2)) * (a + conj(a)); }

MixedForm imag_part(const MixedForm& a) {
  return Expr(Gaussian(Rational(0), Rational(-1, 2))) * (a - conj(a));
}

MixedForm map_coefficients(const MixedForm& a, const std::function<Expr(const Expr&)>& f) {
  MixedForm out(a.chart(), a.domain());
  for (const auto& [m, c] : a.terms()) out.accumulate(m, f(c));
  return out;
}

// ---------------------------------------------------------------------------
// Vector fields

Expr VectorField::component(int slot) const {
  auto it = components_.find(slot);
  return it == components_.end() ? Expr(0) : it->second;
}

void VectorField::accumulate(int slot, const Expr& c) {
  if (c.is_zero()) return;
  Expr v = try_expand(component(slot) + c);
  if (v.is_zero()) {
    components_.erase(slot);
  } else {
    components_[slot] = std::move(v);
  }
}

std::string VectorField::str() const {
  if (components_.empty()) return "0";
  std::string out;
  for (const auto& [s, c] : components_) {
    if (!out.empty()) out += " + ";
    const std::string v = "@" + chart_->slots()[s].symbol;
    if (c.is_one()) {
      out += v;
    } else if (c.kind() == ExprKind::add) {
      out += "(" + c.str() + ")*" + v;
    } else {
      out += c.str() + "*" + v;
    }
  }
  return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField out = a.chart() ? a : VectorField(b.chart());
  if (a.chart() && b.chart() && a.chart() != b.chart()) throw ChartMismatch("vector sum across charts");
  for (const auto& [s, c] : b.components()) out.accumulate(s, c);
  return out;
}

VectorField operator*(const Expr& f, const VectorField& v) {
  VectorField out(v.chart());
  for (const auto& [s, c] : v.components()) out.accumulate(s, f * c);
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + Expr(-1) * b; }

Expr apply_vector(const VectorField& x, const Expr& f) {
  std::vector<Expr> terms;
  for (const auto& [s, c] : x.components()) {
    Expr df = diff(f, x.chart()->slots()[s].symbol);
    if (!df.is_zero()) terms.push_back(c * df);
  }
  return try_expand(Expr::sum(std::move(terms)));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.chart() != y.chart()) throw ChartMismatch("lie_bracket across charts");
  VectorField out(x.chart());
  for (int j = 0; j < x.chart()->dim(); ++j) {
    out.accumulate(j, apply_vector(x, y.component(j)) - apply_vector(y, x.component(j)));
  }
  return out;
}

MixedForm interior(const VectorField& x, const MixedForm& a) {
  if (x.chart() && x.chart() != a.chart()) throw ChartMismatch("interior: vector and form on different charts");
  MixedForm out(a.chart(), a.domain());
  for (const auto& [m, c] : a.terms()) {
    for (const auto& [s, xs] : x.components()) {
      const Mask bit = Mask{1} << s;
      if (!(m & bit)) continue;
      const int before = std::popcount(m & (bit - 1));
      Expr v = xs * c;
      out.accumulate(m & ~bit, before % 2 ? -v : v);
    }
  }
  return out;
}

MixedForm lie_derivative(const VectorField& x, const MixedForm& a) { return d(interior(x, a)) + interior(x, d(a)); }

Expr evaluate_one_form(const MixedForm& xi, const VectorField& x) {
  std::vector<Expr> terms;
  for (const auto& [s, c] : x.components()) {
    Expr k = xi.coefficient(Mask{1} << s);
    if (!k.is_zero()) terms.push_back(k * c);
  }
  return try_expand(Expr::sum(std::move(terms)));
}

GeneralizedSection GeneralizedSection::zero(const ChartPtr& chart) { return {VectorField(chart), MixedForm(chart)}; }

std::string GeneralizedSection::str() const {
  if (is_zero()) return "0";
  if (covector.is_zero()) return vector.str();
  if (vector.is_zero()) return covector.str();
  return vector.str() + " + " + covector.str();
}

GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b) {
  return {a.vector + b.vector, a.covector + b.covector};
}

MixedForm clifford(const GeneralizedSection& s, const MixedForm& rho) {
  if (s.chart() && s.chart() != rho.chart()) throw ChartMismatch("clifford: section and spinor on different charts");
  MixedForm out = interior(s.vector, rho);
  if (!s.covector.is_zero()) out = out + wedge(s.covector, rho);
  return out;
}

Expr pairing(const GeneralizedSection& a, const GeneralizedSection& b) {
  if (a.chart() != b.chart()) throw ChartMismatch("pairing across charts");
  return try_expand(Expr(Rational(1, 2)) * (evaluate_one_form(b.covector, a.vector) + evaluate_one_form(a.covector, b.vector)));
}

GeneralizedSection courant_bracket(const GeneralizedSection& a, const GeneralizedSection& b, const MixedForm& h) {
  if (a.chart() != b.chart()) throw ChartMismatch("courant_bracket across charts");
  if (!h.is_zero() && (h.min_degree() != 3 || h.max_degree() != 3)) {
    throw DegreeError("courant_bracket: H must be a 3-form");
  }
  const ChartPtr& chart = a.chart();
  GeneralizedSection out{lie_bracket(a.vector, b.vector), MixedForm(chart)};
  MixedForm xi = a.covector.chart() ? a.covector : MixedForm(chart);
  MixedForm eta = b.covector.chart() ? b.covector : MixedForm(chart);
  Expr half_diff = Expr(Rational(1, 2)) * (evaluate_one_form(eta, a.vector) - evaluate_one_form(xi, b.vector));
  out.covector = lie_derivative(a.vector, eta) - lie_derivative(b.vector, xi) - d(MixedForm::scalar(chart, half_diff));
  if (!h.is_zero()) out.covector = out.covector + interior(b.vector, interior(a.vector, h));
  return out;
}

}  // namespace gcx
