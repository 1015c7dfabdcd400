#include "gcx/gcs/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcx {

namespace {

MixedForm zero_like(const MixedForm& a) { return MixedForm(a.chart()); }

MixedForm wedge_power(const MixedForm& a, int n) {
  MixedForm out = MixedForm::scalar(a.chart(), Expr(1));
  for (int i = 0; i < n; ++i) out = wedge(out, a);
  return out;
}

std::string point_str(const Point& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : ", ") + k + "=" + v.str();
  return "{" + s + "}";
}

}  // namespace

MixedForm twisted_d(const MixedForm& rho, const MixedForm& h) {
  MixedForm out = d(rho);
  if (h.chart() && !h.is_zero()) out = out + wedge(h, rho);
  return out;
}

SpinorStructure::SpinorStructure(std::string name, MixedForm rho, MixedForm h,
                                 std::optional<GeneralizedSection> certificate, std::optional<DecompositionHints> hints,
                                 const CheckOptions& opts)
    : name_(std::move(name)),
      rho_(std::move(rho)),
      h_(std::move(h)),
      certificate_(std::move(certificate)),
      hints_(std::move(hints)) {
  if (!rho_.chart()) throw Error("spinor '" + name_ + "' has no chart");
  if (!h_.chart()) h_ = zero_like(rho_);
  require_same_chart(rho_, h_, "spinor twisting form");
  if (!h_.is_zero()) {
    if (h_.min_degree() != 3 || h_.max_degree() != 3) {
      throw DegreeError("twisting form of '" + name_ + "' must be a 3-form");
    }
    const Agreement closed = forms_agree(d(h_), zero_like(h_), opts);
    if (!closed.agree) throw Error("twisting form of '" + name_ + "' is not closed: " + closed.detail);
  }
  if (certificate_ && certificate_->chart() && certificate_->chart() != rho_.chart()) {
    throw ChartMismatch("certificate of '" + name_ + "' lives on another chart");
  }
  if (hints_) {
    require_same_chart(rho_, hints_->Omega, "decomposition hints");
    MixedForm exponent = zero_like(rho_);
    if (hints_->B.chart()) exponent = exponent + hints_->B;
    if (hints_->omega.chart()) exponent = exponent + Expr::imaginary_unit() * hints_->omega;
    const MixedForm rebuilt = wedge(exp_form(exponent), hints_->Omega);
    const Agreement match = forms_agree(rho_, rebuilt, opts, hints_->region);
    if (!match.agree) throw Error("decomposition hints of '" + name_ + "' do not reproduce rho: " + match.detail);
  }
}

SpinorStructure SpinorStructure::with_certificate(GeneralizedSection c) const {
  SpinorStructure out = *this;
  out.certificate_ = std::move(c);
  return out;
}

SpinorStructure SpinorStructure::renamed(std::string name) const {
  SpinorStructure out = *this;
  out.name_ = std::move(name);
  return out;
}

int type_at(const MixedForm& rho, const Point& p, double tolerance) {
  if (auto bad = rho.domain().violated(p)) throw DomainError("point outside the spinor domain: " + bad->str());
  int best = std::numeric_limits<int>::max();
  for (const auto& [mask, c] : rho.terms()) {
    const int k = degree_of(mask);
    if (k >= best) continue;
    if (!vanishes_at(c, p, tolerance)) best = k;
  }
  if (best == std::numeric_limits<int>::max()) throw Error("spinor vanishes at " + point_str(p));
  return best;
}

bool check_nondegenerate(const SpinorStructure& s, const Point& p, double tolerance) {
  const Chart& chart = *s.chart();
  if (chart.dim() % 2 != 0) throw Error("nondegeneracy needs an even-dimensional chart");
  const int m = chart.dim() / 2;
  const Mask top = chart.dim() == 32 ? ~Mask{0} : (Mask{1} << chart.dim()) - 1;
  MixedForm volume;
  if (s.hints() && s.hints()->region.contains(p)) {
    const DecompositionHints& h = *s.hints();
    if (h.Omega.is_zero()) throw Error("decomposition of '" + s.name() + "' has Omega = 0");
    const int k = h.Omega.min_degree();
    if (k > m) return false;
    const MixedForm omega = h.omega.chart() ? h.omega : zero_like(s.rho());
    volume = wedge(wedge(h.Omega, conj(h.Omega)), wedge_power(omega, m - k));
  } else {
    const int k = type_at(s.rho(), p, tolerance);
    if (k != 0) {
      throw Error("no decomposition available at " + point_str(p) + ": type " + std::to_string(k) +
                  " and no hints cover the point");
    }
    // at type 0, ρ = ρ₀ e^{B+iω} with B + iω = ρ₂/ρ₀
    const Expr rho0 = s.rho().coefficient(0);
    const MixedForm omega = imag_part(Expr(1) / rho0 * s.rho().part(2));
    volume = wedge_power(omega, m);
  }
  return !vanishes_at(volume.coefficient(top), p, tolerance);
}

// ---------------------------------------------------------------------------
// Integrability

namespace {

class Solver {
 public:
  Solver(const MixedForm& rho, const MixedForm& target, const CheckOptions& opts)
      : rho_(rho), target_(target), opts_(opts), n_(rho.chart()->dim()) {}

  IntegrabilityResult run() {
    IntegrabilityResult out;
    const ChartPtr& chart = rho_.chart();
    if (target_.is_zero()) {
      out.integrable = true;
      out.certificate = GeneralizedSection::zero(chart);
      out.detail = "d_H rho = 0, zero certificate";
      return out;
    }
    build();
    pick_points();
    eliminate();
    out.rank = static_cast<int>(pivots_.size());
    for (const auto& row : rows_) {
      if (row.used) continue;
      auto it = row.entries.find(rhs());
      if (it != row.entries.end() && nonzero(it->second)) {
        out.detail = "not integrable (at sampled genericity): inconsistent equation in " +
                     rho_.monomial_str(row.mask) + " at rank " + std::to_string(out.rank);
        return out;
      }
    }
    GeneralizedSection cert = GeneralizedSection::zero(chart);
    const std::vector<Expr> u = back_substitute();
    for (int s = 0; s < n_; ++s) {
      if (!u[static_cast<std::size_t>(s)].is_zero()) cert.vector.accumulate(s, u[static_cast<std::size_t>(s)]);
      const Expr& c = u[static_cast<std::size_t>(n_ + s)];
      if (!c.is_zero()) cert.covector = cert.covector + c * MixedForm::differential(chart, s);
    }
    out.verification = forms_agree(target_, clifford(cert, rho_), opts_);
    out.integrable = out.verification.agree;
    out.detail = out.integrable ? "certificate solved at rank " + std::to_string(out.rank)
                                : "solved certificate failed re-verification: " + out.verification.detail;
    if (out.integrable) out.certificate = std::move(cert);
    return out;
  }

 private:
  struct Row {
    Mask mask = 0;
    std::map<int, Expr> entries;
    bool used = false;
  };

  int rhs() const { return 2 * n_; }

  void build() {
    const ChartPtr& chart = rho_.chart();
    std::map<Mask, std::map<int, Expr>> rows;
    for (int s = 0; s < n_; ++s) {
      VectorField v(chart);
      v.accumulate(s, Expr(1));
      const MixedForm contracted = interior(v, rho_);
      const MixedForm wedged = wedge(MixedForm::differential(chart, s), rho_);
      for (const auto& [m, c] : contracted.terms()) rows[m][s] = c;
      for (const auto& [m, c] : wedged.terms()) rows[m][n_ + s] = c;
    }
    for (const auto& [m, c] : target_.terms()) rows[m][rhs()] = c;
    for (auto& [m, e] : rows) rows_.push_back({m, std::move(e), false});
  }

  // Two generic points at which every entry evaluates.
  void pick_points() {
    const Region where = rho_.domain().intersect(target_.domain());
    PointSampler sampler(*rho_.chart(), where, opts_.seed ^ 0x5bd1e995u);
    sampler.set_budget(2000);
    while (points_.size() < 2) {
      Point p = sampler.next();
      try {
        for (const Row& r : rows_) {
          for (const auto& [c, e] : r.entries) (void)value(e, p);
        }
      } catch (const DomainError&) {
        continue;
      }
      points_.push_back(std::move(p));
    }
  }

  static std::complex<double> value(const Expr& e, const Point& p) {
    if (auto x = eval_exact(e, p)) return x->to_complex();
    return eval_numeric(e, p);
  }

  bool nonzero_at(const Expr& e, const Point& p) const {
    try {
      return !vanishes_at(e, p, opts_.tolerance);
    } catch (const DomainError&) {
      return true;
    }
  }

  bool nonzero(const Expr& e) const {
    if (e.is_zero()) return false;
    return nonzero_at(e, points_[0]) || nonzero_at(e, points_[1]);
  }

  void eliminate() {
    while (true) {
      std::size_t best_row = rows_.size();
      int best_col = -1;
      std::pair<int, std::size_t> best_score{2, 0};
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].used) continue;
        for (const auto& [c, e] : rows_[r].entries) {
          if (c == rhs() || !nonzero_at(e, points_[0])) continue;
          const std::pair<int, std::size_t> score{e.is_constant() ? 0 : 1, e.str().size()};
          if (best_col < 0 || score < best_score) {
            best_row = r;
            best_col = c;
            best_score = score;
          }
        }
      }
      if (best_col < 0) return;
      Row& prow = rows_[best_row];
      prow.used = true;
      pivots_.push_back({best_row, best_col});
      const Expr piv = prow.entries.at(best_col);
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].used) continue;
        auto it = rows_[r].entries.find(best_col);
        if (it == rows_[r].entries.end()) continue;
        const Expr factor = it->second / piv;
        rows_[r].entries.erase(it);
        for (const auto& [c, e] : prow.entries) {
          if (c == best_col) continue;
          Expr updated = rows_[r].entries.count(c) ? rows_[r].entries.at(c) - factor * e : -(factor * e);
          updated = try_expand(updated);
          if (nonzero(updated)) {
            rows_[r].entries[c] = updated;
          } else {
            rows_[r].entries.erase(c);
          }
        }
      }
    }
  }

  std::vector<Expr> back_substitute() const {
    std::vector<Expr> u(static_cast<std::size_t>(2 * n_), Expr(0));
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      const Row& row = rows_[it->first];
      Expr acc = row.entries.count(rhs()) ? row.entries.at(rhs()) : Expr(0);
      for (const auto& [c, e] : row.entries) {
        if (c == rhs() || c == it->second) continue;
        acc = acc - e * u[static_cast<std::size_t>(c)];
      }
      u[static_cast<std::size_t>(it->second)] = try_expand(acc / row.entries.at(it->second));
    }
    return u;
  }

  const MixedForm& rho_;
  const MixedForm& target_;
  CheckOptions opts_;
  int n_;
  std::vector<Row> rows_;
  std::vector<std::pair<std::size_t, int>> pivots_;
  std::vector<Point> points_;
};

}  // namespace

IntegrabilityResult check_integrable(const SpinorStructure& s, const CheckOptions& opts) {
  const MixedForm target = twisted_d(s.rho(), s.h());
  if (s.certificate()) {
    IntegrabilityResult out;
    out.from_stored = true;
    out.certificate = s.certificate();
    out.verification = forms_agree(target, clifford(*s.certificate(), s.rho()), opts);
    out.integrable = out.verification.agree;
    out.detail = out.integrable ? "stored certificate verified" : "stored certificate fails: " + out.verification.detail;
    return out;
  }
  try {
    return Solver(s.rho(), target, opts).run();
  } catch (const ExpansionLimit& e) {
    IntegrabilityResult out;
    out.detail = std::string("solver gave up: ") + e.what();
    return out;
  }
}

// ---------------------------------------------------------------------------
// Stability

namespace {

struct ZeroSolution {
  std::string coordinate;
  std::string conjugate;
  Expr value;  // z as a function of the other coordinates
};

std::optional<ZeroSolution> affine_zero(const Expr& s0, const Chart& chart) {
  std::vector<Expr> factors;
  if (s0.kind() == ExprKind::mul) {
    factors.assign(s0.args().begin(), s0.args().end());
  } else {
    factors.push_back(s0);
  }
  for (Expr f : factors) {
    if (f.kind() == ExprKind::power && f.exponent() > 0) f = f.arg(0);
    for (const Coordinate& c : chart.coordinates()) {
      if (c.kind != CoordKind::complex) continue;
      const std::string z = c.name;
      const std::string zb = chart.partners().at(z);
      if (!f.depends_on(z) || f.depends_on(zb)) continue;
      const Expr fz = try_expand(diff(f, z));
      if (!try_expand(diff(fz, z)).is_zero()) continue;
      const Expr rest = substitute(f, {{z, Expr(0)}});
      return ZeroSolution{z, zb, try_expand(-rest / fz)};
    }
  }
  return std::nullopt;
}

Gaussian exact_or_rounded(const Expr& e, const Point& p) {
  if (auto x = eval_exact(e, p)) return *x;
  const std::complex<double> v = eval_numeric(e, p);
  return {to_rational(v.real(), 40), to_rational(v.imag(), 40)};
}

struct Value {
  std::optional<Gaussian> exact;
  std::complex<double> approx;
};

Value evaluate(const Expr& e, const Point& p) {
  Value v;
  v.exact = eval_exact(e, p);
  v.approx = v.exact ? v.exact->to_complex() : eval_numeric(e, p);
  return v;
}

// Real differential of s0 at p has rank 2 iff two of its complex columns are
// R-linearly independent.
bool rank_two(const Expr& s0, const Chart& chart, const Point& p, double tolerance) {
  std::vector<Value> cols;
  for (const Coordinate& c : chart.coordinates()) {
    if (c.kind == CoordKind::complex) {
      const Value a = evaluate(diff(s0, c.name), p);
      const Value b = evaluate(diff(s0, chart.partners().at(c.name)), p);
      Value x, y;
      if (a.exact && b.exact) {
        x.exact = *a.exact + *b.exact;
        y.exact = Gaussian::i() * (*a.exact - *b.exact);
      }
      x.approx = a.approx + b.approx;
      y.approx = std::complex<double>(0, 1) * (a.approx - b.approx);
      cols.push_back(x);
      cols.push_back(y);
    } else {
      cols.push_back(evaluate(diff(s0, c.name), p));
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      if (cols[i].exact && cols[j].exact) {
        if (sgn((cols[i].exact->conj() * *cols[j].exact).im()) != 0) return true;
        continue;
      }
      const double cross = (std::conj(cols[i].approx) * cols[j].approx).imag();
      const double scale = std::max(1.0, std::abs(cols[i].approx) * std::abs(cols[j].approx));
      if (std::abs(cross) > tolerance * scale) return true;
    }
  }
  return false;
}

}  // namespace

StabilityResult check_stable(const SpinorStructure& s, const CheckOptions& opts, const std::vector<Point>& witnesses) {
  StabilityResult out;
  const Chart& chart = *s.chart();
  out.s0 = s.rho().coefficient(0);
  if (try_expand(out.s0).is_zero()) {
    out.detail = "degree-0 part vanishes identically";
    out.locus = "everywhere";
    return out;
  }
  if (out.s0.is_constant()) {
    out.stable = true;
    out.locus = "empty";
    out.detail = "s0 is a nonzero constant";
    return out;
  }
  out.locus = "{" + out.s0.str() + " = 0}";

  std::vector<Point> zeros;
  for (const Point& w : witnesses) {
    if (!vanishes_at(out.s0, w, opts.tolerance)) throw Error("witness " + point_str(w) + " is not a zero of s0");
    zeros.push_back(w);
  }
  const auto solution = affine_zero(out.s0, chart);
  if (!solution && zeros.empty()) {
    throw Error("cannot sample the zero set of s0 = " + out.s0.str() + ": no affine factor, supply witness points");
  }
  if (solution) {
    const int wanted = std::clamp(opts.samples, 1, 16);
    PointSampler sampler(chart, Region{}, opts.seed ^ 0x2545f491u);
    const long budget = 50L * wanted + 200;
    sampler.set_budget(budget);
    int found = 0;
    for (long attempt = 0; attempt < budget && found < wanted; ++attempt) {
      Point p = sampler.next();
      try {
        const Gaussian z = exact_or_rounded(solution->value, p);
        p[solution->coordinate] = z;
        p[solution->conjugate] = z.conj();
        if (!s.rho().domain().contains(p)) continue;
        if (!vanishes_at(out.s0, p, opts.tolerance)) continue;
      } catch (const DomainError&) {
        continue;
      }
      zeros.push_back(std::move(p));
      ++found;
    }
    if (found == 0) throw SamplingError("cannot sample the zero set of s0 = " + out.s0.str() + " within budget");
  }
  for (const Point& p : zeros) {
    ++out.points_checked;
    if (!rank_two(out.s0, chart, p, opts.tolerance)) {
      out.detail = "differential of s0 has rank < 2 at " + point_str(p);
      return out;
    }
  }
  out.stable = true;
  out.detail = "transverse at " + std::to_string(out.points_checked) + " zero(s)";
  return out;
}

// ---------------------------------------------------------------------------

SpinorStructure b_field_transform(const SpinorStructure& s, const MixedForm& b, const CheckOptions& opts) {
  require_same_chart(s.rho(), b, "b_field_transform");
  if (!b.is_zero() && (b.min_degree() != 2 || b.max_degree() != 2)) throw DegreeError("B-field must be a 2-form");
  const Agreement real = forms_agree(conj(b), b, opts);
  if (!real.agree) throw Error("B-field is not real: " + real.detail);
  std::optional<GeneralizedSection> cert;
  if (s.certificate()) {
    cert = *s.certificate();
    if (!cert->covector.chart()) cert->covector = MixedForm(s.chart());
    if (!cert->vector.chart()) cert->vector = VectorField(s.chart());
    cert->covector = cert->covector - interior(cert->vector, b);
  }
  std::optional<DecompositionHints> hints = s.hints();
  if (hints) hints->B = hints->B.chart() ? hints->B + b : b;
  return SpinorStructure(s.name(), wedge(exp_form(b), s.rho()), s.h() - d(b), std::move(cert), std::move(hints), opts);
}

}  // namespace gcx
