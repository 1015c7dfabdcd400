#include "gcx/exterior/equality.hpp"

#include <cmath>

namespace gcx {

bool values_match(const Expr& a, const Expr& b, const Point& p, double tolerance) {
  auto ea = eval_exact(a, p);
  auto eb = eval_exact(b, p);
  if (ea && eb) return *ea == *eb;
  const std::complex<double> va = ea ? ea->to_complex() : eval_numeric(a, p);
  const std::complex<double> vb = eb ? eb->to_complex() : eval_numeric(b, p);
  if (!std::isfinite(std::abs(va)) || !std::isfinite(std::abs(vb))) throw DomainError("non-finite value");
  const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
  return std::abs(va - vb) <= tolerance * scale;
}

bool vanishes_at(const Expr& e, const Point& p, double tolerance) { return values_match(e, Expr(0), p, tolerance); }

namespace {

struct Pending {
  Mask mask;
  Expr lhs;
  Expr rhs;
};

// Draws points until `count` of them evaluate every pending pair without a
// singularity; points that hit a pole or log(0) are discarded.
std::vector<Point> admissible_points(const Chart& chart, const Region& region, const std::vector<Pending>& pending,
                                     const CheckOptions& opts) {
  PointSampler sampler(chart, region, opts.seed);
  sampler.set_budget(50L * std::max(opts.samples, 1) + 200);
  std::vector<Point> points;
  while (static_cast<int>(points.size()) < opts.samples) {
    Point p = sampler.next();
    try {
      for (const Pending& q : pending) {
        (void)values_match(q.lhs, q.rhs, p, opts.tolerance);
      }
    } catch (const DomainError&) {
      continue;
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b, const Chart& chart, const Region& region, const CheckOptions& opts) {
  if (try_expand(a - b).is_zero()) return true;
  std::vector<Pending> pending{{0, a, b}};
  for (const Point& p : admissible_points(chart, region, pending, opts)) {
    if (!values_match(a, b, p, opts.tolerance)) return false;
  }
  return true;
}

Agreement forms_agree(const MixedForm& a, const MixedForm& b, const CheckOptions& opts, const Region& region) {
  require_same_chart(a, b, "forms_agree");
  Agreement out;
  std::vector<Pending> pending;
  std::map<Mask, bool> masks;
  for (const auto& [m, c] : a.terms()) masks[m] = true;
  for (const auto& [m, c] : b.terms()) masks[m] = true;
  for (const auto& [m, unused] : masks) {
    Expr ca = a.coefficient(m);
    Expr cb = b.coefficient(m);
    if (try_expand(ca - cb).is_zero()) continue;
    pending.push_back({m, ca, cb});
  }
  if (pending.empty()) return out;
  out.structural = false;
  const Region where = a.domain().intersect(b.domain()).intersect(region);
  const std::vector<Point> points = admissible_points(*a.chart(), where, pending, opts);
  out.samples_used = static_cast<int>(points.size());
  for (const Pending& q : pending) {
    for (const Point& p : points) {
      if (values_match(q.lhs, q.rhs, p, opts.tolerance)) continue;
      out.agree = false;
      out.first_difference = q.mask;
      std::string at;
      for (const auto& [k, v] : p) at += (at.empty() ? "" : ", ") + k + "=" + v.str();
      out.detail = "coefficient of " + a.monomial_str(q.mask) + " differs: " + q.lhs.str() + " vs " + q.rhs.str() +
                   " at {" + at + "}";
      return out;
    }
  }
  return out;
}

}  // namespace gcx
