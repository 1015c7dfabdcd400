#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "gcx/exterior/chart.hpp"
#include "gcx/exterior/expr.hpp"

namespace gcx {

/// Bit i set = slot i of the chart appears in the wedge monomial.
using Mask = std::uint32_t;

inline int degree_of(Mask m) { return std::popcount(m); }

/// Mixed-degree differential form on one chart: sorted monomial -> coefficient.
/// Coefficients are kept expanded; identically zero terms are dropped.
class MixedForm {
 public:
  MixedForm() = default;
  explicit MixedForm(ChartPtr chart, Region domain = {});

  static MixedForm scalar(ChartPtr chart, const Expr& f, Region domain = {});
  static MixedForm differential(ChartPtr chart, int slot);
  static MixedForm monomial(ChartPtr chart, Mask mask, const Expr& coefficient);

  const ChartPtr& chart() const { return chart_; }
  const std::map<Mask, Expr>& terms() const { return terms_; }
  const Region& domain() const { return domain_; }

  Expr coefficient(Mask m) const;
  /// Adds c to the coefficient of m (expanded; removed when it cancels).
  void accumulate(Mask m, const Expr& c);

  bool is_zero() const { return terms_.empty(); }
  /// Homogeneous component of degree k.
  MixedForm part(int k) const;
  /// -1 for the zero form.
  int max_degree() const;
  int min_degree() const;
  bool homogeneous() const;

  MixedForm with_domain(Region r) const;

  std::string monomial_str(Mask m) const;
  std::string str() const;

 private:
  ChartPtr chart_;
  std::map<Mask, Expr> terms_;
  Region domain_;
};

void require_same_chart(const MixedForm& a, const MixedForm& b, const char* op);

MixedForm operator+(const MixedForm& a, const MixedForm& b);
MixedForm operator-(const MixedForm& a, const MixedForm& b);
MixedForm operator-(const MixedForm& a);
MixedForm operator*(const Expr& f, const MixedForm& a);

/// Sign (+1/-1) of dx^a ∧ dx^b relative to the sorted monomial, 0 if they overlap.
int wedge_sign(Mask a, Mask b);

MixedForm wedge(const MixedForm& a, const MixedForm& b);
MixedForm d(const MixedForm& a);
MixedForm exp_form(const MixedForm& b);
/// Complex conjugate: coefficients conjugated, dz <-> dz̄.
MixedForm conj(const MixedForm& a);
MixedForm real_part(const MixedForm& a);
MixedForm imag_part(const MixedForm& a);
/// Applies f to every coefficient.
MixedForm map_coefficients(const MixedForm& a, const std::function<Expr(const Expr&)>& f);

/// Vector field in the chart's slot basis (∂/∂z, ∂/∂z̄ for complex pairs).
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(ChartPtr chart) : chart_(std::move(chart)) {}

  const ChartPtr& chart() const { return chart_; }
  const std::map<int, Expr>& components() const { return components_; }
  Expr component(int slot) const;
  void accumulate(int slot, const Expr& c);
  bool is_zero() const { return components_.empty(); }
  std::string str() const;

 private:
  ChartPtr chart_;
  std::map<int, Expr> components_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& v);
VectorField lie_bracket(const VectorField& x, const VectorField& y);
/// Directional derivative X(f).
Expr apply_vector(const VectorField& x, const Expr& f);

MixedForm interior(const VectorField& x, const MixedForm& a);
MixedForm lie_derivative(const VectorField& x, const MixedForm& a);
/// ξ(X) for the degree-1 part of ξ.
Expr evaluate_one_form(const MixedForm& xi, const VectorField& x);

/// X + ξ in TM ⊕ T*M.
struct GeneralizedSection {
  VectorField vector;
  MixedForm covector;

  static GeneralizedSection zero(const ChartPtr& chart);
  const ChartPtr& chart() const { return vector.chart(); }
  bool is_zero() const { return vector.is_zero() && covector.is_zero(); }
  std::string str() const;
};

GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b);

/// (X+ξ)·ρ = ι_X ρ + ξ∧ρ.
MixedForm clifford(const GeneralizedSection& s, const MixedForm& rho);
/// ½(η(X) + ξ(Y)).
Expr pairing(const GeneralizedSection& a, const GeneralizedSection& b);
/// H-twisted Courant bracket; H must be zero or of pure degree 3.
GeneralizedSection courant_bracket(const GeneralizedSection& a, const GeneralizedSection& b, const MixedForm& h);

}  // namespace gcx
