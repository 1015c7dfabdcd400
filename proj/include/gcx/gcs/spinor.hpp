#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcx/exterior/equality.hpp"
#include "gcx/exterior/form.hpp"

namespace gcx {

/// Witness for the local form ρ = e^{B+iω} ∧ Ω on `region`.
struct DecompositionHints {
  MixedForm B;
  MixedForm omega;
  MixedForm Omega;
  Region region;
};

/// Candidate generalized complex structure: pure spinor ρ twisted by H.
class SpinorStructure {
 public:
  /// Throws Error when H is not closed, DegreeError when H is neither zero nor
  /// a 3-form, and Error when the hints do not reproduce ρ.
  SpinorStructure(std::string name, MixedForm rho, MixedForm h = {},
                  std::optional<GeneralizedSection> certificate = std::nullopt,
                  std::optional<DecompositionHints> hints = std::nullopt, const CheckOptions& opts = {});

  const std::string& name() const { return name_; }
  const ChartPtr& chart() const { return rho_.chart(); }
  const MixedForm& rho() const { return rho_; }
  const MixedForm& h() const { return h_; }
  const std::optional<GeneralizedSection>& certificate() const { return certificate_; }
  const std::optional<DecompositionHints>& hints() const { return hints_; }

  SpinorStructure with_certificate(GeneralizedSection c) const;
  SpinorStructure renamed(std::string name) const;

 private:
  SpinorStructure() = default;
  std::string name_;
  MixedForm rho_;
  MixedForm h_;
  std::optional<GeneralizedSection> certificate_;
  std::optional<DecompositionHints> hints_;
};

/// d_H ρ = dρ + H ∧ ρ.
MixedForm twisted_d(const MixedForm& rho, const MixedForm& h);

/// Lowest degree with a coefficient that is nonzero at p. Throws DomainError
/// outside ρ's domain and Error when ρ vanishes at p.
int type_at(const MixedForm& rho, const Point& p, double tolerance = 1e-9);

/// Ω ∧ Ω̄ ∧ ω^{m−k} ≠ 0 at p. Uses the hints when they cover p; without hints
/// only type-0 points are decided, with ω = Im(ρ₂/ρ₀).
bool check_nondegenerate(const SpinorStructure& s, const Point& p, double tolerance = 1e-9);

struct IntegrabilityResult {
  bool integrable = false;
  std::optional<GeneralizedSection> certificate;
  bool from_stored = false;
  int rank = 0;
  Agreement verification;
  std::string detail;
};

/// Verifies the stored certificate, or solves d_H ρ = (X+ξ)·ρ for X+ξ.
IntegrabilityResult check_integrable(const SpinorStructure& s, const CheckOptions& opts = {});

struct StabilityResult {
  bool stable = false;
  Expr s0;
  /// "{<s0> = 0}", or "empty" when s0 never vanishes.
  std::string locus;
  int points_checked = 0;
  std::string detail;
};

/// Transversality of the degree-0 part s₀ along its zero set: the real
/// differential of s₀ must have rank 2 at every checked zero. Zeros come from
/// solving a factor affine in one complex coordinate, or from `witnesses`.
StabilityResult check_stable(const SpinorStructure& s, const CheckOptions& opts = {},
                             const std::vector<Point>& witnesses = {});

/// ρ ↦ e^B ∧ ρ, H ↦ H − dB, ξ ↦ ξ − ι_X B. B must be a real 2-form.
SpinorStructure b_field_transform(const SpinorStructure& s, const MixedForm& b, const CheckOptions& opts = {});

}  // namespace gcx
