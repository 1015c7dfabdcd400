#pragma once

#include <optional>
#include <vector>

#include "gcx/exterior/map.hpp"
#include "gcx/gcs/piecewise.hpp"
#include "gcx/gcs/spinor.hpp"
#include "gcx/topology/manifold.hpp"

namespace gcx {

/// ξ for the model: 0 below 1/10, 1 above 3/10.
BumpPtr default_radial_bump();

/// Exponent of the extension spinor on a chart with complex z1, z2 (and z3
/// for the Gluck variant):
///   −(p/4) ξ(·) dz1∧dz̄1/|z1|² − (b/2) dz2∧dz̄2 + dz1/(2z1)∧[(a/2−q)dz2 − (a/2+q)dz̄2]
/// with ξ evaluated at |z1| (Luttinger) or |z1|² (Gluck, which also adds the
/// sphere term −2/(1+|z3|²)² dz2∧(z̄3 dz3 + z3 dz̄3)).
MixedForm surgery_exponent(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi, bool gluck);

/// X + ξ with d(z1 e^C) = (X+ξ)·(z1 e^C): X is constant along ∂z̄2 (or ∂z2
/// when a/2 + q = 0) and ξ = dz1/z1 − ι_X C, which is smooth.
GeneralizedSection surgery_certificate(const ChartPtr& chart, const SurgeryParams& s, const MixedForm& exponent);

/// z1 e^C ∧ e^{iω_Σ}. Throws TopologyError on invalid parameters and Error
/// when ω_Σ is not closed. ω_Σ may be the zero form (Σ a point).
SpinorStructure build_luttinger_spinor(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi,
                                       const MixedForm& sigma_form, const CheckOptions& opts = {});

/// z1 e^C ∧ e^{iω_R} with the Gluck exponent; chart carries z1, z2, z3.
SpinorStructure build_gluck_spinor(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi,
                                   const MixedForm& r_form, const CheckOptions& opts = {});

/// Explicit local model of the surgery with Σ a point.
///   lut:    z1, z2 complex
///   polar:  r (radial), th0, th1, th2 (angles)
///   target: R (radial), Th0, Th1, Th2 (angles)
/// φ(r, θ) = (√(log(2r)), pθ0 + aθ2, θ1, qθ0 + bθ2), Ψ(r, θ) = (r e^{iθ0}, θ1 + iθ2).
struct LuttingerModel {
  SurgeryParams params;
  BumpPtr xi;
  ChartPtr lut;
  ChartPtr polar;
  ChartPtr target;
  CoordinateMap phi;      // polar -> target, defined for r > 1/2
  CoordinateMap psi;      // polar -> lut
  CoordinateMap psi_inv;  // lut -> polar, defined for z1 != 0
  MixedForm exponent;     // C on lut
  MixedForm omega_tilde;  // R dR∧dTh0 + dTh1∧dTh2 on target
  MixedForm b_witness;    // −q dlog r∧dth1 − (a/2) dth0∧dth2 on polar
  Region annulus;         // polar, 1/2 < r < 1: ξ ≡ 1 and φ defined
  Region collar;          // polar, 4/5 < r < 1
  SpinorStructure rho0;   // lut
};

LuttingerModel make_luttinger_model(const SurgeryParams& s, const BumpPtr& xi = default_radial_bump(),
                                    const CheckOptions& opts = {});

/// Ψ*ρ₀ against r e^{iθ0} e^{B} ∧ e^{iφ*ω̃} on the annulus.
Agreement check_extension_lemma(const LuttingerModel& m, const CheckOptions& opts = {});

/// Pieces and overlap of the glued structure: ρ_J = e^{B_J + iω̃} outside,
/// e^{−η B₀ + φ*B_J} ρ₀ inside, compared on the collar. With
/// `cutoff = false` the inside uses e^{φ*B_J} ρ₀, which cannot agree.
/// B_J = β dTh1∧(q dTh0 − p dTh2); η is 0 below 3/5 and 1 above 4/5.
struct GluedModel {
  std::vector<Piece> pieces;
  std::vector<Overlap> overlaps;
};

GluedModel glue_luttinger_model(const LuttingerModel& m, bool cutoff = true, const Rational& beta = 1,
                                const CheckOptions& opts = {});

}  // namespace gcx
