#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gcx/topology/group.hpp"

namespace gcx {

enum class Spin { spin, non_spin, unknown };
std::string spin_name(Spin s);

/// One factor of a component's homotopy-type label.
struct LabelFactor {
  enum class Kind { torus, surface, sphere, point, generic };
  Kind kind = Kind::point;
  int genus = 0;          // surface only
  std::string name;       // generic only
  long generic_b1 = 0;    // generic only

  static LabelFactor torus() { return {Kind::torus, 1, "", 0}; }
  static LabelFactor surface(int g) { return {Kind::surface, g, "", 0}; }
  static LabelFactor sphere() { return {Kind::sphere, 0, "", 0}; }
  static LabelFactor point() { return {Kind::point, 0, "", 0}; }
  static LabelFactor generic(std::string name, long b1) { return {Kind::generic, 0, std::move(name), b1}; }

  long b1() const;
  std::string str(bool ascii = false) const;
  friend bool operator==(const LabelFactor&, const LabelFactor&) = default;
};

/// Parses "T2", "S2", "pt", "Sigma_2" / "Sigma2", or "Name(b1=3)".
LabelFactor parse_label_factor(const std::string& text);

struct TypeChangeComponent {
  std::vector<LabelFactor> factors;
  std::string origin = "original";

  long b1() const;
  /// Factors joined by "×" ("x" in ASCII); points are dropped unless the
  /// label is a bare point.
  std::string label(bool ascii = false) const;
};

struct H2Data {
  long b2 = 0;
  std::vector<long> torsion;
};

/// Images of the boundary loops of the removed neighborhood in π₁ of its
/// complement: the meridian ∂D² and the two torus circles.
struct GluingData {
  GroupPresentation complement;
  Word meridian;
  Word l1;
  Word l2;
};

enum class LocusKind { luttinger, gluck, branch };
std::string locus_kind_name(LocusKind k);

struct SurgeryLocus {
  LocusKind kind = LocusKind::luttinger;
  std::string name;
  /// Σ for Luttinger, R for Gluck, the branch submanifold itself for branch loci.
  std::vector<LabelFactor> sigma;
  bool neighborhood_trivial = false;
  bool j_symplectic = false;
  std::optional<GluingData> gluing;
  long euler = 0;  // χ of the locus, used by branched covers
};

struct ManifoldDescriptor {
  std::string name;
  int dim = 0;
  long euler = 0;
  std::optional<long> signature;
  Spin spin = Spin::unknown;
  std::optional<GroupPresentation> pi1;
  std::optional<H2Data> h2;
  std::vector<TypeChangeComponent> components;
  std::vector<SurgeryLocus> loci;
  std::vector<std::string> notes;

  /// Throws TopologyError on a broken invariant.
  void validate() const;
  const SurgeryLocus& locus(const std::string& name) const;
};

struct SurgeryParams {
  long p = 0, q = 0, a = 0, b = 0;
};

struct ParamCheck {
  bool ok = false;
  long determinant = 0;
  std::string violation;
  std::array<std::array<long, 3>, 3> matrix{};
};

/// |pb − aq| = 1 and f(t) = pbt − aq nonzero on [0, 1].
ParamCheck validate_surgery_params(const SurgeryParams& s);

/// π₁ after regluing: (complement ∗ ⟨t1, t2 | [t1, t2]⟩) modulo the images of
/// the new meridian and torus circles.
GroupPresentation glue_fundamental_group(const GluingData& g, const SurgeryParams& s);

ManifoldDescriptor apply_luttinger(const ManifoldDescriptor& m, const std::string& locus, const SurgeryParams& s);
ManifoldDescriptor apply_gluck(const ManifoldDescriptor& m, const std::string& locus, const SurgeryParams& s);

/// d-fold unbranched cover; π₁ becomes unknown unless a subgroup presentation is supplied.
ManifoldDescriptor apply_cover(const ManifoldDescriptor& m, long d,
                               const std::optional<GroupPresentation>& pi1_witness = std::nullopt);

struct BranchComponent {
  std::string locus;          // name of a branch locus in the descriptor
  std::vector<long> indices;  // branching indices t_i ≥ 2 of the points above it
};

struct BranchingData {
  long degree = 1;
  std::vector<BranchComponent> components;
};

ManifoldDescriptor apply_branched_cover(const ManifoldDescriptor& m, const BranchingData& data);

}  // namespace gcx
