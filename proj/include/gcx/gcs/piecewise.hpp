#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcx/exterior/map.hpp"
#include "gcx/gcs/spinor.hpp"

namespace gcx {

struct Piece {
  std::string name;
  SpinorStructure spinor;
  Region region;
  std::vector<Point> witnesses;  // zeros of s₀ when they cannot be solved for
};

/// Two pieces compared on a common chart through maps into each.
struct Overlap {
  std::string first;
  std::string second;
  CoordinateMap to_first;
  CoordinateMap to_second;
  Region region;
  bool required = true;
};

struct OverlapResult {
  std::string first;
  std::string second;
  bool required = true;
  bool spinors_agree = false;
  bool h_agree = false;
  std::optional<Mask> first_difference;
  std::string difference_monomial;
  std::string detail;
};

struct PieceResult {
  std::string name;
  IntegrabilityResult integrable;
  StabilityResult stable;
};

struct PiecewiseResult {
  bool ok = false;
  std::vector<PieceResult> pieces;
  std::vector<OverlapResult> overlaps;
  /// Type change loci of the pieces, "empty" ones omitted.
  std::vector<std::string> loci;
  std::string detail;
};

/// Pure spinors generate a line: a ~ b iff b₀·a = a₀·b, with a₀, b₀ the
/// degree-0 parts (plain equality when either vanishes identically).
Agreement agree_up_to_scale(const MixedForm& a, const MixedForm& b, const CheckOptions& opts = {},
                            const Region& region = {});

/// Checks every piece (integrability and stability on its region) and every
/// overlap (spinors up to scale, twisting forms exactly).
PiecewiseResult assemble_piecewise(const std::vector<Piece>& pieces, const std::vector<Overlap>& overlaps,
                                   const CheckOptions& opts = {});

}  // namespace gcx
