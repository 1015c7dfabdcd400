#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gcx/exterior/chart.hpp"
#include "gcx/exterior/form.hpp"

namespace gcx {

struct CheckOptions {
  int samples = 32;
  std::uint64_t seed = 0;
  /// Relative tolerance, used only when a value has no exact evaluation.
  double tolerance = 1e-9;
};

/// Compares two values at a point: exactly when both evaluate in Gaussian
/// rationals, otherwise in floating point with relative tolerance.
bool values_match(const Expr& a, const Expr& b, const Point& p, double tolerance);

/// Whether e is zero at p (same exact-then-numeric rule).
bool vanishes_at(const Expr& e, const Point& p, double tolerance);

struct Agreement {
  bool agree = true;
  /// Decided by expansion alone, no sampling needed.
  bool structural = true;
  int samples_used = 0;
  std::optional<Mask> first_difference;
  std::string detail;
};

/// a == b on region: structural zero of a - b, else agreement at sampled points.
bool expr_equal(const Expr& a, const Expr& b, const Chart& chart, const Region& region, const CheckOptions& opts = {});

/// Coefficient-by-coefficient agreement of two forms on the intersection of
/// their domains with `region`. Reports the first (lowest mask) disagreement.
Agreement forms_agree(const MixedForm& a, const MixedForm& b, const CheckOptions& opts = {},
                      const Region& region = {});

}  // namespace gcx
