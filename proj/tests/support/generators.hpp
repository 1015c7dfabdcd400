#pragma once

// Random exterior-calculus inputs shared by the unit property tests and the
// acceptance gate.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gcx/exterior/equality.hpp"
#include "gcx/exterior/form.hpp"
#include "gcx/exterior/map.hpp"

namespace gcx::testing {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  Rational rational() { return Rational(integer(-4, 4), integer(1, 3)); }

  /// Polynomial of low degree in the chart's slot symbols, sometimes with a
  /// transcendental factor.
  Expr scalar(const Chart& chart, int terms = 3, bool transcendental = true) {
    std::vector<Expr> out;
    for (int t = 0; t < terms; ++t) {
      Expr m(rational());
      const int factors = static_cast<int>(integer(0, 2));
      for (int f = 0; f < factors; ++f) m = m * chart.symbol(static_cast<int>(integer(0, chart.dim() - 1)));
      out.push_back(m);
    }
    if (transcendental && coin(0.3)) {
      Expr s = chart.symbol(static_cast<int>(integer(0, chart.dim() - 1)));
      out.push_back(coin() ? sin(s) : exp(Expr(rational()) * s));
    }
    return Expr::sum(out);
  }

  Mask mask_of_degree(const Chart& chart, int k) {
    std::vector<int> idx(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng_);
    Mask m = 0;
    for (int i = 0; i < k; ++i) m |= Mask{1} << idx[i];
    return m;
  }

  MixedForm homogeneous(const ChartPtr& chart, int k, int terms = 2, bool transcendental = true) {
    MixedForm out(chart);
    for (int t = 0; t < terms; ++t) out.accumulate(mask_of_degree(*chart, k), scalar(*chart, 2, transcendental));
    return out;
  }

  MixedForm mixed(const ChartPtr& chart, bool transcendental = true) {
    MixedForm out(chart);
    for (int k = 0; k <= chart->dim(); ++k) {
      if (coin(0.5)) out = out + homogeneous(chart, k, 1, transcendental);
    }
    return out;
  }

  /// Even form of positive degrees with constant-or-polynomial coefficients.
  MixedForm even(const ChartPtr& chart) {
    MixedForm out(chart);
    for (int k = 2; k <= chart->dim(); k += 2) out = out + homogeneous(chart, k, 2, false);
    return out;
  }

  VectorField vector(const ChartPtr& chart, bool transcendental = false) {
    VectorField v(chart);
    for (int s = 0; s < chart->dim(); ++s) {
      if (coin(0.7)) v.accumulate(s, scalar(*chart, 2, transcendental));
    }
    return v;
  }

  GeneralizedSection section(const ChartPtr& chart) {
    return {vector(chart), homogeneous(chart, 1, 2, false)};
  }

  /// Polynomial self-map of a real chart.
  CoordinateMap polynomial_map(const std::string& name, const ChartPtr& src, const ChartPtr& tgt) {
    std::map<std::string, Expr> images;
    for (const Coordinate& c : tgt->coordinates()) images[c.name] = scalar(*src, 3, false);
    return CoordinateMap(name, src, tgt, std::move(images));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline ChartPtr real_chart(const std::string& name, int n) {
  std::vector<Coordinate> cs;
  for (int i = 1; i <= n; ++i) cs.push_back({name + std::to_string(i), CoordKind::real, "", ""});
  return make_chart(name, cs);
}

inline bool agree(const MixedForm& a, const MixedForm& b, std::uint64_t seed = 0, int samples = 8) {
  CheckOptions o;
  o.samples = samples;
  o.seed = seed;
  return forms_agree(a, b, o).agree;
}

}  // namespace gcx::testing
