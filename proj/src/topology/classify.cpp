#include "gcx/topology/classify.hpp"

#include <algorithm>
#include <functional>

namespace gcx {

RiemannHurwitz riemann_hurwitz_check(long g_cover, long g_base, long d, const std::vector<long>& indices) {
  RiemannHurwitz out;
  if (d < 1) throw TopologyError("cover degree must be at least 1");
  if (g_cover < 0 || g_base < 0) throw TopologyError("genus must be nonnegative");
  if (g_cover < g_base) {
    out.violation = "cover genus " + std::to_string(g_cover) + " is below base genus " + std::to_string(g_base);
    return out;
  }
  for (long t : indices) {
    if (t < 2) throw TopologyError("branching index " + std::to_string(t) + " is below 2");
    if (t > d) throw TopologyError("branching index " + std::to_string(t) + " exceeds the degree");
  }
  long ramification = 0;
  for (long t : indices) ramification += t - 1;
  const long lhs = 2 - 2 * g_cover;
  const long rhs = d * (2 - 2 * g_base) - ramification;
  if (lhs != rhs) {
    out.violation = "2 - 2g~ = " + std::to_string(lhs) + " but d(2 - 2g) - sum(t - 1) = " + std::to_string(rhs);
    return out;
  }
  out.ok = true;
  return out;
}

std::vector<BranchingRealization> realize_branched_cover(long g_cover, long g_base, long max_degree, long max_index,
                                                         std::size_t limit) {
  std::vector<BranchingRealization> out;
  if (g_cover < g_base) return out;
  for (long d = 1; d <= max_degree && out.size() < limit; ++d) {
    const long needed = d * (2 - 2 * g_base) - (2 - 2 * g_cover);
    if (needed < 0) continue;
    const long top = std::min(d, max_index);
    std::vector<long> current;
    // non-increasing multisets of indices in [2, top] with Σ(t − 1) = needed
    std::function<void(long, long)> rec = [&](long remaining, long cap) {
      if (out.size() >= limit) return;
      if (remaining == 0) {
        out.push_back({d, current});
        return;
      }
      for (long t = std::min(cap, remaining + 1); t >= 2; --t) {
        current.push_back(t);
        rec(remaining - (t - 1), t);
        current.pop_back();
      }
    };
    rec(needed, top);
  }
  return out;
}

namespace {

std::string subscript_digits(long n) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string s;
  for (char c : std::to_string(n)) s += digits[c - '0'];
  return s;
}

}  // namespace

long surgery_rank_k(long b2, long genus) { return b2 + 2 * genus - 1; }

std::string classify_simply_connected_5(long k, Spin spin, const std::vector<long>& torsion, bool ascii) {
  if (k < 1) throw TopologyError("classification needs k >= 1, got " + std::to_string(k));
  if (!torsion.empty()) throw TopologyError("H2 has torsion: outside the classifier's scope");
  if (spin == Spin::unknown) throw TopologyError("spin type unknown: cannot classify");
  const std::string product = ascii ? "S2xS3" : "S²×S³";
  const std::string twisted = ascii ? "S2x~S3" : "S²×̃S³";
  auto sum_of = [&](long n) {
    if (n == 1) return product;
    return (ascii ? "#_" + std::to_string(n) : "#" + subscript_digits(n)) + " " + product;
  };
  if (spin == Spin::spin) return sum_of(k);
  if (k == 1) return twisted;
  return twisted + " # " + sum_of(k - 1);
}

std::string ComponentsReport::str() const {
  std::string out;
  for (const Entry& e : entries) {
    out += e.label + " (b1 = " + std::to_string(e.b1) + ", origin " + e.origin + ")\n";
  }
  out += heterogeneous ? "heterogeneous\n" : "homogeneous\n";
  return out;
}

ComponentsReport components_report(const ManifoldDescriptor& m) {
  ComponentsReport r;
  for (const TypeChangeComponent& c : m.components) {
    r.entries.push_back({c.label(), c.label(true), c.b1(), c.origin});
    const bool torus = c.factors.size() >= 1 &&
                       std::count_if(c.factors.begin(), c.factors.end(),
                                     [](const LabelFactor& f) { return f.kind != LabelFactor::Kind::point; }) == 1 &&
                       std::any_of(c.factors.begin(), c.factors.end(),
                                   [](const LabelFactor& f) { return f.kind == LabelFactor::Kind::torus; });
    if (!torus) r.dim4_all_tori = false;
  }
  for (std::size_t i = 0; i < r.entries.size() && !r.heterogeneous; ++i) {
    for (std::size_t j = i + 1; j < r.entries.size(); ++j) {
      if (r.entries[i].b1 != r.entries[j].b1) {
        r.heterogeneous = true;
        break;
      }
    }
  }
  if (m.dim == 4 && !r.dim4_all_tori) {
    throw TopologyError(m.name + ": in dimension 4 every type change component must be a 2-torus");
  }
  return r;
}

}  // namespace gcx
