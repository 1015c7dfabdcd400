#pragma once

#include <string>
#include <vector>

#include "gcx/topology/manifold.hpp"

namespace gcx {

struct RiemannHurwitz {
  bool ok = false;
  std::string violation;
};

/// 2 − 2g̃ = d(2 − 2g) − Σ(t_i − 1), with g̃ ≥ g checked first.
RiemannHurwitz riemann_hurwitz_check(long g_cover, long g_base, long d, const std::vector<long>& indices);

struct BranchingRealization {
  long degree = 1;
  std::vector<long> indices;  // non-increasing
};

/// Branching data (d ≤ max_degree, 2 ≤ t_i ≤ min(d, max_index)) satisfying the
/// Riemann–Hurwitz formula for a cover of genus g_cover over genus g_base,
/// smallest degree first, at most `limit` entries.
std::vector<BranchingRealization> realize_branched_cover(long g_cover, long g_base, long max_degree = 6,
                                                         long max_index = 6, std::size_t limit = 16);

/// b₂ + 2g − 1, the rank of H₂ after the 5-dimensional surgery.
long surgery_rank_k(long b2, long genus);

/// Diffeomorphism type of a simply connected spin / non-spin 5-manifold
/// with torsion-free H₂ of rank k.
std::string classify_simply_connected_5(long k, Spin spin, const std::vector<long>& torsion = {}, bool ascii = false);

struct ComponentsReport {
  struct Entry {
    std::string label;
    std::string label_ascii;
    long b1 = 0;
    std::string origin;
  };
  std::vector<Entry> entries;
  bool heterogeneous = false;
  bool dim4_all_tori = true;

  std::string str() const;
};

ComponentsReport components_report(const ManifoldDescriptor& m);

}  // namespace gcx
