#include "gcx/topology/smith.hpp"

#include <cstdlib>
#include <utility>

#include "gcx/topology/group.hpp"

namespace gcx {

namespace {

long checked_mul(long a, long b) {
  long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw TopologyError("Smith normal form: integer overflow");
  return r;
}

long checked_sub(long a, long b) {
  long r = 0;
  if (__builtin_sub_overflow(a, b, &r)) throw TopologyError("Smith normal form: integer overflow");
  return r;
}

}  // namespace

std::vector<long> smith_invariants(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<long> diag;
  for (std::size_t t = 0; t < rows && t < cols; ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pr == rows || std::labs(m[i][j]) < std::labs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) return diag;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const long q = m[i][t] / m[t][t];
        if (q != 0) {
          for (std::size_t j = t; j < cols; ++j) m[i][j] = checked_sub(m[i][j], checked_mul(q, m[t][j]));
        }
        clean = clean && m[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const long q = m[t][j] / m[t][t];
        if (q != 0) {
          for (std::size_t i = t; i < rows; ++i) m[i][j] = checked_sub(m[i][j], checked_mul(q, m[i][t]));
        }
        clean = clean && m[t][j] == 0;
      }
      if (!clean) continue;

      // pivot must divide the rest of the block; otherwise fold a row in
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) {
              long s = 0;
              if (__builtin_add_overflow(m[t][k], m[i][k], &s)) throw TopologyError("Smith normal form: integer overflow");
              m[t][k] = s;
            }
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    diag.push_back(std::labs(m[t][t]));
  }
  return diag;
}

}  // namespace gcx
