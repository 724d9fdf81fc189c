#pragma once

// Shared test helpers: an independent dense rank oracle, a deterministic
// xorshift RNG for seeded property tests, and small builders for the standard
// algebras used across the suite.

#include <cstdint>
#include <vector>

#include "core/rational.hpp"
#include "gla/graded.hpp"

namespace gs::test {

/// Plain rational Gaussian elimination, dense, first-nonzero pivoting.
/// Deliberately independent of SparseMatrix so the two can cross-check.
inline int dense_rank(std::vector<std::vector<Scalar>> m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!is_zero(m[r][col])) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      if (is_zero(m[r][col])) continue;
      Scalar f = m[r][col] / m[rank][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

/// Deterministic RNG (xorshift64*), independent of libc.
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1DULL;
  }
  /// Uniform in [0, n).
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
  /// Small rational with numerator in [-max, max] \ {0}, denominator in [1, dmax].
  Scalar rational(int max = 5, int dmax = 3) {
    int num = below(2 * max) - max;
    if (num >= 0) ++num;
    int den = 1 + below(dmax);
    return frac(num, den);
  }
  /// Nonzero with probability num/den, used for sparse sampling.
  bool chance(int num, int den) { return below(den) < num; }

 private:
  uint64_t s_;
};

/// Heisenberg symbol: dims {-1: 2, -2: 1}, [e_{-1,0}, e_{-1,1}] = e_{-2,0}.
inline GradedLieAlgebra heisenberg3() {
  GradedLieAlgebra g;
  g.name = "heisenberg3";
  g.dims = GradedDims({{-2, 1}, {-1, 2}});
  g.truncation = -1;
  g.set_bracket(Bel{-1, 0}, Bel{-1, 1}, GVec{{Bel{-2, 0}, Scalar(1)}});
  return g;
}

/// Free 3-step symbol on two generators: dims {-1: 2, -2: 1, -3: 2}.
inline GradedLieAlgebra symbol235() {
  GradedLieAlgebra g;
  g.name = "symbol235";
  g.dims = GradedDims({{-3, 2}, {-2, 1}, {-1, 2}});
  g.truncation = -1;
  g.set_bracket(Bel{-1, 0}, Bel{-1, 1}, GVec{{Bel{-2, 0}, Scalar(1)}});
  g.set_bracket(Bel{-2, 0}, Bel{-1, 0}, GVec{{Bel{-3, 0}, Scalar(-1)}});
  g.set_bracket(Bel{-2, 0}, Bel{-1, 1}, GVec{{Bel{-3, 1}, Scalar(-1)}});
  return g;
}

/// Abelian symbol of dimension n in degree -1.
inline GradedLieAlgebra abelian(int n) {
  GradedLieAlgebra g;
  g.name = "abelian" + std::to_string(n);
  g.dims = GradedDims(std::map<int, int>{{-1, n}});
  g.truncation = -1;
  return g;
}

inline Metric identity_metric(int n) {
  Metric m;
  m.m.assign(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) m.m[i][i] = 1;
  return m;
}

/// Declares the given truncation to be the whole algebra. Only valid when the
/// stored brackets already close (e.g. nilpotent symbols, symbol + degree 0).
inline GradedLieAlgebra complete_copy(GradedLieAlgebra g) {
  g.truncation.reset();
  return g;
}

/// Euclidean algebra R^3 + so(3), complete: the full prolongation of the
/// metric-preserving degree-0 family over the abelian 3-dimensional symbol.
inline GradedLieAlgebra euclidean3() {
  GradedLieAlgebra base = abelian(3);
  Metric m = identity_metric(3);
  DerivationAlgebra so3 = derivations_degree0(base, &m);
  GradedLieAlgebra g = complete_copy(attach_degree0(base, so3));
  g.name = "euclidean3";
  return g;
}

/// Heisenberg symbol with its full degree-0 derivation algebra gl(2),
/// declared complete (a graded subalgebra of the prolongation).
inline GradedLieAlgebra h3gl2() {
  GradedLieAlgebra base = heisenberg3();
  DerivationAlgebra gl2 = derivations_degree0(base, nullptr);
  GradedLieAlgebra g = complete_copy(attach_degree0(base, gl2));
  g.name = "h3gl2";
  return g;
}

}  // namespace gs::test
