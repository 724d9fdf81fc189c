#pragma once

#include <utility>
#include <vector>

#include "core/rational.hpp"
#include "gla/graded.hpp"

namespace gs {

/// One prolongation step: extends a transitive, Jacobi-valid truncation of
/// order k >= 0 by the exact kernel of the derivation condition
/// a([u,v]) = [a(u),v] + [u,a(v)] inside Hom(g_-, g)_{k+1}, defines
/// [g_-, g_{k+1}] by evaluation, and closes the bracket table at order k+1.
GradedLieAlgebra prolong_step(const GradedLieAlgebra& g);

/// Completes a partially extended truncation whose top layer m = order only
/// carries the evaluation brackets [g_j, g_m], j < 0: fills [g_0, g_m] and
/// every [g_a, g_b] with a, b >= 1, a + b = m via the transitivity recursion
/// [[x,y],u] = [[x,u],y] + [x,[y,u]]. An inconsistent right-hand side (the
/// value escapes the new layer) is reported with the witness pair; it signals
/// a non-transitive or Jacobi-violating input.
void extend_brackets(GradedLieAlgebra& g);

enum class ProlongVerdict { finite_type, infinite_type_at_cap, unknown_at_cap };

const char* to_string(ProlongVerdict v);

struct ProlongationResult {
  GradedLieAlgebra algebra;  // truncation of order cap
  std::vector<std::pair<int, int>> dims_by_degree;  // (degree, dim), -depth..cap
  ProlongVerdict verdict = ProlongVerdict::unknown_at_cap;
  int cap = 0;
  int total_dim = 0;            // sum of all layer dims through cap
  int first_zero_degree = -1;   // set (>= 1) when verdict is finite_type
};

/// Iterates prolong_step from an assembled truncation of order k >= 0 up to
/// cap. Kernels are guaranteed zero once a zero layer appears over a
/// fundamental symbol, so from there on only the bracket table is closed.
/// The infinite-type verdict requires a conservative growth witness: layer
/// dims strictly increasing over the last three degrees and the restriction
/// g_{p+1} -> Hom(g_{-1}, g_p) injective with equal corank at the last two.
ProlongationResult prolong_from(const GradedLieAlgebra& g, int cap);

/// Assembles g_- + g_0 and prolongs to cap. cap must be >= 1.
ProlongationResult prolong_full(const GradedLieAlgebra& g_minus,
                                const DerivationAlgebra& g0, int cap);

struct ReductionResult {
  GradedLieAlgebra f_minus;  // abelian, concentrated in degree -1
  DerivationAlgebra f0;      // matrix algebra acting on g_{-1}
  std::vector<std::vector<Scalar>> f0_in_g0;  // each f0 generator in g0 coordinates
};

/// Finite-type reduction to depth one: f_{-1} = g_{-1} and
/// f_0 = {A in g_0 : A annihilates every g_p, p < -1}, acting on g_{-1}.
/// Requires a fundamental symbol.
ReductionResult tanaka_finite_type_reduction(const GradedLieAlgebra& g_minus,
                                             const DerivationAlgebra& g0);

struct UniversalFiberDims {
  int k = 0;  // top actual degree supplied
  std::vector<std::pair<int, Integer>> dims;        // (ell, dim) for ell in [k+1, ell_max]
  std::vector<std::pair<int, Integer>> cumulative;  // (ell, total dim through ell)
};

/// Fiber dimensions of the universal (non-normal) prolongation tower over the
/// supplied truncation, by the recursion
///   gbar_ell = Hom(g_-, g_- + gbar_0 + ... + gbar_{ell-1})_ell
///            + Hom(gbar_0 + ... + gbar_{ell-2}, gbar_{ell-1}),
/// with gbar_i the actual layer for i <= k. Pure integer arithmetic;
/// ell_max must exceed the top supplied degree.
UniversalFiberDims universal_fiber_dims(const GradedLieAlgebra& g, int ell_max);

}  // namespace gs
