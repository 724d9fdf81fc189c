#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/sparsemat.hpp"
#include "gla/graded.hpp"

namespace gs {

/// Basis element of the space of q-cochains of homogeneity r: a strictly
/// increasing wedge of negative basis elements and a target basis element of
/// degree (sum of source degrees) + r. For q = 0 the wedge is empty and the
/// element is a basis vector of g_r.
struct CochainBasisEl {
  std::vector<Bel> srcs;
  Bel tgt;
  auto operator<=>(const CochainBasisEl&) const = default;
};

/// Deterministic basis of the (q, r) cochain space: wedges in lexicographic
/// order over the canonical negative basis, targets index-ascending.
struct CochainSpace {
  int q = 0;
  int r = 0;
  std::vector<CochainBasisEl> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  int index_of(const std::vector<Bel>& srcs, const Bel& tgt) const;
};

/// A cochain as coordinates in a CochainSpace basis.
using CochainVec = std::vector<Scalar>;

/// True when the (q, r) cochain space (and hence everything the coboundary
/// needs) is representable: complete algebras always, truncations when every
/// target degree r - q', q <= q' <= q+1... in practice r - q <= order.
bool cochain_space_representable(const GradedLieAlgebra& g, int q, int r);

CochainSpace cochain_space(const GradedLieAlgebra& g, int q, int r);

/// Matrix of the coboundary (q, r) -> (q+1, r): columns indexed by `from`,
/// rows by `to`; to.q must equal from.q + 1 and homogeneities must agree.
SparseMatrix coboundary_matrix(const GradedLieAlgebra& g, const CochainSpace& from,
                               const CochainSpace& to);

/// dim H^q_r = dim ker(d: C^q -> C^{q+1}) - rank(d: C^{q-1} -> C^q).
int cohomology_dim(const GradedLieAlgebra& g, int q, int r);

/// One degree's worth of complement data: W1 in the 1-cochains of homogeneity
/// ell (complement of the coboundaries of g_ell) and W2 in the 2-cochains of
/// homogeneity ell (complement of the coboundaries of 1-cochains).
struct ComplementAt {
  int ell = 0;
  CochainSpace c1, c2;
  std::vector<CochainVec> w1;  // coordinates in c1
  std::vector<CochainVec> w2;  // coordinates in c2
  int rank_d0 = 0;             // dim of the coboundary image inside c1
  int rank_d1 = 0;             // dim of the coboundary image inside c2
};

struct ComplementChoice {
  int lo = 1, hi = 0;
  std::vector<ComplementAt> at;  // one per ell in [lo, hi]
};

/// Orthogonal complements with respect to the coordinate inner product of the
/// canonical cochain basis: W = nullspace of (image matrix)^T.
ComplementChoice complement_select(const GradedLieAlgebra& g, int lo, int hi);

struct ComplementFailure {
  int ell = 0;
  std::string which;   // "W1" or "W2"
  std::string reason;  // "dimension mismatch" or "nontrivial intersection"
};

/// Exact direct-sum verification of a (possibly external) choice.
std::optional<ComplementFailure> complement_verify(const GradedLieAlgebra& g,
                                                   const ComplementChoice& choice);

struct ConditionCWitness {
  int ell = 0;
  int g0_index = 0;  // acting basis element of g_0
  int w_index = 0;   // W2 basis vector moved out of W2
};

struct ConditionCReport {
  bool holds = true;
  int lo = 1, hi = 0;
  std::vector<ConditionCWitness> witnesses;
};

/// Infinitesimal invariance of the degree-wise W2 family under the g_0 action
/// rho(A): failure witnesses name (degree, generator, vector).
ConditionCReport condition_c_check(const GradedLieAlgebra& g,
                                   const ComplementChoice& choice);

/// The rho(A) action on a 2-cochain, exposed for tests:
/// (rho(A) c)(X, Y) = [A, c(X,Y)] - c([A,X], Y) - c(X, [A,Y]).
CochainVec rho_action_2cochain(const GradedLieAlgebra& g, const Bel& A,
                               const CochainSpace& c2, const CochainVec& c);

struct IndexSets {
  // Scan data: H^1_r for r in [-1, cap], H^2_r for r in [0, cap].
  std::vector<std::pair<int, int>> h1;  // (r, dim)
  std::vector<std::pair<int, int>> h2;
  std::vector<int> i1_intro, i2_intro;        // {i > 0 : H^q_i != 0}
  std::vector<int> i1_section, i2_section;    // I1 = {i >= 0 : H^1_{i-1} != 0}, I2 = {i >= 0 : H^2_i != 0}
  std::optional<int> r0;  // largest r <= cap with H^1_r or H^2_r nonzero
  bool scan_complete_h1 = false;  // cap reaches the structural vanishing bound
  bool scan_complete_h2 = false;
  int cap = 0;
};

/// Both labeled conventions, plus completeness flags: for a complete algebra
/// with top degree T and depth mu, cochains vanish identically for r > T + q*mu.
IndexSets invariant_index_sets(const GradedLieAlgebra& g, int cap);

struct QuasiInvolutivityReport {
  int ell = 0;
  bool holds_in_range = true;
  bool certified = false;  // range reached the structural vanishing bound
  int checked_to = 0;
  std::optional<int> failing_r;
};

/// H^1_r = 0 and H^2_{r+1} = 0 for all r >= ell (within cap; certified when
/// the scan reaches the vanishing bound of a complete algebra).
QuasiInvolutivityReport quasi_involutive(const GradedLieAlgebra& g, int ell, int cap);

}  // namespace gs
