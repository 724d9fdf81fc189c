#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace gs {

/// Basis element id: degree p, index i within that degree. Ordering is
/// degree-ascending then index-ascending; this is the canonical basis order
/// everywhere (tables, cochain enumeration, reports).
struct Bel {
  int p = 0;
  int i = 0;
  auto operator<=>(const Bel&) const = default;
};

/// Sparse vector in a graded space, canonical basis order.
using GVec = std::map<Bel, Scalar>;

void gvec_add(GVec& v, const Bel& b, const Scalar& c);
void gvec_axpy(GVec& v, const Scalar& a, const GVec& w);
bool gvec_is_zero(const GVec& v);
/// Component of v of homogeneity degree p.
GVec gvec_degree_part(const GVec& v, int p);
/// Components with degree < 0 (resp. >= 0).
GVec gvec_neg_part(const GVec& v);
GVec gvec_nonneg_part(const GVec& v);

/// Dimensions per degree. Zero-dimensional degrees are legal and simply
/// absent from the map.
class GradedDims {
 public:
  GradedDims() = default;
  explicit GradedDims(const std::map<int, int>& d);
  GradedDims(std::initializer_list<std::pair<const int, int>> d)
      : GradedDims(std::map<int, int>(d)) {}

  int at(int p) const;                  // 0 when absent
  void set(int p, int d);               // d == 0 erases
  int depth() const;                    // mu = -(lowest degree), 0 if none negative
  int top() const;                      // highest degree present, INT_MIN if empty
  int total() const;
  int total_in(int lo, int hi) const;   // sum over lo..hi inclusive
  const std::map<int, int>& map() const { return dims_; }

  /// Basis elements of degree p, index-ascending.
  std::vector<Bel> basis_at(int p) const;
  /// All basis elements with degree in [lo, hi], canonical order.
  std::vector<Bel> basis_range(int lo, int hi) const;

 private:
  std::map<int, int> dims_;
};

/// Symmetric bilinear form on g_{-1}, exact entries.
struct Metric {
  std::vector<std::vector<Scalar>> m;  // n x n, n = dim g_{-1}
  bool symmetric() const;
  bool nondegenerate() const;
  /// Exact test via leading principal minors.
  bool positive_definite() const;
};

struct JacobiFailure {
  Bel x, y, z;
  GVec residual;
};

struct TransitivityReport {
  bool transitive = true;
  int failing_degree = 0;           // meaningful when !transitive
  std::vector<Scalar> witness;      // kernel vector in basis of g_{failing_degree}
};

/// Graded Lie algebra, possibly truncated.
///
/// Brackets are stored once per unordered basis pair, keyed by the canonical
/// order (p,i) < (q,j); the reflected value carries sign -1. When `truncation`
/// is set to k, brackets are defined only for operand and result degrees <= k
/// ("the algebra is the truncation g[k]"); when unset the algebra is complete
/// and absent degrees are genuinely zero.
class GradedLieAlgebra {
 public:
  GradedDims dims;
  std::optional<int> truncation;
  std::string name;

  bool complete() const { return !truncation.has_value(); }
  int depth() const { return dims.depth(); }
  /// Truncation order for truncated algebras, top degree for complete ones.
  int order() const;

  /// True when the bracket of degrees (a, b) is defined (always, for complete
  /// algebras; a,b,a+b <= k for truncations).
  bool bracket_defined(int a, int b) const;

  /// Sets [x, y] = v for x < y canonical. Entries with x == y or out-of-range
  /// targets are rejected by validate(), not here.
  void set_bracket(const Bel& x, const Bel& y, GVec v);

  /// [x, y] for basis elements, any order (sign handled), zero when x == y.
  GVec bracket_basis(const Bel& x, const Bel& y) const;

  /// Bilinear extension.
  GVec bracket(const GVec& x, const GVec& y) const;

  /// Bracket projected to degrees <= cap. For truncated algebras this treats
  /// out-of-range components as dropped; *dropped is set when that happens on
  /// a pair whose true value is not known to be zero.
  GVec bracket_basis_capped(const Bel& x, const Bel& y, int cap,
                            bool* dropped = nullptr) const;

  /// Structural validation: table keys canonical and in range, targets in the
  /// correct degree, scalars nonzero. Returns error strings (empty == ok).
  std::vector<std::string> validate_structure() const;

  /// Jacobi on all basis triples whose three terms are all defined. Returns
  /// the lexicographically first failure, if any.
  std::optional<JacobiFailure> check_jacobi() const;

  /// Exact per-degree kernel test of ad: g_i -> Hom(g_-, g) for 0 <= i <= order.
  TransitivityReport check_transitivity() const;

  /// Whether iterated brackets of g_{-1} span every g_p, p < -1.
  bool is_fundamental() const;

 private:
  std::map<std::pair<Bel, Bel>, GVec> table_;

 public:
  const std::map<std::pair<Bel, Bel>, GVec>& table() const { return table_; }
};

/// One degree-0 derivation of g_-: a block matrix per negative degree,
/// blocks[p] is dim(g_p) x dim(g_p), acting by A(e_{p,j}) = sum_i blocks[p][i][j] e_{p,i}.
struct Derivation {
  std::map<int, std::vector<std::vector<Scalar>>> blocks;
  GVec apply(const Bel& b) const;
  std::vector<Scalar> flat(const GradedDims& dims) const;  // coordinates, deterministic layout
};

struct DerivationAlgebra {
  std::vector<Derivation> basis;
  /// Structure constants: [basis[i], basis[j]] = sum_k c[{i,j}][k] basis[k],
  /// stored for i < j.
  std::map<std::pair<int, int>, std::vector<Scalar>> comm;
};

/// Degree-0 derivations of the negative part (all of them, or those acting
/// skew-symmetrically on (g_{-1}, metric) when a metric is given). The result
/// includes the induced commutator table; closure under commutator is
/// guaranteed for the computed family and verified for explicit generators by
/// derivation_family_check().
DerivationAlgebra derivations_degree0(const GradedLieAlgebra& g_minus,
                                      const Metric* metric);

/// Validates an explicitly given family: each generator a degree-0 derivation,
/// family linearly independent and closed under commutator. Returns error
/// strings (empty == ok) and fills the commutator table on success.
std::vector<std::string> derivation_family_check(const GradedLieAlgebra& g_minus,
                                                 DerivationAlgebra& fam);

/// Builds the truncated algebra g[0] = g_- + g_0 from a symbol and a
/// derivation family acting on it.
GradedLieAlgebra attach_degree0(const GradedLieAlgebra& g_minus,
                                const DerivationAlgebra& g0);

}  // namespace gs
