#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gla/graded.hpp"
#include "spencer/spencer.hpp"

namespace gs {

// Constant structure functions gamma: Lambda^2 E -> E over a truncation
// E = g_- + g_0 + ... + g_N of a transitive graded Lie algebra, with the
// kappa/tau/sigma decomposition, bigraded slices, admissibility and
// normality checks, the Bianchi residual, the four fundamental identities,
// flatness predicates, corollary checks, and pre-Cartan verdicts.

/// Block of Hom(Lambda^2 E, E) by argument signs: I = both negative (kappa),
/// II = mixed (tau), III = both nonnegative (sigma).
enum class GammaPart { I, II, III };

GammaPart gamma_part(int a, int b);

/// Bigrade of a component on g_a ^ g_b -> g_c: homogeneous degree
/// r = c - a - b and modified degree s = c - min{a,-1} - min{b,-1}.
struct BiGrade {
  int r;
  int s;
  auto operator<=>(const BiGrade&) const = default;
};

BiGrade bigrade(int a, int b, int c);

/// Alternating bilinear table gamma: Lambda^2 E -> E with exact entries.
/// Canonical storage keys x < y; gamma(x, x) = 0; missing pairs are zero.
/// Values must stay inside E (degrees in [-depth, order]).
class ConstantStructure {
 public:
  GradedLieAlgebra base;
  std::string name;

  /// gamma seeded with every defined bracket of the base.
  static ConstantStructure from_bracket(const GradedLieAlgebra& g);

  int order() const { return base.order(); }
  int depth() const { return base.dims.depth(); }

  /// gamma on basis elements, any order; zero when x == y.
  GVec apply(const Bel& x, const Bel& y) const;
  GVec apply(const GVec& u, const GVec& v) const;

  /// Degree-shift slice gamma_delta: the g_{p+q+delta} component of
  /// gamma(u_p, v_q), summed over homogeneous parts. `shadow`, when given,
  /// counts argument pairs whose slice degree escapes a truncated base.
  GVec shift(int delta, const GVec& u, const GVec& v, long* shadow = nullptr) const;

  /// Adds v to gamma(x, y). Throws if a component of v leaves E.
  void add(const Bel& x, const Bel& y, const GVec& v);
  void set(const Bel& x, const Bel& y, GVec v);

  const std::map<std::pair<Bel, Bel>, GVec>& table() const { return table_; }

 private:
  std::map<std::pair<Bel, Bel>, GVec> table_;
};

/// gamma split into bigraded components: (part, r, s) -> sub-table.
/// Summing all slices returns gamma exactly.
struct GammaSlices {
  std::map<std::tuple<GammaPart, int, int>, std::map<std::pair<Bel, Bel>, GVec>>
      slices;
  bool reassembles(const ConstantStructure& gamma) const;
};

GammaSlices decompose(const ConstantStructure& gamma);

/// One violated constraint on the component g_a ^ g_b -> g_c.
struct AdmissibilityViolation {
  std::string constraint;
  int a, b, c;
};

/// Admissibility follows the degree constraints of structure functions:
/// kappa and tau slices vanish in negative degree, kappa_0 is the bracket of
/// g_-, tau_0 is the action of g_- on E, and sigma components on g_a ^ g_b
/// with a, b >= 0 vanish below degree max{a,b} - 1. Normality is the stricter
/// positive-pair bound c >= max{a,b}, reported separately: negative sigma
/// slices at c = max{a,b} - 1 are legal for admissible structures.
struct AdmissibilityReport {
  bool admissible = true;
  bool normal = true;
  std::vector<AdmissibilityViolation> violations;
  std::vector<AdmissibilityViolation> normality_violations;
};

AdmissibilityReport check_admissible(const ConstantStructure& gamma);

/// Cyclic sum gamma(gamma(x,y),z) + gamma(gamma(y,z),x) + gamma(gamma(z,x),y).
GVec bianchi_at(const ConstantStructure& gamma, const GVec& x, const GVec& y,
                const GVec& z);
GVec bianchi_at(const ConstantStructure& gamma, const Bel& x, const Bel& y,
                const Bel& z);

/// Trilinear residual on canonical basis triples x < y < z; zero iff gamma
/// satisfies the Jacobi identity.
struct BianchiResidual {
  std::map<std::array<Bel, 3>, GVec> entries;
  bool zero() const { return entries.empty(); }
  std::optional<std::array<Bel, 3>> witness() const;
};

BianchiResidual bianchi_residual(const ConstantStructure& gamma);

/// Summation-bound mode for the fundamental identities. `displayed` applies
/// the bounds exactly as stated; `unrestricted` sums over every slice split
/// that is representable on the truncation. The two agree on admissible
/// normal structures; the extra displayed-mode drops rely on the normality
/// bound, not on admissibility alone.
enum class SumBounds { displayed, unrestricted };

/// Residuals LHS - RHS of the four fundamental identities at one homogeneous
/// argument triple and one degree shift. Argument sign patterns:
///   1: X, Y, Z negative, shift k >= 0;
///   2: A nonnegative, X, Y negative, shift d >= 0;
///   3: A, B nonnegative, X negative, shift d;
///   4: A, B, C nonnegative, shift d.
/// Each residual is a fixed sign times the matching degree component of the
/// Bianchi cyclic sum in the derivation's argument order:
///   residual1(X,Y,Z;k) = -B_k(X,Y,Z), residual2(A,X,Y;d) = +B_d(X,Y,A),
///   residual3(A,B,X;d) = +B_d(A,B,X), residual4(A,B,C;d) = +B_d(A,B,C).
GVec residual1(const ConstantStructure& gamma, const Bel& X, const Bel& Y,
               const Bel& Z, int k, SumBounds bounds = SumBounds::displayed,
               long* shadow = nullptr);
GVec residual2(const ConstantStructure& gamma, const Bel& A, const Bel& X,
               const Bel& Y, int d, SumBounds bounds = SumBounds::displayed,
               long* shadow = nullptr);
GVec residual3(const ConstantStructure& gamma, const Bel& A, const Bel& B,
               const Bel& X, int d, SumBounds bounds = SumBounds::displayed,
               long* shadow = nullptr);
GVec residual4(const ConstantStructure& gamma, const Bel& A, const Bel& B,
               const Bel& C, int d, SumBounds bounds = SumBounds::displayed,
               long* shadow = nullptr);

/// All residuals of one identity at a fixed shift, keyed by canonical
/// argument triples. `shadow` counts product terms dropped because an
/// intermediate value escaped the truncation order.
struct ResidualTable {
  std::map<std::array<Bel, 3>, GVec> entries;
  long slots = 0;
  long shadow = 0;
  bool zero() const { return entries.empty(); }
};

/// The four residual tables: identity 1 at shift k, identities 2-4 at
/// shift d. Throws when k or d lies outside the representable shift range
/// of the truncation.
struct FundamentalResiduals {
  std::array<ResidualTable, 4> identity;
  int k = 0;
  int d = 0;
  bool all_zero() const;
};

FundamentalResiduals fundamental_residuals(const ConstantStructure& gamma,
                                           int k, int d,
                                           SumBounds bounds = SumBounds::displayed);

/// Every identity evaluated over every representable slot.
struct IdentityScan {
  struct PerIdentity {
    long slots = 0;
    long nonzero = 0;
    long shadow = 0;
    std::vector<std::pair<std::array<Bel, 3>, int>> witnesses;  // capped
  };
  std::array<PerIdentity, 4> identity;
  bool all_zero() const;
};

IdentityScan identity_scan(const ConstantStructure& gamma,
                           SumBounds bounds = SumBounds::displayed);

/// tau_[m] is flat when every degree-r > 0 slice of modified degree m
/// vanishes; sigma_[m] additionally requires the degree-0 slice to be the
/// bracket. Cumulative: tau^[m] flat iff tau_[i] flat for all i <= m.
bool tau_level_flat(const ConstantStructure& gamma, int m);
bool sigma_level_flat(const ConstantStructure& gamma, int m);
bool tau_flat_through(const ConstantStructure& gamma, int m);
bool sigma_flat_through(const ConstantStructure& gamma, int m);
bool kappa_flat_through(const ConstantStructure& gamma, int m);

/// Flatness through modified degree k+1.
struct FlatnessReport {
  bool tau_flat;
  bool sigma_flat;
};

FlatnessReport flatness(const ConstantStructure& gamma, int k);

/// Consequences of the fundamental identities, each row an implication
/// hypothesis => conclusion evaluated on this gamma. They are theorems for
/// structures satisfying the Jacobi identity; on other input the rows simply
/// report what holds.
struct CorollaryRow {
  std::string name;
  bool hypothesis;
  bool holds;
  std::string witness;  // first failing slot, empty when holds
};

struct CorollaryReport {
  std::vector<CorollaryRow> rows;
  bool all_pass() const;
};

CorollaryReport corollary_checks(const ConstantStructure& gamma);

/// Algebraic part of the connection-type classification. Precedence:
/// a passing condition (C) certificate, then flat tau through the
/// truncation, then the always-true constancy of tau. Bundle-level
/// hypotheses (connectedness, existence of the geometric structure) are
/// outside scope and recorded in `caveat`.
struct PreCartanReport {
  std::string verdict;
  std::string certified;
  std::string caveat;
  bool condition_c = false;
  bool tau_flat = false;
};

PreCartanReport pre_cartan_verdict(const ConstantStructure& gamma,
                                   const ConditionCReport* condition_c);

/// A finite-dimensional Lie algebra given by brackets in a basis adapted to
/// a filtration: the basis element (p, i) spans a complement of F^{p+1} in
/// F^p, and bracket values may scatter across degrees >= p + q.
struct FilteredInput {
  GradedDims dims;
  std::map<std::pair<Bel, Bel>, GVec> brackets;
  std::string name;
};

/// gamma read off a filtered Lie algebra in an adapted basis; base is the
/// associated graded algebra (the degree-0 slice). Rejects non-Jacobi input
/// with a Bianchi witness and values below the filtration degree.
struct FilteredModel {
  ConstantStructure gamma;
};

FilteredModel model_from_filtered(const FilteredInput& in);

}  // namespace gs
