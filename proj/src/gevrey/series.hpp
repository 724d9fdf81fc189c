#pragma once

#include <map>
#include <vector>

#include "core/rational.hpp"

namespace gs {

/// Exponent multi-index; its size equals the variable count of the series
/// that stores it.
using Exponent = std::vector<int>;

/// |alpha| = total degree.
int exponent_weight(const Exponent& a);

/// alpha! = product of component factorials, exact.
Scalar exponent_factorial(const Exponent& a);

Scalar factorial(int k);
Scalar binomial(int n, int k);

/// Truncated multivariate formal power series over exact rationals. `order`
/// records the total degree the coefficients are known through; keys obey
/// |alpha| <= order, have size n, nonnegative entries, and nonzero values.
struct FormalSeries {
  int n = 0;
  int order = 0;
  std::map<Exponent, Scalar> coeff;

  static FormalSeries zero(int n, int order);
  static FormalSeries constant(int n, int order, const Scalar& c);
  /// The coordinate function x_i (zero-based i).
  static FormalSeries variable(int n, int order, int i);

  /// Replaces the coefficient of a; validates the key against n and order.
  void set(const Exponent& a, const Scalar& c);
  void add(const Exponent& a, const Scalar& c);
  Scalar at(const Exponent& a) const;
  Scalar at_origin() const;
  bool is_zero() const { return coeff.empty(); }

  /// Drops layers above m and lowers the recorded order to m.
  FormalSeries truncated(int m) const;

  bool operator==(const FormalSeries& o) const = default;
};

/// Same-variable-count sum; the result is known through the smaller order.
FormalSeries series_add(const FormalSeries& f, const FormalSeries& g);
FormalSeries series_sub(const FormalSeries& f, const FormalSeries& g);
FormalSeries series_scale(const FormalSeries& f, const Scalar& c);
/// Truncated Cauchy product, exact through min(f.order, g.order).
FormalSeries series_mul(const FormalSeries& f, const FormalSeries& g);
/// d/dx_i (zero-based). Consumes one truncation order; errors when none
/// remains, because the result would carry no trustworthy layer.
FormalSeries series_derive(const FormalSeries& f, int i);

/// Positive weights, one per variable.
struct WeightVector {
  std::vector<Scalar> r;

  explicit WeightVector(std::vector<Scalar> w);
  int n() const { return static_cast<int>(r.size()); }
  Scalar min() const;
  /// r^alpha.
  Scalar power(const Exponent& a) const;
};

/// Weighted norm per homogeneous layer: layer[k] is the supremum of
/// alpha!/|alpha|! |f_alpha| r^alpha over |alpha| = k; total sums the layers.
struct WeightedNorm {
  std::vector<Scalar> layer;
  Scalar total;
};
WeightedNorm weighted_norm(const FormalSeries& f, const WeightVector& r);

/// Randomized exact check of the norm calculus on homogeneous samples:
/// submultiplicativity layer by layer and on totals, and the derivative
/// bound |D_j F_k| <= (k/r_min)|F_k| for every variable. Violations are
/// counted (expected zero); tight counts samples where some inequality is
/// attained with equality.
struct LemmaAReport {
  long samples = 0;
  long layer_checks = 0;
  long total_checks = 0;
  long derivative_checks = 0;
  long violations = 0;
  long tight = 0;
};
LemmaAReport lemma_a_check(int samples, unsigned long seed);

}  // namespace gs
