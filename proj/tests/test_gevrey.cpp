#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "core/error.hpp"
#include "gevrey/frame.hpp"
#include "gevrey/series.hpp"
#include "support.hpp"

using namespace gs;
using gs::test::Rng;

namespace {

FormalSeries poly(int n, int order,
                  std::initializer_list<std::pair<Exponent, Scalar>> terms) {
  FormalSeries f = FormalSeries::zero(n, order);
  for (const auto& [a, c] : terms) f.set(a, c);
  return f;
}

bool throws_containing(const std::function<void()>& fn,
                       const std::string& needle) {
  try {
    fn();
  } catch (const ComputationError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

/// X1 = D1, X2 = x1 D1 + D2.
std::vector<SeriesVectorField> shear_frame(int order) {
  std::vector<FormalSeries> c1{FormalSeries::constant(2, order, Scalar(1)),
                               FormalSeries::zero(2, order)};
  std::vector<FormalSeries> c2{FormalSeries::variable(2, order, 0),
                               FormalSeries::constant(2, order, Scalar(1))};
  return {SeriesVectorField(std::move(c1)), SeriesVectorField(std::move(c2))};
}

FormalSeries random_poly(Rng& rng, int n, int order, int max_deg) {
  FormalSeries f = FormalSeries::zero(n, order);
  for (int t = 0; t < 2 * n + 3; ++t) {
    Exponent a(n, 0);
    int budget = rng.below(max_deg + 1);
    for (int i = 0; i < n && budget > 0; ++i) {
      a[i] = rng.below(budget + 1);
      budget -= a[i];
    }
    f.set(a, rng.rational());
  }
  return f;
}

}  // namespace

TEST_CASE("series arithmetic and truncation") {
  FormalSeries one_plus = poly(1, 2, {{{0}, Scalar(1)}, {{1}, Scalar(1)}});
  FormalSeries one_minus = poly(1, 2, {{{0}, Scalar(1)}, {{1}, Scalar(-1)}});
  FormalSeries prod = series_mul(one_plus, one_minus);
  CHECK(prod == poly(1, 2, {{{0}, Scalar(1)}, {{2}, Scalar(-1)}}));

  CHECK(series_mul(one_plus, FormalSeries::zero(1, 2)).is_zero());

  // The product is exact through the smaller order; higher layers drop.
  FormalSeries f = poly(1, 3, {{{1}, Scalar(1)}, {{3}, Scalar(5)}});
  FormalSeries g = poly(1, 1, {{{1}, Scalar(1)}});
  FormalSeries fg = series_mul(f, g);
  CHECK(fg.order == 1);
  CHECK(fg.is_zero());

  FormalSeries sum = series_add(f, g);
  CHECK(sum.order == 1);
  CHECK(sum == poly(1, 1, {{{1}, Scalar(2)}}));

  CHECK(series_scale(f, Scalar(-2)).at({3}) == Scalar(-10));
  CHECK(series_scale(f, Scalar(0)).is_zero());

  // Commutativity and associativity on random polynomials.
  Rng rng(11);
  for (int s = 0; s < 12; ++s) {
    const int n = 1 + rng.below(3);
    FormalSeries a = random_poly(rng, n, 5, 3);
    FormalSeries b = random_poly(rng, n, 5, 3);
    FormalSeries c = random_poly(rng, n, 5, 3);
    CHECK(series_mul(a, b) == series_mul(b, a));
    CHECK(series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c)));
    CHECK(series_mul(a, series_add(b, c)) ==
          series_add(series_mul(a, b), series_mul(a, c)));
  }

  CHECK(throws_containing([&] { f.set({4}, Scalar(1)); },
                          "exceeds the truncation order"));
  CHECK(throws_containing([&] { series_mul(one_plus, random_poly(rng, 2, 3, 2)); },
                          "different variable counts"));
}

TEST_CASE("derivatives consume truncation order") {
  FormalSeries u = poly(2, 4, {{{2, 1}, Scalar(1)}});
  FormalSeries du = series_derive(u, 0);
  CHECK(du.order == 3);
  CHECK(du == poly(2, 3, {{{1, 1}, Scalar(2)}}));
  CHECK(series_derive(u, 1) == poly(2, 3, {{{2, 0}, Scalar(1)}}));

  FormalSeries flat = FormalSeries::constant(2, 0, Scalar(7));
  CHECK(throws_containing([&] { series_derive(flat, 0); },
                          "exceeds the available truncation order"));
}

TEST_CASE("weighted norm layers") {
  WeightVector ones({Scalar(1), Scalar(1)});

  CHECK(weighted_norm(FormalSeries::variable(2, 1, 0), ones).total == Scalar(1));
  CHECK(weighted_norm(FormalSeries::constant(2, 0, frac(-3, 2)), ones).total ==
        frac(3, 2));

  // alpha = (1,1): alpha!/|alpha|! = 1/2.
  FormalSeries x1x2 = poly(2, 2, {{{1, 1}, Scalar(1)}});
  CHECK(weighted_norm(x1x2, ones).total == frac(1, 2));

  FormalSeries mixed = poly(2, 2, {{{0, 0}, Scalar(1)},
                                   {{1, 0}, Scalar(1)},
                                   {{1, 1}, Scalar(1)}});
  WeightedNorm wn = weighted_norm(mixed, ones);
  REQUIRE(wn.layer.size() == 3);
  CHECK(wn.layer[0] == Scalar(1));
  CHECK(wn.layer[1] == Scalar(1));
  CHECK(wn.layer[2] == frac(1, 2));
  CHECK(wn.total == frac(5, 2));

  // General weights: |x1^2 x2| at r = (1/2, 3) is (2/6) * (1/4) * 3 = 1/4.
  FormalSeries m = poly(2, 3, {{{2, 1}, Scalar(1)}});
  CHECK(weighted_norm(m, WeightVector({frac(1, 2), Scalar(3)})).total ==
        frac(1, 4));

  // Layer supremum picks the largest weighted monomial.
  FormalSeries two = poly(2, 2, {{{2, 0}, Scalar(1)}, {{1, 1}, Scalar(4)}});
  CHECK(weighted_norm(two, ones).layer[2] == Scalar(2));

  CHECK(throws_containing([] { WeightVector({Scalar(1), Scalar(0)}); },
                          "must be positive"));
}

TEST_CASE("norm calculus on homogeneous samples") {
  // Same-variable powers multiply with equality.
  WeightVector r1({frac(2, 3)});
  FormalSeries xk = poly(1, 5, {{{2}, Scalar(1)}});
  FormalSeries xl = poly(1, 5, {{{3}, Scalar(1)}});
  const Scalar nk = weighted_norm(xk, r1).total;
  const Scalar nl = weighted_norm(xl, r1).total;
  CHECK(weighted_norm(series_mul(xk, xl), r1).total == nk * nl);

  // Distinct variables lose the binomial factor: |x1^2 x2^3| = 2!3!/5!.
  WeightVector ones({Scalar(1), Scalar(1)});
  FormalSeries p = poly(2, 5, {{{2, 3}, Scalar(1)}});
  CHECK(weighted_norm(p, ones).total == frac(2 * 6, 120));
  CHECK(frac(2 * 6, 120) == frac(1, 10));

  // Derivative bound attains equality in the minimal-weight variable.
  WeightVector rw({frac(1, 2), Scalar(2)});
  FormalSeries f = poly(2, 4, {{{3, 0}, Scalar(1)}});
  const Scalar nf = weighted_norm(f, rw).layer[3];
  CHECK(weighted_norm(series_derive(f, 0), rw).layer[2] ==
        Scalar(3) / frac(1, 2) * nf);

  LemmaAReport rep = lemma_a_check(100, 7);
  CHECK(rep.samples == 100);
  CHECK(rep.layer_checks == 100);
  CHECK(rep.total_checks == 100);
  CHECK(rep.derivative_checks > 0);
  CHECK(rep.violations == 0);
  CHECK(rep.tight > 0);

  LemmaAReport rep2 = lemma_a_check(100, 2026);
  CHECK(rep2.violations == 0);
}

TEST_CASE("frame matrix inversion") {
  // Identity frame: A is the identity.
  SeriesMatrix id = frame_matrix(coordinate_frame(3, 4));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(id[i][j] ==
            FormalSeries::constant(3, 4, Scalar(i == j ? 1 : 0)));

  // Shear frame: D1 = X1 and D2 = -x1 X1 + X2.
  SeriesMatrix a = frame_matrix(shear_frame(4));
  CHECK(a[0][0] == FormalSeries::constant(2, 4, Scalar(1)));
  CHECK(a[0][1].is_zero());
  CHECK(a[1][0] == poly(2, 4, {{{1, 0}, Scalar(-1)}}));
  CHECK(a[1][1] == FormalSeries::constant(2, 4, Scalar(1)));

  // Residual D - A X annihilates samples through the common order.
  Rng rng(23);
  std::vector<SeriesVectorField> frames_vars[2] = {shear_frame(6),
                                                   coordinate_frame(2, 6)};
  for (const auto& X : frames_vars) {
    SeriesMatrix A = frame_matrix(X);
    FormalSeries u = random_poly(rng, 2, 6, 4);
    for (int i = 0; i < 2; ++i) {
      FormalSeries lhs = series_derive(u, i).truncated(5);
      FormalSeries rhs = FormalSeries::zero(2, 5);
      for (int j = 0; j < 2; ++j)
        rhs = series_add(rhs, series_mul(A[i][j], apply_field(X[j], u)));
      CHECK(series_sub(lhs, rhs).is_zero());
    }
  }

  // Dense random frames invert two-sidedly through the truncation.
  for (int s = 0; s < 4; ++s) {
    const int n = 2 + rng.below(2);
    std::vector<SeriesVectorField> X;
    for (int i = 0; i < n; ++i) {
      std::vector<FormalSeries> row;
      for (int j = 0; j < n; ++j) {
        FormalSeries e = random_poly(rng, n, 5, 2);
        e.set(Exponent(n, 0), Scalar(i == j ? 1 : 0) + rng.rational(2, 3));
        row.push_back(std::move(e));
      }
      X.emplace_back(std::move(row));
    }
    SeriesMatrix C(n);
    for (int i = 0; i < n; ++i) C[i] = X[i].coeff;
    SeriesMatrix A;
    try {
      A = frame_matrix(X);
    } catch (const ComputationError&) {
      continue;  // random constant term happened to be singular
    }
    SeriesMatrix prod = series_matrix_mul(A, C);
    SeriesMatrix prod2 = series_matrix_mul(C, A);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(prod[i][j] ==
              FormalSeries::constant(n, 5, Scalar(i == j ? 1 : 0)));
        CHECK(prod2[i][j] ==
              FormalSeries::constant(n, 5, Scalar(i == j ? 1 : 0)));
      }
  }

  // Zero first column at the origin is rejected.
  std::vector<FormalSeries> c1{FormalSeries::variable(2, 3, 0),
                               FormalSeries::zero(2, 3)};
  std::vector<FormalSeries> c2{FormalSeries::zero(2, 3),
                               FormalSeries::constant(2, 3, Scalar(1))};
  std::vector<SeriesVectorField> bad{SeriesVectorField(std::move(c1)),
                                     SeriesVectorField(std::move(c2))};
  CHECK(throws_containing([&] { frame_matrix(bad); },
                          "singular at the origin"));
}

TEST_CASE("derivative expansion tensors") {
  SeriesMatrix A = frame_matrix(shear_frame(6));
  FrameTensors T = phi_tensors(A, 3);

  // Level 1 is the frame matrix itself.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(T.phi(1, 1).at({a}, {b}) == A[a][b]);

  // Level 2: the single-frame-slot tensor is the gradient of A, and the
  // double-slot tensor is A tensor A.
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int b = 0; b < 2; ++b)
        CHECK(T.phi(2, 1).at({a1, a2}, {b}) == series_derive(A[a2][b], a1));
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          CHECK(T.phi(2, 2).at({a1, a2}, {b1, b2}) ==
                series_mul(A[a1][b1], A[a2][b2]).truncated(5));
    }

  // A is affine here, so the twice-differentiated level vanishes.
  CHECK(T.phi(3, 1).entry.empty());
  // Hand value: both recursion branches contribute -1 at this slot.
  CHECK(T.phi(3, 2).at({0, 0, 1}, {0, 0}) ==
        FormalSeries::constant(2, 4, Scalar(-2)));
  // Top level is the triple tensor power.
  CHECK(T.phi(3, 3).at({1, 1, 1}, {0, 0, 0}) ==
        poly(2, 4, {{{3, 0}, Scalar(-1)}}));
  CHECK(T.phi(3, 3).at({1, 1, 1}, {0, 1, 1}) ==
        poly(2, 4, {{{1, 0}, Scalar(-1)}}));

  // Identity frame: only the top tensor survives and it is the identity.
  FrameTensors I = phi_tensors(frame_matrix(coordinate_frame(2, 6)), 4);
  for (int k = 1; k <= 4; ++k) {
    for (int i = 1; i < k; ++i) CHECK(I.phi(k, i).entry.empty());
    for (const auto& [key, s] : I.phi(k, k).entry) {
      CHECK(key.first == key.second);
      CHECK(s.at_origin() == Scalar(1));
    }
    CHECK(I.phi(k, k).entry.size() == static_cast<size_t>(1 << k));
  }

  CHECK(throws_containing([&] { T.phi(4, 1); }, "outside the computed range"));
  CHECK(throws_containing([&] { T.phi(2, 3); }, "outside the computed range"));
  CHECK(throws_containing(
      [&] { phi_tensors(frame_matrix(shear_frame(1)), 3); },
      "exceeds the available truncation order"));
}

TEST_CASE("recursion path counts") {
  // Independent enumeration: walk the two edge types from (1,1) to (k,i).
  std::function<long(int, int, int, int)> walk = [&](int r, int c, int k,
                                                     int i) -> long {
    if (r == k) return c == i ? 1 : 0;
    return walk(r + 1, c, k, i) + walk(r + 1, c + 1, k, i);
  };
  for (int k = 1; k <= 8; ++k) {
    Scalar level(0);
    for (int i = 1; i <= k; ++i) {
      CHECK(phi_path_count(k, i) == Scalar(walk(1, 1, k, i)));
      level += phi_path_count(k, i);
    }
    // 2^(k-1) summands across a level, under the stated 2^k bound.
    CHECK(level == Scalar(1L << (k - 1)));
    CHECK(level < Scalar(1L << k));
  }
  CHECK(phi_path_count(5, 3) == Scalar(6));
  CHECK(phi_path_count(4, 1) == Scalar(1));
}

TEST_CASE("expansion identity holds exactly") {
  Rng rng(31);

  // Identity frame: the expansion collapses to the plain partials.
  for (int k = 1; k <= 4; ++k) {
    FormalSeries u = random_poly(rng, 2, 6, 4);
    ExpansionResidual res = expansion_verify(u, coordinate_frame(2, 6), k);
    CHECK(res.zero());
    CHECK(res.slots == (1L << k));
    CHECK(res.checked_order == 6 - k);
  }

  // Shear frame against a hand expansion of u = x1^2 x2.
  FormalSeries u = poly(2, 6, {{{2, 1}, Scalar(1)}});
  std::vector<SeriesVectorField> X = shear_frame(6);
  FormalSeries x1u = apply_field(X[0], u);
  FormalSeries x2u = apply_field(X[1], u);
  CHECK(x1u == poly(2, 5, {{{1, 1}, Scalar(2)}}));
  CHECK(x2u == poly(2, 5, {{{2, 0}, Scalar(1)}, {{2, 1}, Scalar(2)}}));
  CHECK(apply_field(X[0], x1u) == poly(2, 4, {{{0, 1}, Scalar(2)}}));
  CHECK(apply_field(X[0], x2u) ==
        poly(2, 4, {{{1, 0}, Scalar(2)}, {{1, 1}, Scalar(4)}}));
  CHECK(apply_field(X[1], x1u) ==
        poly(2, 4, {{{1, 0}, Scalar(2)}, {{1, 1}, Scalar(2)}}));
  CHECK(apply_field(X[1], x2u) ==
        poly(2, 4, {{{2, 0}, Scalar(4)}, {{2, 1}, Scalar(4)}}));
  for (int k = 1; k <= 3; ++k) CHECK(expansion_verify(u, X, k).zero());

  // Unit-triangular polynomial perturbations of the coordinate frame.
  for (int s = 0; s < 3; ++s)
    for (int k = 2; k <= 4; ++k) {
      const int n = 2 + rng.below(2);
      std::vector<SeriesVectorField> F;
      for (int i = 0; i < n; ++i) {
        std::vector<FormalSeries> row;
        for (int j = 0; j < n; ++j) {
          if (j < i) {
            row.push_back(FormalSeries::zero(n, 6));
          } else if (j == i) {
            row.push_back(FormalSeries::constant(n, 6, Scalar(1)));
          } else {
            row.push_back(random_poly(rng, n, 6, 2));
          }
        }
        F.emplace_back(std::move(row));
      }
      FormalSeries v = random_poly(rng, n, 6, 3);
      ExpansionResidual res = expansion_verify(v, F, k);
      CHECK(res.zero());
      CHECK(res.checked_order == 6 - k);
    }

  // Truncation refusal instead of a silently wrong zero.
  FormalSeries small = random_poly(rng, 2, 3, 2);
  CHECK(throws_containing(
      [&] { expansion_verify(small, coordinate_frame(2, 3), 4); },
      "exceeds the available truncation order"));
}

TEST_CASE("tensor norm compatibility") {
  // The sup norm on tensors is compatible with the row-sum operator bound:
  // ||(A (x) A) T|| <= (max row sum of |A|)^2 ||T||.
  Rng rng(41);
  for (int s = 0; s < 30; ++s) {
    const int n = 2 + rng.below(2);
    std::vector<std::vector<Scalar>> A(n, std::vector<Scalar>(n, Scalar(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.chance(3, 4)) A[i][j] = rng.rational();
    std::vector<std::vector<Scalar>> T(n, std::vector<Scalar>(n, Scalar(0)));
    Scalar tmax(0);
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) {
        T[m][j] = rng.rational();
        if (abs_scalar(T[m][j]) > tmax) tmax = abs_scalar(T[m][j]);
      }
    Scalar rowsum(0);
    for (int i = 0; i < n; ++i) {
      Scalar rs(0);
      for (int j = 0; j < n; ++j) rs += abs_scalar(A[i][j]);
      if (rs > rowsum) rowsum = rs;
    }
    Scalar smax(0);
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        Scalar acc(0);
        for (int m = 0; m < n; ++m)
          for (int j = 0; j < n; ++j) acc += A[i1][m] * A[i2][j] * T[m][j];
        if (abs_scalar(acc) > smax) smax = abs_scalar(acc);
      }
    CHECK(smax <= rowsum * rowsum * tmax);
  }
}

TEST_CASE("derivative growth profile") {
  // Truncated geometric series along the coordinate frame: the l-th maximal
  // derivative at the origin is exactly l!.
  FormalSeries geo = FormalSeries::zero(1, 8);
  for (int m = 0; m <= 8; ++m) geo.set({m}, Scalar(1));
  EstimateProfile p = estimate_profile(geo, coordinate_frame(1, 8), 8, Scalar(1));
  REQUIRE(p.ratio.size() == 9);
  for (const Scalar& r : p.ratio) CHECK(r == Scalar(1));

  // Polynomials flatten to zero once the degree is exhausted.
  FormalSeries mono = poly(2, 8, {{{2, 1}, Scalar(1)}});
  EstimateProfile q =
      estimate_profile(mono, coordinate_frame(2, 8), 6, Scalar(1));
  CHECK(q.ratio[0] == Scalar(0));
  CHECK(q.ratio[1] == Scalar(0));
  CHECK(q.ratio[2] == Scalar(0));
  CHECK(q.ratio[3] == frac(1, 3));
  for (int l = 4; l <= 6; ++l) CHECK(q.ratio[l] == Scalar(0));

  // Shear frame on the x1-geometric series: the all-X1 word dominates every
  // mixed word, so the profile matches the coordinate one and decays once
  // the scale passes the inverse radius.
  FormalSeries geo2 = FormalSeries::zero(2, 8);
  for (int m = 0; m <= 8; ++m) {
    Exponent a{m, 0};
    geo2.set(a, Scalar(1));
  }
  EstimateProfile flat = estimate_profile(geo2, shear_frame(8), 8, Scalar(1));
  EstimateProfile decay = estimate_profile(geo2, shear_frame(8), 8, Scalar(2));
  Scalar half(1);
  for (int l = 0; l <= 8; ++l) {
    CHECK(flat.ratio[l] == Scalar(1));
    CHECK(decay.ratio[l] == half);
    half /= 2;
  }
  std::vector<double> d = profile_as_double(decay);
  CHECK(d.front() == 1.0);
  CHECK(d.back() == 1.0 / 256.0);

  CHECK(throws_containing(
      [&] { estimate_profile(geo, coordinate_frame(1, 8), 9, Scalar(1)); },
      "exceeds the available truncation order"));
  CHECK(throws_containing(
      [&] { estimate_profile(geo, coordinate_frame(1, 8), 2, Scalar(0)); },
      "must be positive"));
}
