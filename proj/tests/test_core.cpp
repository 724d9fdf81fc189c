#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/rational.hpp"
#include "core/sparsemat.hpp"
#include "support.hpp"

using namespace gs;
using gs::test::Rng;

namespace {

SparseMatrix random_matrix(Rng& rng, int rows, int cols, int fill_pct,
                           std::vector<std::vector<Scalar>>* dense) {
  SparseMatrix m(rows, cols);
  dense->assign(rows, std::vector<Scalar>(cols, Scalar(0)));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (rng.chance(fill_pct, 100)) {
        Scalar v = rng.rational();
        m.add(r, c, v);
        (*dense)[r][c] += v;
      }
  return m;
}

}  // namespace

TEST_CASE("scalar construction is canonical") {
  CHECK(frac(2, 4) == frac(1, 2));
  CHECK(frac(-2, -4) == frac(1, 2));
  CHECK(frac(2, -4) == frac(-1, 2));
  CHECK(frac(2, -4).get_den() == 2);  // denominators stay positive
  CHECK(to_string(frac(-6, 4)) == "-3/2");
  CHECK(is_zero(frac(0, 7)));
}

TEST_CASE("rank agrees with an independent dense elimination") {
  Rng rng(12345);
  for (int trial = 0; trial < 120; ++trial) {
    int rows = 1 + rng.below(9);
    int cols = 1 + rng.below(9);
    std::vector<std::vector<Scalar>> dense;
    SparseMatrix m = random_matrix(rng, rows, cols, 20 + rng.below(60), &dense);
    CHECK(m.rank() == gs::test::dense_rank(dense));
  }
}

TEST_CASE("nullspace vectors satisfy Mx = 0 and count the corank") {
  Rng rng(777);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 1 + rng.below(7);
    int cols = 1 + rng.below(7);
    std::vector<std::vector<Scalar>> dense;
    SparseMatrix m = random_matrix(rng, rows, cols, 40, &dense);
    auto basis = m.nullspace();
    CHECK(static_cast<int>(basis.size()) == cols - m.rank());
    for (const auto& x : basis) {
      for (int r = 0; r < rows; ++r) {
        Scalar acc(0);
        for (int c = 0; c < cols; ++c) acc += dense[r][c] * x[c];
        CHECK(is_zero(acc));
      }
    }
    // Independence of the basis itself.
    SpanTracker tracker(cols);
    for (const auto& x : basis) CHECK(tracker.absorb(x));
  }
}

TEST_CASE("solve returns exact solutions and detects inconsistency") {
  Rng rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 1 + rng.below(7);
    int cols = 1 + rng.below(7);
    std::vector<std::vector<Scalar>> dense;
    SparseMatrix m = random_matrix(rng, rows, cols, 45, &dense);
    // Consistent system: b = M * (random x0).
    std::vector<Scalar> x0(cols);
    for (int c = 0; c < cols; ++c) x0[c] = rng.chance(1, 2) ? rng.rational() : Scalar(0);
    std::vector<Scalar> b(rows, Scalar(0));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) b[r] += dense[r][c] * x0[c];
    auto x = m.solve(b);
    REQUIRE(x.has_value());
    for (int r = 0; r < rows; ++r) {
      Scalar acc(0);
      for (int c = 0; c < cols; ++c) acc += dense[r][c] * (*x)[c];
      CHECK(acc == b[r]);
    }
  }
  // A visibly inconsistent system.
  SparseMatrix m(2, 1);
  m.add(0, 0, Scalar(1));
  m.add(1, 0, Scalar(1));
  CHECK_FALSE(m.solve({Scalar(1), Scalar(2)}).has_value());
}

TEST_CASE("solve is exact on an ill-conditioned Hilbert-style system") {
  const int n = 7;
  SparseMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.add(r, c, frac(1, r + c + 1));
  std::vector<Scalar> b(n, Scalar(0));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) b[r] += frac(1, r + c + 1) * Scalar(c + 1);
  auto x = m.solve(b);
  REQUIRE(x.has_value());
  for (int c = 0; c < n; ++c) CHECK((*x)[c] == Scalar(c + 1));
}

TEST_CASE("determinant and leading-minor positivity") {
  CHECK(dense_det({{frac(1), frac(2)}, {frac(3), frac(4)}}) == frac(-2));
  CHECK(is_zero(dense_det({{frac(1), frac(2)}, {frac(2), frac(4)}})));

  Metric good = gs::test::identity_metric(3);
  CHECK(good.symmetric());
  CHECK(good.nondegenerate());
  CHECK(good.positive_definite());

  Metric indef;
  indef.m = {{frac(1), frac(0)}, {frac(0), frac(-1)}};
  CHECK(indef.symmetric());
  CHECK(indef.nondegenerate());
  CHECK_FALSE(indef.positive_definite());

  // Positive entries but not positive definite.
  Metric bad;
  bad.m = {{frac(1), frac(3)}, {frac(3), frac(1)}};
  CHECK_FALSE(bad.positive_definite());
}

TEST_CASE("duplicate entries accumulate before elimination") {
  SparseMatrix m(1, 2);
  m.add(0, 0, frac(1, 2));
  m.add(0, 0, frac(-1, 2));
  m.add(0, 1, frac(1, 3));
  CHECK(m.rank() == 1);
  auto r = m.row(0);
  REQUIRE(r.size() == 1);
  CHECK(r[0].first == 1);
  CHECK(r[0].second == frac(1, 3));
}
