#include "prolong/prolong.hpp"

#include <cassert>
#include <string>

#include "core/error.hpp"
#include "core/sparsemat.hpp"
#include "spencer/spencer.hpp"

namespace gs {

namespace {

std::string bel_name(const Bel& b) {
  return "e(" + std::to_string(b.p) + "," + std::to_string(b.i) + ")";
}

/// Coordinate matrix whose columns are the 1-cochains of the top layer,
/// reconstructed from the stored evaluation brackets.
SparseMatrix top_layer_cochains(const GradedLieAlgebra& g, int m,
                                const CochainSpace& c1) {
  const int nk = g.dims.at(m);
  SparseMatrix k(c1.dim(), nk);
  for (int t = 0; t < nk; ++t) {
    const Bel xi{m, t};
    for (const Bel& u : g.dims.basis_range(-g.depth(), -1))
      for (const auto& [s, coef] : g.bracket_basis(u, xi)) {
        const int row = c1.index_of({u}, s);
        assert(row >= 0);
        k.add(row, t, coef);
      }
  }
  return k;
}

}  // namespace

const char* to_string(ProlongVerdict v) {
  switch (v) {
    case ProlongVerdict::finite_type:
      return "finite_type";
    case ProlongVerdict::infinite_type_at_cap:
      return "infinite_type_at_cap";
    default:
      return "unknown_at_cap";
  }
}

void extend_brackets(GradedLieAlgebra& g) {
  if (g.complete())
    throw ComputationError("bracket extension expects a truncation");
  const int m = g.order();
  if (m < 1) return;  // order 0 tables are already closed by construction
  const CochainSpace c1 = cochain_space(g, 1, m);
  const SparseMatrix k = top_layer_cochains(g, m, c1);
  const std::vector<Bel> neg = g.dims.basis_range(-g.depth(), -1);

  // [A, xi] for A in g_0: the natural action u -> [A, xi(u)] - xi([A, u]).
  for (int a = 0; a < g.dims.at(0); ++a) {
    const Bel A{0, a};
    for (int t = 0; t < g.dims.at(m); ++t) {
      const Bel xi{m, t};
      CochainVec coords(c1.dim(), Scalar(0));
      for (const Bel& u : neg) {
        GVec val = g.bracket(GVec{{A, Scalar(1)}}, g.bracket_basis(u, xi));
        gvec_axpy(val, Scalar(-1), g.bracket(g.bracket_basis(A, u), GVec{{xi, Scalar(1)}}));
        for (const auto& [s, coef] : val) {
          const int row = c1.index_of({u}, s);
          assert(row >= 0);
          coords[row] += coef;
        }
      }
      auto sol = k.solve(coords);
      if (!sol)
        throw ComputationError("bracket extension inconsistent at pair (" +
                               bel_name(A) + ", " + bel_name(xi) + ")");
      GVec val;
      for (int s = 0; s < g.dims.at(m); ++s) gvec_add(val, Bel{m, s}, (*sol)[s]);
      if (!val.empty()) g.set_bracket(A, xi, val);
    }
  }

  // [x, y] for x in g_a, y in g_b, a, b >= 1, a + b = m: forced by
  // [[x,y],u] = [[x,u],y] + [x,[y,u]], i.e. [u,[x,y]] = -[[x,u],y] - [x,[y,u]].
  for (int a = 1; 2 * a <= m; ++a) {
    const int b = m - a;
    for (int i = 0; i < g.dims.at(a); ++i)
      for (int j = (a == b ? i + 1 : 0); j < g.dims.at(b); ++j) {
        const Bel x{a, i}, y{b, j};
        CochainVec coords(c1.dim(), Scalar(0));
        for (const Bel& u : neg) {
          GVec val = g.bracket(g.bracket_basis(x, u), GVec{{y, Scalar(1)}});
          gvec_axpy(val, Scalar(1),
                    g.bracket(GVec{{x, Scalar(1)}}, g.bracket_basis(y, u)));
          for (const auto& [s, coef] : val) {
            const int row = c1.index_of({u}, s);
            assert(row >= 0);
            coords[row] -= coef;
          }
        }
        auto sol = k.solve(coords);
        if (!sol)
          throw ComputationError("bracket extension inconsistent at pair (" +
                                 bel_name(x) + ", " + bel_name(y) + ")");
        GVec val;
        for (int s = 0; s < g.dims.at(m); ++s) gvec_add(val, Bel{m, s}, (*sol)[s]);
        if (!val.empty()) g.set_bracket(x, y, val);
      }
  }
}

GradedLieAlgebra prolong_step(const GradedLieAlgebra& g) {
  if (g.complete() || g.order() < 0)
    throw ComputationError("prolongation step requires a truncation of order >= 0");
  TransitivityReport tr = g.check_transitivity();
  if (!tr.transitive)
    throw ComputationError(
        "prolongation step requires a transitive truncation (fails at degree " +
        std::to_string(tr.failing_degree) + ")");
  const int m = g.order() + 1;

  const CochainSpace c1 = cochain_space(g, 1, m);
  const CochainSpace c2 = cochain_space(g, 2, m);
  const std::vector<CochainVec> kernel =
      coboundary_matrix(g, c1, c2).nullspace();

  GradedLieAlgebra out = g;
  out.truncation = m;
  out.dims.set(m, static_cast<int>(kernel.size()));
  for (size_t t = 0; t < kernel.size(); ++t) {
    std::map<Bel, GVec> values;  // u -> [u, xi_t]
    for (int idx = 0; idx < c1.dim(); ++idx) {
      if (is_zero(kernel[t][idx])) continue;
      gvec_add(values[c1.basis[idx].srcs[0]], c1.basis[idx].tgt, kernel[t][idx]);
    }
    for (auto& [u, val] : values)
      out.set_bracket(u, Bel{m, static_cast<int>(t)}, val);
  }
  extend_brackets(out);
  return out;
}

ProlongationResult prolong_from(const GradedLieAlgebra& g_in, int cap) {
  if (cap < 1) throw ComputationError("prolongation cap must be >= 1");
  if (g_in.complete() || g_in.order() < 0)
    throw ComputationError("prolongation requires a truncation of order >= 0");
  ProlongationResult res;
  res.cap = cap;
  GradedLieAlgebra g = g_in;
  const bool fundamental = g.is_fundamental();

  for (int m = g.order() + 1; m <= cap; ++m) {
    if (res.first_zero_degree >= 0) {
      // All higher kernels vanish over a fundamental symbol; only the bracket
      // table still needs closing at each order.
      g.truncation = m;
      extend_brackets(g);
      continue;
    }
    g = prolong_step(g);
    if (g.dims.at(m) == 0 && m >= 1 && fundamental) res.first_zero_degree = m;
  }

  if (res.first_zero_degree >= 0) {
    res.verdict = ProlongVerdict::finite_type;
  } else if (cap - 2 > g_in.order()) {
    // Growth witness: strictly increasing dims over the last three degrees
    // and injective restriction to Hom(g_{-1}, .) with stable corank.
    const int d0 = g.dims.at(cap - 2), d1 = g.dims.at(cap - 1), d2 = g.dims.at(cap);
    bool witness = d0 < d1 && d1 < d2;
    int corank[2] = {0, 0};
    for (int s = 0; witness && s < 2; ++s) {
      const int p1 = cap - 1 + s;  // restriction g_{p1} -> Hom(g_{-1}, g_{p1-1})
      const int n1 = g.dims.at(-1);
      SparseMatrix restr(n1 * g.dims.at(p1 - 1), g.dims.at(p1));
      for (int c = 0; c < g.dims.at(p1); ++c)
        for (int u = 0; u < n1; ++u)
          for (const auto& [s2, coef] : g.bracket_basis(Bel{-1, u}, Bel{p1, c})) {
            if (s2.p != p1 - 1) continue;
            restr.add(u * g.dims.at(p1 - 1) + s2.i, c, coef);
          }
      const int rank = restr.rank();
      if (rank < g.dims.at(p1)) witness = false;
      corank[s] = n1 * g.dims.at(p1 - 1) - rank;
    }
    if (witness && corank[0] == corank[1])
      res.verdict = ProlongVerdict::infinite_type_at_cap;
  }

  res.algebra = std::move(g);
  for (int p = -res.algebra.depth(); p <= cap; ++p) {
    res.dims_by_degree.emplace_back(p, res.algebra.dims.at(p));
    res.total_dim += res.algebra.dims.at(p);
  }
  return res;
}

ProlongationResult prolong_full(const GradedLieAlgebra& g_minus,
                                const DerivationAlgebra& g0, int cap) {
  return prolong_from(attach_degree0(g_minus, g0), cap);
}

ReductionResult tanaka_finite_type_reduction(const GradedLieAlgebra& g_minus,
                                             const DerivationAlgebra& g0) {
  if (!g_minus.is_fundamental())
    throw ComputationError("finite-type reduction requires a fundamental symbol");
  const int n0 = static_cast<int>(g0.basis.size());
  const int n1 = g_minus.dims.at(-1);

  // Unknown: a combination of the g_0 generators annihilating all g_p, p < -1.
  int rows = 0;
  for (int p = -g_minus.depth(); p <= -2; ++p)
    rows += g_minus.dims.at(p) * g_minus.dims.at(p);
  SparseMatrix sys(rows, n0);
  int row0 = 0;
  for (int p = -g_minus.depth(); p <= -2; ++p) {
    const int np = g_minus.dims.at(p);
    for (int s = 0; s < n0; ++s) {
      auto it = g0.basis[s].blocks.find(p);
      if (it == g0.basis[s].blocks.end()) continue;
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) sys.add(row0 + i * np + j, s, it->second[i][j]);
    }
    row0 += np * np;
  }

  ReductionResult res;
  res.f_minus.name = "reduced";
  res.f_minus.dims = GradedDims(std::map<int, int>{{-1, n1}});
  res.f_minus.truncation = -1;
  res.f0_in_g0 = sys.nullspace();
  for (const auto& coords : res.f0_in_g0) {
    Derivation d;
    d.blocks[-1].assign(n1, std::vector<Scalar>(n1, Scalar(0)));
    for (int s = 0; s < n0; ++s) {
      if (is_zero(coords[s])) continue;
      auto it = g0.basis[s].blocks.find(-1);
      if (it == g0.basis[s].blocks.end()) continue;
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          d.blocks[-1][i][j] += coords[s] * it->second[i][j];
    }
    res.f0.basis.push_back(std::move(d));
  }
  std::vector<std::string> errs = derivation_family_check(res.f_minus, res.f0);
  if (!errs.empty())
    throw ComputationError("reduced family failed validation: " + errs.front());
  return res;
}

UniversalFiberDims universal_fiber_dims(const GradedLieAlgebra& g, int ell_max) {
  const int k = g.complete() ? std::max(g.dims.top(), -1) : g.order();
  if (ell_max <= k)
    throw ComputationError("fiber recursion needs ell_max beyond the top degree");
  UniversalFiberDims out;
  out.k = k;

  std::vector<Integer> ubar(ell_max + 1, Integer(0));  // gbar_i for i >= 0
  auto dimbar = [&](int i) -> Integer {
    if (i < 0) return Integer(g.dims.at(i));
    return ubar[i];
  };
  Integer cum(0);
  for (int p = -g.depth(); p <= -1; ++p) cum += g.dims.at(p);

  for (int ell = 0; ell <= ell_max; ++ell) {
    if (ell <= k) {
      ubar[ell] = g.dims.at(ell);
    } else {
      Integer first(0);
      for (int p = -g.depth(); p <= -1; ++p)
        first += Integer(g.dims.at(p)) * dimbar(p + ell);
      Integer prior(0);
      for (int i = 0; i <= ell - 2; ++i) prior += ubar[i];
      ubar[ell] = first + prior * ubar[ell - 1];
    }
    cum += ubar[ell];
    if (ell > k) {
      out.dims.emplace_back(ell, ubar[ell]);
      out.cumulative.emplace_back(ell, cum);
    }
  }
  return out;
}

}  // namespace gs
