#include "spencer/spencer.hpp"

#include <algorithm>
#include <cassert>
#include <climits>

#include "core/error.hpp"

namespace gs {

namespace {

/// All strictly increasing q-tuples from `pool`, lexicographic order.
std::vector<std::vector<Bel>> combinations(const std::vector<Bel>& pool, int q) {
  std::vector<std::vector<Bel>> out;
  const int n = static_cast<int>(pool.size());
  if (q < 0 || q > n) return out;
  if (q == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  while (true) {
    std::vector<Bel> tup(q);
    for (int i = 0; i < q; ++i) tup[i] = pool[idx[i]];
    out.push_back(std::move(tup));
    int i = q - 1;
    while (i >= 0 && idx[i] == n - q + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Inserts b into the strictly increasing wedge `w` (not containing b),
/// returning the sign of the permutation, or 0 if b already occurs.
int wedge_insert(std::vector<Bel>& w, const Bel& b) {
  auto it = std::lower_bound(w.begin(), w.end(), b);
  if (it != w.end() && *it == b) return 0;
  const int pos = static_cast<int>(it - w.begin());
  w.insert(it, b);
  return pos % 2 == 0 ? 1 : -1;
}

}  // namespace

int CochainSpace::index_of(const std::vector<Bel>& srcs, const Bel& tgt) const {
  CochainBasisEl key{srcs, tgt};
  auto it = std::lower_bound(basis.begin(), basis.end(), key);
  if (it == basis.end() || !(*it == key)) return -1;
  return static_cast<int>(it - basis.begin());
}

bool cochain_space_representable(const GradedLieAlgebra& g, int q, int r) {
  if (g.complete()) return true;
  if (q < 0) return true;
  const std::vector<Bel> neg = g.dims.basis_range(-g.depth(), -1);
  if (q > static_cast<int>(neg.size())) return true;  // zero space
  int sum_max = 0;
  for (int i = 0; i < q; ++i) sum_max += neg[neg.size() - 1 - i].p;
  return sum_max + r <= g.order();
}

CochainSpace cochain_space(const GradedLieAlgebra& g, int q, int r) {
  if (!cochain_space_representable(g, q, r))
    throw ComputationError("cochain space (" + std::to_string(q) + ", " +
                           std::to_string(r) +
                           ") exceeds the truncation of " + g.name);
  CochainSpace sp;
  sp.q = q;
  sp.r = r;
  const std::vector<Bel> neg = g.dims.basis_range(-g.depth(), -1);
  for (auto& wedge : combinations(neg, q)) {
    int sum = 0;
    for (const Bel& b : wedge) sum += b.p;
    const int c = sum + r;
    const int nt = g.dims.at(c);
    for (int t = 0; t < nt; ++t) sp.basis.push_back(CochainBasisEl{wedge, Bel{c, t}});
  }
  assert(std::is_sorted(sp.basis.begin(), sp.basis.end()));
  return sp;
}

SparseMatrix coboundary_matrix(const GradedLieAlgebra& g, const CochainSpace& from,
                               const CochainSpace& to) {
  assert(to.q == from.q + 1 && to.r == from.r);
  SparseMatrix m(to.dim(), from.dim());
  const std::vector<Bel> neg = g.dims.basis_range(-g.depth(), -1);

  for (auto& wedge : combinations(neg, to.q)) {
    // First family: (-1)^{i+1} [v_i, c(... v_i dropped ...)].
    for (int i = 0; i < to.q; ++i) {
      const Bel vi = wedge[i];
      std::vector<Bel> rest;
      rest.reserve(to.q - 1);
      for (int j = 0; j < to.q; ++j)
        if (j != i) rest.push_back(wedge[j]);
      const int sign = (i % 2 == 0) ? 1 : -1;  // (-1)^{i+1}, i one-based
      // Columns supported on this wedge: (rest, t) over all targets t.
      int sum = 0;
      for (const Bel& b : rest) sum += b.p;
      const int tc = sum + from.r;
      for (int t = 0; t < g.dims.at(tc); ++t) {
        const int col = from.index_of(rest, Bel{tc, t});
        if (col < 0) continue;
        for (const auto& [s, coef] : g.bracket_basis(vi, Bel{tc, t})) {
          const int row = to.index_of(wedge, s);
          assert(row >= 0);
          m.add(row, col, Scalar(sign) * coef);
        }
      }
    }
    // Second family: (-1)^{i+j} c([v_i, v_j] ^ rest), positions one-based;
    // zero-based i, j preserve the parity of i + j.
    for (int i = 0; i < to.q; ++i)
      for (int j = i + 1; j < to.q; ++j) {
        const int sign = ((i + j) % 2 == 0) ? 1 : -1;
        const GVec bruv = g.bracket_basis(wedge[i], wedge[j]);
        if (bruv.empty()) continue;
        std::vector<Bel> rest;
        rest.reserve(to.q - 2);
        for (int t = 0; t < to.q; ++t)
          if (t != i && t != j) rest.push_back(wedge[t]);
        for (const auto& [w, coef] : bruv) {
          std::vector<Bel> srcs = rest;
          const int perm = wedge_insert(srcs, w);
          if (perm == 0) continue;
          int sum = 0;
          for (const Bel& b : srcs) sum += b.p;
          const int tc = sum + from.r;
          for (int t = 0; t < g.dims.at(tc); ++t) {
            const int col = from.index_of(srcs, Bel{tc, t});
            if (col < 0) continue;
            const int row = to.index_of(wedge, Bel{tc, t});
            assert(row >= 0);
            m.add(row, col, Scalar(sign * perm) * coef);
          }
        }
      }
  }
  return m;
}

int cohomology_dim(const GradedLieAlgebra& g, int q, int r) {
  if (q < 0) return 0;
  CochainSpace cq = cochain_space(g, q, r);
  CochainSpace cq1 = cochain_space(g, q + 1, r);
  const int rank_out = coboundary_matrix(g, cq, cq1).rank();
  int rank_in = 0;
  if (q >= 1) {
    CochainSpace cqm = cochain_space(g, q - 1, r);
    rank_in = coboundary_matrix(g, cqm, cq).rank();
  }
  return cq.dim() - rank_out - rank_in;
}

namespace {

/// W = orthogonal complement of the column space of `img` inside R^n, i.e.
/// the nullspace of img^T under the coordinate inner product.
std::vector<CochainVec> ortho_complement(const SparseMatrix& img) {
  SparseMatrix t(img.cols(), img.rows());
  for (int r = 0; r < img.rows(); ++r)
    for (const auto& [c, v] : img.row(r)) t.add(c, r, v);
  return t.nullspace();
}

}  // namespace

ComplementChoice complement_select(const GradedLieAlgebra& g, int lo, int hi) {
  ComplementChoice out;
  out.lo = lo;
  out.hi = hi;
  for (int ell = lo; ell <= hi; ++ell) {
    ComplementAt at;
    at.ell = ell;
    CochainSpace c0 = cochain_space(g, 0, ell);
    at.c1 = cochain_space(g, 1, ell);
    at.c2 = cochain_space(g, 2, ell);
    SparseMatrix d0 = coboundary_matrix(g, c0, at.c1);
    SparseMatrix d1 = coboundary_matrix(g, at.c1, at.c2);
    at.rank_d0 = d0.rank();
    at.rank_d1 = d1.rank();
    at.w1 = ortho_complement(d0);
    at.w2 = ortho_complement(d1);
    out.at.push_back(std::move(at));
  }
  return out;
}

std::optional<ComplementFailure> complement_verify(const GradedLieAlgebra& g,
                                                   const ComplementChoice& choice) {
  for (const auto& at : choice.at) {
    CochainSpace c0 = cochain_space(g, 0, at.ell);
    CochainSpace c1 = cochain_space(g, 1, at.ell);
    CochainSpace c2 = cochain_space(g, 2, at.ell);
    SparseMatrix d0 = coboundary_matrix(g, c0, c1);
    SparseMatrix d1 = coboundary_matrix(g, c1, c2);

    auto check = [&](const SparseMatrix& img, const std::vector<CochainVec>& w,
                     int ambient, const char* which) -> std::optional<ComplementFailure> {
      const int rank_img = img.rank();
      // Stack image columns and W columns; exact direct sum iff the combined
      // rank is rank_img + |W| and that sum fills the ambient space.
      SparseMatrix stacked(ambient, img.cols() + static_cast<int>(w.size()));
      for (int r = 0; r < img.rows(); ++r)
        for (const auto& [c, v] : img.row(r)) stacked.add(r, c, v);
      for (size_t j = 0; j < w.size(); ++j) {
        if (static_cast<int>(w[j].size()) != ambient)
          return ComplementFailure{at.ell, which, "dimension mismatch"};
        for (int r = 0; r < ambient; ++r)
          stacked.add(r, img.cols() + static_cast<int>(j), w[j][r]);
      }
      const int rank_all = stacked.rank();
      if (rank_all < rank_img + static_cast<int>(w.size()))
        return ComplementFailure{at.ell, which, "nontrivial intersection"};
      if (rank_all != ambient)
        return ComplementFailure{at.ell, which, "dimension mismatch"};
      return std::nullopt;
    };

    if (auto f = check(d0, at.w1, c1.dim(), "W1")) return f;
    if (auto f = check(d1, at.w2, c2.dim(), "W2")) return f;
  }
  return std::nullopt;
}

namespace {

/// Evaluates the cochain (coords in sp) on the given arguments: sorts them into
/// a canonical wedge with sign, then sums matching targets.
GVec eval_cochain(const CochainSpace& sp, const CochainVec& coords,
                  std::vector<Bel> args) {
  int sign = 1;
  for (size_t i = 1; i < args.size(); ++i)
    for (size_t j = i; j > 0 && args[j] < args[j - 1]; --j) {
      std::swap(args[j], args[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < args.size(); ++i)
    if (args[i] == args[i - 1]) return {};
  GVec out;
  CochainBasisEl lo{args, Bel{INT_MIN, 0}};
  for (auto it = std::lower_bound(sp.basis.begin(), sp.basis.end(), lo);
       it != sp.basis.end() && it->srcs == args; ++it) {
    const int idx = static_cast<int>(it - sp.basis.begin());
    if (!is_zero(coords[idx])) gvec_add(out, it->tgt, Scalar(sign) * coords[idx]);
  }
  return out;
}

}  // namespace

CochainVec rho_action_2cochain(const GradedLieAlgebra& g, const Bel& A,
                               const CochainSpace& c2, const CochainVec& c) {
  CochainVec out(c2.dim(), Scalar(0));
  // Walk distinct wedges of c2 (grouped in the sorted basis).
  size_t i = 0;
  while (i < c2.basis.size()) {
    const std::vector<Bel>& wedge = c2.basis[i].srcs;
    const Bel &X = wedge[0], &Y = wedge[1];
    GVec val;
    // [A, c(X, Y)]
    for (const auto& [t, coef] : eval_cochain(c2, c, {X, Y}))
      gvec_axpy(val, coef, g.bracket_basis(A, t));
    // - c([A, X], Y) - c(X, [A, Y])
    for (const auto& [u, coef] : g.bracket_basis(A, X))
      gvec_axpy(val, -coef, eval_cochain(c2, c, {u, Y}));
    for (const auto& [u, coef] : g.bracket_basis(A, Y))
      gvec_axpy(val, -coef, eval_cochain(c2, c, {X, u}));
    // Scatter into coordinates.
    for (const auto& [t, coef] : val) {
      const int idx = c2.index_of(wedge, t);
      assert(idx >= 0);
      out[idx] = coef;
    }
    while (i < c2.basis.size() && c2.basis[i].srcs == wedge) ++i;
  }
  return out;
}

ConditionCReport condition_c_check(const GradedLieAlgebra& g,
                                   const ComplementChoice& choice) {
  ConditionCReport rep;
  rep.lo = choice.lo;
  rep.hi = choice.hi;
  const int d0 = g.dims.at(0);
  for (const auto& at : choice.at) {
    if (at.w2.empty()) continue;
    const int ambient = at.c2.dim();
    SparseMatrix span(ambient, static_cast<int>(at.w2.size()));
    for (size_t j = 0; j < at.w2.size(); ++j)
      for (int r = 0; r < ambient; ++r)
        span.add(r, static_cast<int>(j), at.w2[j][r]);
    for (int a = 0; a < d0; ++a) {
      for (size_t j = 0; j < at.w2.size(); ++j) {
        CochainVec moved = rho_action_2cochain(g, Bel{0, a}, at.c2, at.w2[j]);
        if (!span.solve(moved).has_value()) {
          rep.holds = false;
          rep.witnesses.push_back(ConditionCWitness{at.ell, a, static_cast<int>(j)});
        }
      }
    }
  }
  return rep;
}

IndexSets invariant_index_sets(const GradedLieAlgebra& g, int cap) {
  IndexSets out;
  out.cap = cap;
  const int mu = g.depth();
  const int top = g.complete() ? std::max(g.dims.top(), -mu) : g.order();

  // H^1_r needs C^0_r through C^2_r; C^0_r is the binding space under a
  // truncation (largest value degree), likewise C^1_r for H^2_r.
  for (int r = -1; r <= cap; ++r) {
    if (!g.complete() && !cochain_space_representable(g, 0, r)) break;
    out.h1.emplace_back(r, cohomology_dim(g, 1, r));
  }
  for (int r = 0; r <= cap; ++r) {
    if (!g.complete() && !cochain_space_representable(g, 1, r)) break;
    out.h2.emplace_back(r, cohomology_dim(g, 2, r));
  }

  auto dim_h1 = [&](int r) -> int {
    for (auto& [rr, d] : out.h1)
      if (rr == r) return d;
    return 0;
  };
  for (auto& [r, d] : out.h1) {
    if (d == 0) continue;
    if (r >= 1) out.i1_intro.push_back(r);
    out.r0 = out.r0 ? std::max(*out.r0, r) : r;
  }
  for (int i = 0; i <= cap; ++i)
    if (dim_h1(i - 1) != 0) out.i1_section.push_back(i);
  for (auto& [r, d] : out.h2) {
    if (d == 0) continue;
    if (r >= 1) out.i2_intro.push_back(r);
    out.i2_section.push_back(r);  // section convention: i >= 0
    out.r0 = out.r0 ? std::max(*out.r0, r) : r;
  }

  out.scan_complete_h1 = g.complete() && cap >= top + mu;
  out.scan_complete_h2 = g.complete() && cap >= top + 2 * mu;
  return out;
}

QuasiInvolutivityReport quasi_involutive(const GradedLieAlgebra& g, int ell, int cap) {
  QuasiInvolutivityReport rep;
  rep.ell = ell;
  rep.checked_to = cap;
  for (int r = ell; r <= cap; ++r) {
    if (!g.complete() && !cochain_space_representable(g, 0, r)) {
      rep.checked_to = r - 1;
      break;
    }
    if (cohomology_dim(g, 1, r) != 0) {
      rep.holds_in_range = false;
      rep.failing_r = r;
      return rep;
    }
  }
  for (int s = ell + 1; s <= cap; ++s) {
    if (!g.complete() && !cochain_space_representable(g, 1, s)) {
      rep.checked_to = std::min(rep.checked_to, s - 1);
      break;
    }
    if (cohomology_dim(g, 2, s) != 0) {
      rep.holds_in_range = false;
      rep.failing_r = s;
      return rep;
    }
  }
  const int mu = g.depth();
  const int top = g.complete() ? std::max(g.dims.top(), -mu) : g.order();
  rep.certified = g.complete() && rep.checked_to >= top + 2 * mu && rep.holds_in_range;
  return rep;
}

}  // namespace gs
