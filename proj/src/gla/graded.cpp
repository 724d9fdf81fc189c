#include "gla/graded.hpp"

#include <algorithm>
#include <cassert>
#include <climits>

#include "core/sparsemat.hpp"

namespace gs {

void gvec_add(GVec& v, const Bel& b, const Scalar& c) {
  if (is_zero(c)) return;
  auto it = v.find(b);
  if (it == v.end()) {
    v.emplace(b, c);
    return;
  }
  it->second += c;
  if (is_zero(it->second)) v.erase(it);
}

void gvec_axpy(GVec& v, const Scalar& a, const GVec& w) {
  if (is_zero(a)) return;
  for (const auto& [b, c] : w) gvec_add(v, b, a * c);
}

bool gvec_is_zero(const GVec& v) { return v.empty(); }

GVec gvec_degree_part(const GVec& v, int p) {
  GVec out;
  for (auto it = v.lower_bound(Bel{p, INT_MIN}); it != v.end() && it->first.p == p; ++it)
    out.insert(*it);
  return out;
}

GVec gvec_neg_part(const GVec& v) {
  GVec out;
  for (const auto& [b, c] : v)
    if (b.p < 0) out.emplace(b, c);
  return out;
}

GVec gvec_nonneg_part(const GVec& v) {
  GVec out;
  for (const auto& [b, c] : v)
    if (b.p >= 0) out.emplace(b, c);
  return out;
}

GradedDims::GradedDims(const std::map<int, int>& d) {
  for (auto& [p, n] : d)
    if (n > 0) dims_[p] = n;
}

int GradedDims::at(int p) const {
  auto it = dims_.find(p);
  return it == dims_.end() ? 0 : it->second;
}

void GradedDims::set(int p, int d) {
  if (d == 0)
    dims_.erase(p);
  else
    dims_[p] = d;
}

int GradedDims::depth() const {
  if (dims_.empty() || dims_.begin()->first >= 0) return 0;
  return -dims_.begin()->first;
}

int GradedDims::top() const {
  if (dims_.empty()) return INT_MIN;
  return dims_.rbegin()->first;
}

int GradedDims::total() const {
  int t = 0;
  for (auto& [p, n] : dims_) t += n;
  return t;
}

int GradedDims::total_in(int lo, int hi) const {
  int t = 0;
  for (auto& [p, n] : dims_)
    if (p >= lo && p <= hi) t += n;
  return t;
}

std::vector<Bel> GradedDims::basis_at(int p) const {
  std::vector<Bel> out;
  const int n = at(p);
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Bel{p, i});
  return out;
}

std::vector<Bel> GradedDims::basis_range(int lo, int hi) const {
  std::vector<Bel> out;
  for (auto& [p, n] : dims_) {
    if (p < lo || p > hi) continue;
    for (int i = 0; i < n; ++i) out.push_back(Bel{p, i});
  }
  return out;
}

bool Metric::symmetric() const {
  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) return false;
    for (size_t j = i + 1; j < n; ++j)
      if (m[i][j] != m[j][i]) return false;
  }
  return true;
}

bool Metric::nondegenerate() const {
  return !is_zero(dense_det(m));
}

bool Metric::positive_definite() const {
  const int n = static_cast<int>(m.size());
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<Scalar>> minor(k, std::vector<Scalar>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) minor[i][j] = m[i][j];
    if (sgn(dense_det(std::move(minor))) <= 0) return false;
  }
  return true;
}

int GradedLieAlgebra::order() const {
  if (truncation) return *truncation;
  return std::max(dims.top(), -1);
}

bool GradedLieAlgebra::bracket_defined(int a, int b) const {
  if (complete()) return true;
  const int k = *truncation;
  return a <= k && b <= k && a + b <= k;
}

void GradedLieAlgebra::set_bracket(const Bel& x, const Bel& y, GVec v) {
  assert(x < y);
  if (gvec_is_zero(v))
    table_.erase({x, y});
  else
    table_[{x, y}] = std::move(v);
}

GVec GradedLieAlgebra::bracket_basis(const Bel& x, const Bel& y) const {
  if (x == y) return {};
  const bool flip = y < x;
  auto it = table_.find(flip ? std::make_pair(y, x) : std::make_pair(x, y));
  if (it == table_.end()) return {};
  if (!flip) return it->second;
  GVec out;
  for (const auto& [b, c] : it->second) out.emplace(b, -c);
  return out;
}

GVec GradedLieAlgebra::bracket(const GVec& x, const GVec& y) const {
  GVec out;
  for (const auto& [bx, cx] : x)
    for (const auto& [by, cy] : y) gvec_axpy(out, cx * cy, bracket_basis(bx, by));
  return out;
}

GVec GradedLieAlgebra::bracket_basis_capped(const Bel& x, const Bel& y, int cap,
                                            bool* dropped) const {
  if (x == y) return {};
  if (x.p + y.p > cap) {
    // Target sits above the cap. For a complete algebra the full value is
    // known; dropping components above cap is a projection either way, but
    // only counts as information loss when the algebra cannot certify them.
    if (dropped && !complete() && x.p + y.p > order()) *dropped = true;
    if (bracket_defined(x.p, y.p)) {
      GVec v = bracket_basis(x, y);
      GVec out;
      for (const auto& [b, c] : v)
        if (b.p <= cap) out.emplace(b, c);
      return out;
    }
    return {};
  }
  if (!bracket_defined(x.p, y.p)) {
    if (dropped) *dropped = true;
    return {};
  }
  return bracket_basis(x, y);
}

std::vector<std::string> GradedLieAlgebra::validate_structure() const {
  std::vector<std::string> errs;
  auto ok_bel = [&](const Bel& b) { return b.i >= 0 && b.i < dims.at(b.p); };
  for (const auto& [key, v] : table_) {
    const auto& [x, y] = key;
    if (!(x < y)) errs.push_back("bracket key not in canonical order");
    if (!ok_bel(x) || !ok_bel(y)) {
      errs.push_back("bracket key references a nonexistent basis element");
      continue;
    }
    if (!bracket_defined(x.p, y.p))
      errs.push_back("bracket stored for degrees outside the truncation");
    for (const auto& [b, c] : v) {
      if (b.p != x.p + y.p) errs.push_back("bracket value violates the grading");
      if (!ok_bel(b)) errs.push_back("bracket value references a nonexistent basis element");
      if (is_zero(c)) errs.push_back("bracket stores an explicit zero");
    }
  }
  return errs;
}

std::optional<JacobiFailure> GradedLieAlgebra::check_jacobi() const {
  const int lo = -depth();
  const int hi = order();
  const std::vector<Bel> all = dims.basis_range(lo, std::max(hi, -1));
  const size_t n = all.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        const Bel &x = all[a], &y = all[b], &z = all[c];
        // All three terms must be defined to assert the identity.
        if (!complete() &&
            (!bracket_defined(x.p, y.p) || !bracket_defined(x.p + y.p, z.p) ||
             !bracket_defined(y.p, z.p) || !bracket_defined(y.p + z.p, x.p) ||
             !bracket_defined(z.p, x.p) || !bracket_defined(z.p + x.p, y.p)))
          continue;
        GVec r = bracket(bracket_basis(x, y), GVec{{z, Scalar(1)}});
        gvec_axpy(r, Scalar(1), bracket(bracket_basis(y, z), GVec{{x, Scalar(1)}}));
        gvec_axpy(r, Scalar(1), bracket(bracket_basis(z, x), GVec{{y, Scalar(1)}}));
        if (!gvec_is_zero(r)) return JacobiFailure{x, y, z, std::move(r)};
      }
  return std::nullopt;
}

TransitivityReport GradedLieAlgebra::check_transitivity() const {
  TransitivityReport rep;
  const int mu = depth();
  const std::vector<Bel> neg = dims.basis_range(-mu, -1);
  for (int i = 0; i <= order(); ++i) {
    const int di = dims.at(i);
    if (di == 0) continue;
    // Rows: (negative source u, target basis element). Columns: basis of g_i.
    std::map<std::pair<Bel, Bel>, int> row_index;
    std::vector<std::vector<std::pair<int, Scalar>>> cols(di);
    for (int c = 0; c < di; ++c) {
      const Bel ei{i, c};
      for (const Bel& u : neg) {
        GVec v = bracket_basis(ei, u);
        for (const auto& [b, coef] : v) {
          auto key = std::make_pair(u, b);
          auto [it, fresh] = row_index.emplace(key, static_cast<int>(row_index.size()));
          cols[c].emplace_back(it->second, coef);
          (void)fresh;
        }
      }
    }
    SparseMatrix m(static_cast<int>(row_index.size()), di);
    for (int c = 0; c < di; ++c)
      for (const auto& [r, coef] : cols[c]) m.add(r, c, coef);
    if (m.rank() < di) {
      rep.transitive = false;
      rep.failing_degree = i;
      auto ker = m.nullspace();
      if (!ker.empty()) rep.witness = ker.front();
      return rep;
    }
  }
  return rep;
}

bool GradedLieAlgebra::is_fundamental() const {
  const int mu = depth();
  if (mu <= 1) return true;
  const std::vector<Bel> gen = dims.basis_at(-1);
  // span_{p+1} starts as full g_{-1}; walk down, propagating actual spans.
  std::vector<GVec> span;
  for (const Bel& b : gen) span.push_back(GVec{{b, Scalar(1)}});
  for (int p = -2; p >= -mu; --p) {
    const int dp = dims.at(p);
    std::vector<GVec> next;
    SpanTracker tracker(dp);
    for (const Bel& u : gen)
      for (const GVec& w : span) {
        GVec v = bracket(GVec{{u, Scalar(1)}}, w);
        if (gvec_is_zero(v)) continue;
        std::vector<Scalar> coords(dp, Scalar(0));
        for (const auto& [b, c] : v) {
          assert(b.p == p);
          coords[b.i] = c;
        }
        if (tracker.absorb(coords)) next.push_back(std::move(v));
      }
    if (tracker.rank() < dp) return false;
    span = std::move(next);
  }
  return true;
}

GVec Derivation::apply(const Bel& b) const {
  GVec out;
  auto it = blocks.find(b.p);
  if (it == blocks.end()) return out;
  const auto& m = it->second;
  for (size_t r = 0; r < m.size(); ++r)
    gvec_add(out, Bel{b.p, static_cast<int>(r)}, m[r][b.i]);
  return out;
}

std::vector<Scalar> Derivation::flat(const GradedDims& dims) const {
  std::vector<Scalar> out;
  for (const auto& [p, n] : dims.map()) {
    if (p >= 0) continue;
    auto it = blocks.find(p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out.push_back(it == blocks.end() ? Scalar(0) : it->second[r][c]);
  }
  return out;
}

namespace {

/// Unknown layout for degree-0 derivation systems: for each negative degree p
/// (ascending) an n_p x n_p block, row-major.
struct DerLayout {
  std::vector<std::pair<int, int>> deg_dim;  // (p, n_p), ascending p
  std::map<int, int> offset;
  int total = 0;

  explicit DerLayout(const GradedDims& dims) {
    for (const auto& [p, n] : dims.map()) {
      if (p >= 0) continue;
      offset[p] = total;
      deg_dim.emplace_back(p, n);
      total += n * n;
    }
  }
  int var(int p, int r, int c) const {
    auto it = offset.find(p);
    assert(it != offset.end());
    int n = 0;
    for (auto& [q, m] : deg_dim)
      if (q == p) n = m;
    return it->second + r * n + c;
  }
  Derivation unpack(const std::vector<Scalar>& x) const {
    Derivation d;
    for (const auto& [p, n] : deg_dim) {
      auto& m = d.blocks[p];
      m.assign(n, std::vector<Scalar>(n, Scalar(0)));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m[r][c] = x[var(p, r, c)];
    }
    return d;
  }
};

Derivation der_commutator(const Derivation& a, const Derivation& b) {
  Derivation out;
  for (const auto& [p, ma] : a.blocks) {
    auto it = b.blocks.find(p);
    if (it == b.blocks.end()) continue;
    const auto& mb = it->second;
    const int n = static_cast<int>(ma.size());
    auto& m = out.blocks[p];
    m.assign(n, std::vector<Scalar>(n, Scalar(0)));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        Scalar s(0);
        for (int t = 0; t < n; ++t) s += ma[r][t] * mb[t][c] - mb[r][t] * ma[t][c];
        m[r][c] = s;
      }
  }
  return out;
}

/// Expresses v in the span of the family (columns); nullopt if outside.
std::optional<std::vector<Scalar>> in_family_span(
    const std::vector<std::vector<Scalar>>& family, const std::vector<Scalar>& v) {
  if (family.empty()) {
    for (const auto& c : v)
      if (!is_zero(c)) return std::nullopt;
    return std::vector<Scalar>{};
  }
  const int dim = static_cast<int>(family[0].size());
  SparseMatrix m(dim, static_cast<int>(family.size()));
  for (size_t j = 0; j < family.size(); ++j)
    for (int r = 0; r < dim; ++r) m.add(r, static_cast<int>(j), family[j][r]);
  return m.solve(v);
}

}  // namespace

DerivationAlgebra derivations_degree0(const GradedLieAlgebra& g_minus,
                                      const Metric* metric) {
  const GradedDims& dims = g_minus.dims;
  const int mu = dims.depth();
  DerLayout layout(dims);

  // Rows: one per (bracket pair (u,v), target coordinate t) plus metric rows.
  std::vector<std::vector<std::pair<int, Scalar>>> rows;
  auto new_row = [&]() -> std::vector<std::pair<int, Scalar>>& {
    rows.emplace_back();
    return rows.back();
  };

  const std::vector<Bel> neg = dims.basis_range(-mu, -1);
  for (size_t a = 0; a < neg.size(); ++a)
    for (size_t b = a + 1; b < neg.size(); ++b) {
      const Bel &u = neg[a], &v = neg[b];
      const int tp = u.p + v.p;
      if (tp < -mu) continue;  // target space is zero on both sides
      const GVec uv = g_minus.bracket_basis(u, v);
      const int nt = dims.at(tp);
      for (int t = 0; t < nt; ++t) {
        auto& row = new_row();
        // A([u,v])_t
        for (const auto& [w, c] : uv) row.emplace_back(layout.var(tp, t, w.i), c);
        // -[A u, v]_t - [u, A v]_t
        for (int r = 0; r < dims.at(u.p); ++r) {
          GVec br = g_minus.bracket_basis(Bel{u.p, r}, v);
          auto it = br.find(Bel{tp, t});
          if (it != br.end()) row.emplace_back(layout.var(u.p, r, u.i), -it->second);
        }
        for (int r = 0; r < dims.at(v.p); ++r) {
          GVec br = g_minus.bracket_basis(u, Bel{v.p, r});
          auto it = br.find(Bel{tp, t});
          if (it != br.end()) row.emplace_back(layout.var(v.p, r, v.i), -it->second);
        }
      }
    }

  if (metric) {
    const int n = dims.at(-1);
    // (M A + A^T M)_{ij} = 0, i <= j.
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        auto& row = new_row();
        for (int t = 0; t < n; ++t) {
          if (!is_zero(metric->m[i][t])) row.emplace_back(layout.var(-1, t, j), metric->m[i][t]);
          if (!is_zero(metric->m[t][j])) row.emplace_back(layout.var(-1, t, i), metric->m[t][j]);
        }
      }
  }

  SparseMatrix m(static_cast<int>(rows.size()), layout.total);
  for (size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, val] : rows[r]) m.add(static_cast<int>(r), c, val);

  DerivationAlgebra out;
  for (const auto& x : m.nullspace()) out.basis.push_back(layout.unpack(x));

  // Commutator table: the family is a Lie algebra, so expressing [a,b] in the
  // basis must succeed.
  std::vector<std::vector<Scalar>> flats;
  for (const auto& d : out.basis) flats.push_back(d.flat(dims));
  for (size_t i = 0; i < out.basis.size(); ++i)
    for (size_t j = i + 1; j < out.basis.size(); ++j) {
      Derivation c = der_commutator(out.basis[i], out.basis[j]);
      auto coords = in_family_span(flats, c.flat(dims));
      assert(coords.has_value());
      out.comm[{static_cast<int>(i), static_cast<int>(j)}] = std::move(*coords);
    }
  return out;
}

std::vector<std::string> derivation_family_check(const GradedLieAlgebra& g_minus,
                                                 DerivationAlgebra& fam) {
  std::vector<std::string> errs;
  const GradedDims& dims = g_minus.dims;
  const int mu = dims.depth();
  const std::vector<Bel> neg = dims.basis_range(-mu, -1);

  for (size_t k = 0; k < fam.basis.size(); ++k) {
    const Derivation& A = fam.basis[k];
    for (const auto& [p, n] : dims.map()) {
      if (p >= 0) continue;
      auto it = A.blocks.find(p);
      if (it == A.blocks.end()) continue;
      if (static_cast<int>(it->second.size()) != n) {
        errs.push_back("generator " + std::to_string(k) + ": block at degree " +
                       std::to_string(p) + " has wrong shape");
        return errs;
      }
      for (const auto& row : it->second)
        if (static_cast<int>(row.size()) != n) {
          errs.push_back("generator " + std::to_string(k) + ": block at degree " +
                         std::to_string(p) + " has wrong shape");
          return errs;
        }
    }
    for (size_t a = 0; a < neg.size(); ++a)
      for (size_t b = a + 1; b < neg.size(); ++b) {
        const Bel &u = neg[a], &v = neg[b];
        GVec lhs;
        for (const auto& [w, c] : g_minus.bracket_basis(u, v))
          gvec_axpy(lhs, c, A.apply(w));
        GVec rhs = g_minus.bracket(A.apply(u), GVec{{v, Scalar(1)}});
        gvec_axpy(rhs, Scalar(1), g_minus.bracket(GVec{{u, Scalar(1)}}, A.apply(v)));
        gvec_axpy(lhs, Scalar(-1), rhs);
        if (!gvec_is_zero(lhs)) {
          errs.push_back("generator " + std::to_string(k) +
                         " is not a degree-0 derivation");
          break;
        }
      }
  }
  if (!errs.empty()) return errs;

  std::vector<std::vector<Scalar>> flats;
  SpanTracker tracker(fam.basis.empty() ? 1 : static_cast<int>(fam.basis[0].flat(dims).size()));
  for (size_t k = 0; k < fam.basis.size(); ++k) {
    flats.push_back(fam.basis[k].flat(dims));
    if (!tracker.absorb(flats.back()))
      errs.push_back("generator " + std::to_string(k) + " is linearly dependent");
  }
  if (!errs.empty()) return errs;

  for (size_t i = 0; i < fam.basis.size(); ++i)
    for (size_t j = i + 1; j < fam.basis.size(); ++j) {
      Derivation c = der_commutator(fam.basis[i], fam.basis[j]);
      auto coords = in_family_span(flats, c.flat(dims));
      if (!coords) {
        errs.push_back("family is not closed under commutator at pair (" +
                       std::to_string(i) + "," + std::to_string(j) + ")");
        return errs;
      }
      fam.comm[{static_cast<int>(i), static_cast<int>(j)}] = std::move(*coords);
    }
  return errs;
}

GradedLieAlgebra attach_degree0(const GradedLieAlgebra& g_minus,
                                const DerivationAlgebra& g0) {
  GradedLieAlgebra g;
  g.name = g_minus.name;
  g.dims = g_minus.dims;
  g.dims.set(0, static_cast<int>(g0.basis.size()));
  g.truncation = 0;
  for (const auto& [key, v] : g_minus.table()) g.set_bracket(key.first, key.second, v);
  // [u, A] = -A(u); stored with the negative element first (canonical order).
  for (size_t k = 0; k < g0.basis.size(); ++k) {
    const Bel A{0, static_cast<int>(k)};
    for (const Bel& u : g_minus.dims.basis_range(-g_minus.depth(), -1)) {
      GVec v = g0.basis[k].apply(u);
      GVec neg;
      for (const auto& [b, c] : v) neg.emplace(b, -c);
      g.set_bracket(u, A, std::move(neg));
    }
  }
  for (const auto& [ij, coords] : g0.comm) {
    GVec v;
    for (size_t t = 0; t < coords.size(); ++t)
      gvec_add(v, Bel{0, static_cast<int>(t)}, coords[t]);
    g.set_bracket(Bel{0, ij.first}, Bel{0, ij.second}, std::move(v));
  }
  return g;
}

}  // namespace gs
