#include "models/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace gs {

namespace {

GVec to_vec(const Bel& b) { return GVec{{b, Scalar(1)}}; }

std::string bel_str(const Bel& b) {
  std::ostringstream os;
  os << "(" << b.p << "," << b.i << ")";
  return os.str();
}

/// Base bracket on sparse vectors; counts undefined truncation pairs.
GVec bracket_sh(const GradedLieAlgebra& g, const GVec& u, const GVec& v,
                long* shadow) {
  GVec out;
  for (const auto& [bu, cu] : u)
    for (const auto& [bv, cv] : v) {
      if (!g.bracket_defined(bu.p, bv.p)) {
        if (shadow) ++*shadow;
        continue;
      }
      gvec_axpy(out, cu * cv, g.bracket_basis(bu, bv));
    }
  return out;
}

}  // namespace

GammaPart gamma_part(int a, int b) {
  if (a < 0 && b < 0) return GammaPart::I;
  if (a >= 0 && b >= 0) return GammaPart::III;
  return GammaPart::II;
}

BiGrade bigrade(int a, int b, int c) {
  const int am = std::min(a, -1);
  const int bm = std::min(b, -1);
  return BiGrade{c - a - b, c - am - bm};
}

ConstantStructure ConstantStructure::from_bracket(const GradedLieAlgebra& g) {
  ConstantStructure cs;
  cs.base = g;
  cs.name = g.name;
  const int mu = g.dims.depth();
  const int N = g.order();
  std::vector<Bel> all = g.dims.basis_range(-mu, N);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      if (!g.bracket_defined(all[i].p, all[j].p)) continue;
      GVec v = g.bracket_basis(all[i], all[j]);
      if (!gvec_is_zero(v)) cs.table_[{all[i], all[j]}] = std::move(v);
    }
  return cs;
}

GVec ConstantStructure::apply(const Bel& x, const Bel& y) const {
  if (x == y) return {};
  const bool flip = y < x;
  auto it = table_.find(flip ? std::make_pair(y, x) : std::make_pair(x, y));
  if (it == table_.end()) return {};
  if (!flip) return it->second;
  GVec out;
  for (const auto& [b, c] : it->second) out.emplace(b, -c);
  return out;
}

GVec ConstantStructure::apply(const GVec& u, const GVec& v) const {
  GVec out;
  for (const auto& [bu, cu] : u)
    for (const auto& [bv, cv] : v) gvec_axpy(out, cu * cv, apply(bu, bv));
  return out;
}

GVec ConstantStructure::shift(int delta, const GVec& u, const GVec& v,
                              long* shadow) const {
  GVec out;
  const int N = order();
  const int mu = depth();
  const bool trunc = !base.complete();
  for (const auto& [bu, cu] : u)
    for (const auto& [bv, cv] : v) {
      const int t = bu.p + bv.p + delta;
      if (t < -mu) continue;
      if (t > N) {
        if (trunc && shadow) ++*shadow;
        continue;
      }
      gvec_axpy(out, cu * cv, gvec_degree_part(apply(bu, bv), t));
    }
  return out;
}

void ConstantStructure::add(const Bel& x, const Bel& y, const GVec& v) {
  if (x == y) throw ComputationError("structure function is alternating");
  if (y < x) {
    GVec neg;
    for (const auto& [b, c] : v) neg.emplace(b, -c);
    add(y, x, neg);
    return;
  }
  for (const auto& [b, c] : v) {
    (void)c;
    if (b.p < -depth() || b.p > order() || b.i < 0 || b.i >= base.dims.at(b.p))
      throw ComputationError("structure function value leaves the truncation at " +
                             bel_str(b));
  }
  GVec& slot = table_[{x, y}];
  gvec_axpy(slot, Scalar(1), v);
  if (gvec_is_zero(slot)) table_.erase({x, y});
}

void ConstantStructure::set(const Bel& x, const Bel& y, GVec v) {
  GVec cur = apply(x, y);
  GVec neg;
  for (const auto& [b, c] : cur) neg.emplace(b, -c);
  add(x, y, neg);
  add(x, y, v);
}

GammaSlices decompose(const ConstantStructure& gamma) {
  GammaSlices out;
  for (const auto& [key, val] : gamma.table()) {
    const GammaPart part = gamma_part(key.first.p, key.second.p);
    for (const auto& [b, c] : val) {
      const BiGrade bg = bigrade(key.first.p, key.second.p, b.p);
      out.slices[{part, bg.r, bg.s}][key].emplace(b, c);
    }
  }
  return out;
}

bool GammaSlices::reassembles(const ConstantStructure& gamma) const {
  std::map<std::pair<Bel, Bel>, GVec> acc;
  for (const auto& [key, sub] : slices)
    for (const auto& [pair, val] : sub) gvec_axpy(acc[pair], Scalar(1), val);
  for (auto it = acc.begin(); it != acc.end();)
    it = gvec_is_zero(it->second) ? acc.erase(it) : std::next(it);
  return acc == gamma.table();
}

AdmissibilityReport check_admissible(const ConstantStructure& gamma) {
  AdmissibilityReport rep;
  std::set<std::tuple<std::string, int, int, int>> seen;
  auto emit = [&](std::vector<AdmissibilityViolation>& list, const std::string& what,
                  int a, int b, int c) {
    if (!seen.insert({what, a, b, c}).second) return;
    list.push_back({what, a, b, c});
  };

  for (const auto& [key, val] : gamma.table()) {
    const int a = key.first.p;
    const int b = key.second.p;
    const GammaPart part = gamma_part(a, b);
    for (const auto& [tgt, coef] : val) {
      (void)coef;
      const int c = tgt.p;
      const int r = c - a - b;
      if (part == GammaPart::I && r < 0)
        emit(rep.violations, "kappa slice of negative degree", a, b, c);
      if (part == GammaPart::II && r < 0)
        emit(rep.violations, "tau slice of negative degree", a, b, c);
      if (part == GammaPart::III) {
        if (c < std::max(a, b) - 1)
          emit(rep.violations, "sigma component below degree bound", a, b, c);
        if (c < std::max(a, b))
          emit(rep.normality_violations, "sigma component below normal bound", a,
               b, c);
      }
    }
  }

  // Degree-0 slices must reproduce the bracket (kappa_0) and the action
  // (tau_0) of the base.
  const int mu = gamma.depth();
  const int N = gamma.order();
  std::vector<Bel> negs = gamma.base.dims.basis_range(-mu, -1);
  std::vector<Bel> poss = gamma.base.dims.basis_range(0, N);
  for (size_t i = 0; i < negs.size(); ++i)
    for (size_t j = i + 1; j < negs.size(); ++j) {
      GVec diff = gamma.shift(0, to_vec(negs[i]), to_vec(negs[j]));
      gvec_axpy(diff, Scalar(-1), gamma.base.bracket_basis(negs[i], negs[j]));
      if (!gvec_is_zero(diff))
        emit(rep.violations, "kappa_0 differs from the bracket", negs[i].p,
             negs[j].p, negs[i].p + negs[j].p);
    }
  for (const Bel& x : negs)
    for (const Bel& A : poss) {
      if (!gamma.base.bracket_defined(x.p, A.p)) continue;
      GVec diff = gamma.shift(0, to_vec(x), to_vec(A));
      gvec_axpy(diff, Scalar(-1), gamma.base.bracket_basis(x, A));
      if (!gvec_is_zero(diff))
        emit(rep.violations, "tau_0 differs from the action", x.p, A.p, x.p + A.p);
    }

  rep.admissible = rep.violations.empty();
  rep.normal = rep.normality_violations.empty();
  return rep;
}

GVec bianchi_at(const ConstantStructure& gamma, const GVec& x, const GVec& y,
                const GVec& z) {
  GVec out = gamma.apply(gamma.apply(x, y), z);
  gvec_axpy(out, Scalar(1), gamma.apply(gamma.apply(y, z), x));
  gvec_axpy(out, Scalar(1), gamma.apply(gamma.apply(z, x), y));
  return out;
}

GVec bianchi_at(const ConstantStructure& gamma, const Bel& x, const Bel& y,
                const Bel& z) {
  return bianchi_at(gamma, to_vec(x), to_vec(y), to_vec(z));
}

BianchiResidual bianchi_residual(const ConstantStructure& gamma) {
  BianchiResidual out;
  std::vector<Bel> all =
      gamma.base.dims.basis_range(-gamma.depth(), gamma.order());
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      for (size_t l = j + 1; l < all.size(); ++l) {
        GVec v = bianchi_at(gamma, all[i], all[j], all[l]);
        if (!gvec_is_zero(v)) out.entries[{all[i], all[j], all[l]}] = std::move(v);
      }
  return out;
}

std::optional<std::array<Bel, 3>> BianchiResidual::witness() const {
  if (entries.empty()) return std::nullopt;
  return entries.begin()->first;
}

GVec residual1(const ConstantStructure& gamma, const Bel& X, const Bel& Y,
               const Bel& Z, int k, SumBounds bounds, long* shadow) {
  const int mu = gamma.depth();
  const int N = gamma.order();
  const std::array<std::array<Bel, 3>, 3> rot = {
      {{X, Y, Z}, {Y, Z, X}, {Z, X, Y}}};
  GVec res;
  for (const auto& r : rot) {
    const GVec u = to_vec(r[0]), v = to_vec(r[1]), w = to_vec(r[2]);
    // Spencer differential of the shift-k slice, cyclic part.
    gvec_axpy(res, Scalar(1),
              bracket_sh(gamma.base, u, gamma.shift(k, v, w, shadow), shadow));
    gvec_axpy(res, Scalar(-1),
              gamma.shift(k, bracket_sh(gamma.base, u, v, shadow), w, shadow));
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = 1;
      hi = k - 1;
    } else {
      lo = -mu - r[0].p - r[1].p;
      hi = N - r[0].p - r[1].p;
    }
    for (int d2 = lo; d2 <= hi; ++d2) {
      const int d1 = k - d2;
      if (d1 == 0 || d2 == 0) continue;
      const GVec inner = gamma.shift(d2, u, v, shadow);
      gvec_axpy(res, Scalar(-1),
                gamma.shift(d1, gvec_neg_part(inner), w, shadow));
      gvec_axpy(res, Scalar(-1),
                gamma.shift(d1, gvec_nonneg_part(inner), w, shadow));
    }
  }
  return res;
}

GVec residual2(const ConstantStructure& gamma, const Bel& A, const Bel& X,
               const Bel& Y, int d, SumBounds bounds, long* shadow) {
  if (d < 0) return {};
  const int a = A.p;
  const int mu = gamma.depth();
  const int N = gamma.order();
  const GVec Av = to_vec(A), Xv = to_vec(X), Yv = to_vec(Y);

  GVec res = bracket_sh(gamma.base, Xv, gamma.shift(d, Av, Yv, shadow), shadow);
  gvec_axpy(res, Scalar(-1),
            bracket_sh(gamma.base, Yv, gamma.shift(d, Av, Xv, shadow), shadow));
  gvec_axpy(res, Scalar(-1),
            gamma.shift(d, Av, bracket_sh(gamma.base, Xv, Yv, shadow), shadow));

  const GVec kd = gamma.shift(d, Xv, Yv, shadow);
  const GVec kdp = gvec_nonneg_part(kd);
  const GVec AX = bracket_sh(gamma.base, Av, Xv, shadow);
  const GVec AY = bracket_sh(gamma.base, Av, Yv, shadow);

  // rho(A) applied to the shift-d slice.
  GVec rhs = bracket_sh(gamma.base, Av, kd, shadow);
  gvec_axpy(rhs, Scalar(-1), gamma.shift(d, gvec_neg_part(AX), Yv, shadow));
  gvec_axpy(rhs, Scalar(-1), gamma.shift(d, Xv, gvec_neg_part(AY), shadow));
  // alternating correction on the nonnegative part of [A, .]
  gvec_axpy(rhs, Scalar(-1), gamma.shift(d, gvec_nonneg_part(AX), Yv, shadow));
  gvec_axpy(rhs, Scalar(1), gamma.shift(d, gvec_nonneg_part(AY), Xv, shadow));
  // bracket minus sigma_0 on the nonnegative part of the slice value
  gvec_axpy(rhs, Scalar(1), bracket_sh(gamma.base, kdp, Av, shadow));
  gvec_axpy(rhs, Scalar(-1), gamma.shift(0, kdp, Av, shadow));

  // - sum over delta1 + delta2 = d, both nonzero
  {
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = -a;
      hi = d - 1;
    } else {
      lo = d - (N - X.p - Y.p);
      hi = d - (-mu - X.p - Y.p);
    }
    for (int delta1 = lo; delta1 <= hi; ++delta1) {
      const int delta2 = d - delta1;
      if (delta1 == 0 || delta2 == 0) continue;
      const GVec inner = gamma.shift(delta2, Xv, Yv, shadow);
      gvec_axpy(rhs, Scalar(-1),
                gamma.shift(delta1, gvec_neg_part(inner), Av, shadow));
      gvec_axpy(rhs, Scalar(-1),
                gamma.shift(delta1, gvec_nonneg_part(inner), Av, shadow));
    }
  }

  // - A_{X,Y} sum over d1 + d2 = d, both nonzero. The derivation carries this
  // group with a minus sign; the stated bounds d1, d2 > 0 drop only slices
  // that vanish for admissible structures.
  auto alt = [&](const Bel& P, const Bel& Q, int sign) {
    const GVec Pv = to_vec(P), Qv = to_vec(Q);
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = 1;
      hi = d - 1;
    } else {
      lo = -mu - a - P.p;
      hi = N - a - P.p;
    }
    for (int d2 = lo; d2 <= hi; ++d2) {
      const int d1 = d - d2;
      if (d1 == 0 || d2 == 0) continue;
      if (bounds == SumBounds::displayed && (d1 < 1 || d2 < 1)) continue;
      const GVec inner = gamma.shift(d2, Av, Pv, shadow);
      gvec_axpy(rhs, Scalar(-sign),
                gamma.shift(d1, gvec_neg_part(inner), Qv, shadow));
      gvec_axpy(rhs, Scalar(-sign),
                gamma.shift(d1, gvec_nonneg_part(inner), Qv, shadow));
    }
  };
  // the loop variable in displayed mode is d2 = the inner slice degree
  alt(X, Y, 1);
  alt(Y, X, -1);

  gvec_axpy(res, Scalar(-1), rhs);
  return res;
}

GVec residual3(const ConstantStructure& gamma, const Bel& A, const Bel& B,
               const Bel& X, int d, SumBounds bounds, long* shadow) {
  const int a = A.p;
  const int b = B.p;
  const int mu = gamma.depth();
  const int N = gamma.order();
  const GVec Av = to_vec(A), Bv = to_vec(B), Xv = to_vec(X);

  GVec res = bracket_sh(gamma.base, gamma.shift(d, Av, Bv, shadow), Xv, shadow);

  GVec rhs;
  // A_{A,B} sum with inner slice on (second, X); the stated upper bound
  // tracks the degree of the first argument.
  auto first_sum = [&](const Bel& P, const Bel& Q, int sign) {
    const GVec Pv = to_vec(P), Qv = to_vec(Q);
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = 0;
      hi = d + P.p;
    } else {
      lo = -mu - Q.p - X.p;
      hi = N - Q.p - X.p;
    }
    for (int d2 = lo; d2 <= hi; ++d2) {
      const int d1 = d - d2;
      const GVec inner = gamma.shift(d2, Qv, Xv, shadow);
      gvec_axpy(rhs, Scalar(sign),
                gamma.shift(d1, Pv, gvec_nonneg_part(inner), shadow));
      gvec_axpy(rhs, Scalar(sign),
                gamma.shift(d1, Pv, gvec_neg_part(inner), shadow));
    }
  };
  first_sum(A, B, 1);
  first_sum(B, A, -1);

  {
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = 1;
      hi = d + std::min(a, b);
    } else {
      lo = d - (N - a - b);
      hi = d - (-mu - a - b);
    }
    for (int delta1 = lo; delta1 <= hi; ++delta1) {
      const int delta2 = d - delta1;
      if (delta1 == 0) continue;
      gvec_axpy(rhs, Scalar(1),
                gamma.shift(delta1, Xv, gamma.shift(delta2, Av, Bv, shadow),
                            shadow));
    }
  }

  gvec_axpy(res, Scalar(-1), rhs);
  return res;
}

GVec residual4(const ConstantStructure& gamma, const Bel& A, const Bel& B,
               const Bel& C, int d, SumBounds bounds, long* shadow) {
  const int mu = gamma.depth();
  const int N = gamma.order();
  const std::array<std::array<Bel, 3>, 3> rot = {
      {{A, B, C}, {B, C, A}, {C, A, B}}};
  GVec res;
  for (const auto& r : rot) {
    const GVec u = to_vec(r[0]), v = to_vec(r[1]), w = to_vec(r[2]);
    int lo, hi;
    if (bounds == SumBounds::displayed) {
      lo = -std::min(r[0].p, r[1].p);
      hi = d + r[2].p;
    } else {
      lo = -mu - r[0].p - r[1].p;
      hi = N - r[0].p - r[1].p;
    }
    for (int d2 = lo; d2 <= hi; ++d2) {
      gvec_axpy(res, Scalar(1),
                gamma.shift(d - d2, gamma.shift(d2, u, v, shadow), w, shadow));
    }
  }
  return res;
}

namespace {

bool slot_in_range(int degsum, int shift, int mu, int N) {
  const int v = degsum + shift;
  return v >= -mu && v <= N;
}

}  // namespace

bool FundamentalResiduals::all_zero() const {
  for (const auto& t : identity)
    if (!t.zero()) return false;
  return true;
}

FundamentalResiduals fundamental_residuals(const ConstantStructure& gamma,
                                           int k, int d, SumBounds bounds) {
  const int mu = gamma.depth();
  const int N = gamma.order();
  if (k < 0 || k > N + 3 * mu)
    throw ComputationError("identity order outside the truncation range");
  if (d < -(3 * N + mu) || d > N + 2 * mu)
    throw ComputationError("identity shift outside the truncation range");

  FundamentalResiduals out;
  out.k = k;
  out.d = d;
  const std::vector<Bel> negs = gamma.base.dims.basis_range(-mu, -1);
  const std::vector<Bel> poss = gamma.base.dims.basis_range(0, N);

  auto record = [](ResidualTable& t, const std::array<Bel, 3>& key, GVec v) {
    ++t.slots;
    if (!gvec_is_zero(v)) t.entries[key] = std::move(v);
  };

  for (size_t i = 0; i < negs.size(); ++i)
    for (size_t j = i + 1; j < negs.size(); ++j)
      for (size_t l = j + 1; l < negs.size(); ++l) {
        if (!slot_in_range(negs[i].p + negs[j].p + negs[l].p, k, mu, N)) continue;
        record(out.identity[0], {negs[i], negs[j], negs[l]},
               residual1(gamma, negs[i], negs[j], negs[l], k, bounds,
                         &out.identity[0].shadow));
      }

  if (d >= 0)
    for (const Bel& A : poss)
      for (size_t i = 0; i < negs.size(); ++i)
        for (size_t j = i + 1; j < negs.size(); ++j) {
          if (!slot_in_range(A.p + negs[i].p + negs[j].p, d, mu, N)) continue;
          record(out.identity[1], {A, negs[i], negs[j]},
                 residual2(gamma, A, negs[i], negs[j], d, bounds,
                           &out.identity[1].shadow));
        }

  for (size_t i = 0; i < poss.size(); ++i)
    for (size_t j = i + 1; j < poss.size(); ++j)
      for (const Bel& X : negs) {
        if (!slot_in_range(poss[i].p + poss[j].p + X.p, d, mu, N)) continue;
        record(out.identity[2], {poss[i], poss[j], X},
               residual3(gamma, poss[i], poss[j], X, d, bounds,
                         &out.identity[2].shadow));
      }

  for (size_t i = 0; i < poss.size(); ++i)
    for (size_t j = i + 1; j < poss.size(); ++j)
      for (size_t l = j + 1; l < poss.size(); ++l) {
        if (!slot_in_range(poss[i].p + poss[j].p + poss[l].p, d, mu, N)) continue;
        record(out.identity[3], {poss[i], poss[j], poss[l]},
               residual4(gamma, poss[i], poss[j], poss[l], d, bounds,
                         &out.identity[3].shadow));
      }

  return out;
}

bool IdentityScan::all_zero() const {
  for (const auto& t : identity)
    if (t.nonzero != 0) return false;
  return true;
}

IdentityScan identity_scan(const ConstantStructure& gamma, SumBounds bounds) {
  const int mu = gamma.depth();
  const int N = gamma.order();
  const std::vector<Bel> negs = gamma.base.dims.basis_range(-mu, -1);
  const std::vector<Bel> poss = gamma.base.dims.basis_range(0, N);

  struct Slot {
    int id;
    std::array<Bel, 3> key;
  };
  std::vector<Slot> work;
  for (size_t i = 0; i < negs.size(); ++i)
    for (size_t j = i + 1; j < negs.size(); ++j)
      for (size_t l = j + 1; l < negs.size(); ++l)
        work.push_back({0, {negs[i], negs[j], negs[l]}});
  for (const Bel& A : poss)
    for (size_t i = 0; i < negs.size(); ++i)
      for (size_t j = i + 1; j < negs.size(); ++j)
        work.push_back({1, {A, negs[i], negs[j]}});
  for (size_t i = 0; i < poss.size(); ++i)
    for (size_t j = i + 1; j < poss.size(); ++j)
      for (const Bel& X : negs) work.push_back({2, {poss[i], poss[j], X}});
  for (size_t i = 0; i < poss.size(); ++i)
    for (size_t j = i + 1; j < poss.size(); ++j)
      for (size_t l = j + 1; l < poss.size(); ++l)
        work.push_back({3, {poss[i], poss[j], poss[l]}});

  struct SlotResult {
    long slots = 0;
    long shadow = 0;
    std::vector<int> nonzero_shifts;
  };
  std::vector<SlotResult> results(work.size());

  // Slots are independent; merge order below restores determinism.
  parallel_for(static_cast<int>(work.size()), [&](int w) {
    const Slot& slot = work[w];
    SlotResult& r = results[w];
    const int s = slot.key[0].p + slot.key[1].p + slot.key[2].p;
    int lo = -mu - s;
    // Identity for mixed arguments is stated for shifts d >= 0 only.
    if (slot.id == 1 && lo < 0) lo = 0;
    for (int t = lo; t <= N - s; ++t) {
      GVec v;
      switch (slot.id) {
        case 0:
          v = residual1(gamma, slot.key[0], slot.key[1], slot.key[2], t, bounds,
                        &r.shadow);
          break;
        case 1:
          v = residual2(gamma, slot.key[0], slot.key[1], slot.key[2], t, bounds,
                        &r.shadow);
          break;
        case 2:
          v = residual3(gamma, slot.key[0], slot.key[1], slot.key[2], t, bounds,
                        &r.shadow);
          break;
        default:
          v = residual4(gamma, slot.key[0], slot.key[1], slot.key[2], t, bounds,
                        &r.shadow);
      }
      ++r.slots;
      if (!gvec_is_zero(v)) r.nonzero_shifts.push_back(t);
    }
  });

  IdentityScan out;
  constexpr size_t kMaxWitness = 8;
  for (size_t w = 0; w < work.size(); ++w) {
    IdentityScan::PerIdentity& t = out.identity[work[w].id];
    t.slots += results[w].slots;
    t.shadow += results[w].shadow;
    t.nonzero += static_cast<long>(results[w].nonzero_shifts.size());
    for (int shift : results[w].nonzero_shifts)
      if (t.witnesses.size() < kMaxWitness)
        t.witnesses.push_back({work[w].key, shift});
  }
  return out;
}

bool tau_level_flat(const ConstantStructure& gamma, int m) {
  for (const auto& [key, val] : gamma.table()) {
    if (gamma_part(key.first.p, key.second.p) != GammaPart::II) continue;
    for (const auto& [b, c] : val) {
      (void)c;
      const BiGrade bg = bigrade(key.first.p, key.second.p, b.p);
      if (bg.s == m && bg.r > 0) return false;
    }
  }
  return true;
}

bool sigma_level_flat(const ConstantStructure& gamma, int m) {
  for (const auto& [key, val] : gamma.table()) {
    if (gamma_part(key.first.p, key.second.p) != GammaPart::III) continue;
    for (const auto& [b, c] : val) {
      (void)c;
      const BiGrade bg = bigrade(key.first.p, key.second.p, b.p);
      if (bg.s == m && bg.r != 0) return false;
    }
  }
  // the degree-0 slice at this level must be the bracket
  const std::vector<Bel> poss = gamma.base.dims.basis_range(0, gamma.order());
  for (size_t i = 0; i < poss.size(); ++i)
    for (size_t j = i + 1; j < poss.size(); ++j) {
      if (poss[i].p + poss[j].p + 2 != m) continue;
      if (!gamma.base.bracket_defined(poss[i].p, poss[j].p)) continue;
      GVec diff = gamma.shift(0, to_vec(poss[i]), to_vec(poss[j]));
      gvec_axpy(diff, Scalar(-1), gamma.base.bracket_basis(poss[i], poss[j]));
      if (!gvec_is_zero(diff)) return false;
    }
  return true;
}

bool tau_flat_through(const ConstantStructure& gamma, int m) {
  for (int i = 1; i <= m; ++i)
    if (!tau_level_flat(gamma, i)) return false;
  return true;
}

bool sigma_flat_through(const ConstantStructure& gamma, int m) {
  // sigma slices live at modified degree c + 2 >= 2 - depth.
  for (int i = 2 - gamma.depth(); i <= m; ++i)
    if (!sigma_level_flat(gamma, i)) return false;
  return true;
}

bool kappa_flat_through(const ConstantStructure& gamma, int m) {
  for (const auto& [key, val] : gamma.table()) {
    if (gamma_part(key.first.p, key.second.p) != GammaPart::I) continue;
    for (const auto& [b, c] : val) {
      (void)c;
      const BiGrade bg = bigrade(key.first.p, key.second.p, b.p);
      if (bg.s >= 1 && bg.s <= m) return false;
    }
  }
  return true;
}

FlatnessReport flatness(const ConstantStructure& gamma, int k) {
  return {tau_flat_through(gamma, k + 1), sigma_flat_through(gamma, k + 1)};
}

namespace {

/// Spencer differential of the 1-cochain X -> gamma_d(A, X).
GVec dtau_lhs(const ConstantStructure& gamma, const Bel& A, int d, const Bel& X,
              const Bel& Y) {
  const GVec Av = to_vec(A), Xv = to_vec(X), Yv = to_vec(Y);
  GVec out = bracket_sh(gamma.base, Xv, gamma.shift(d, Av, Yv), nullptr);
  gvec_axpy(out, Scalar(-1),
            bracket_sh(gamma.base, Yv, gamma.shift(d, Av, Xv), nullptr));
  gvec_axpy(out, Scalar(-1),
            gamma.shift(d, Av, bracket_sh(gamma.base, Xv, Yv, nullptr)));
  return out;
}

GVec rho_kappa(const ConstantStructure& gamma, const Bel& A, int d, const Bel& X,
               const Bel& Y) {
  const GVec Av = to_vec(A), Xv = to_vec(X), Yv = to_vec(Y);
  GVec out = bracket_sh(gamma.base, Av, gamma.shift(d, Xv, Yv), nullptr);
  gvec_axpy(out, Scalar(-1),
            gamma.shift(d, gvec_neg_part(bracket_sh(gamma.base, Av, Xv, nullptr)),
                        Yv));
  gvec_axpy(out, Scalar(-1),
            gamma.shift(d, Xv,
                        gvec_neg_part(bracket_sh(gamma.base, Av, Yv, nullptr))));
  return out;
}

GVec dkappa_lhs(const ConstantStructure& gamma, int k, const Bel& X, const Bel& Y,
                const Bel& Z) {
  const std::array<std::array<Bel, 3>, 3> rot = {
      {{X, Y, Z}, {Y, Z, X}, {Z, X, Y}}};
  GVec out;
  for (const auto& r : rot) {
    const GVec u = to_vec(r[0]), v = to_vec(r[1]), w = to_vec(r[2]);
    gvec_axpy(out, Scalar(1),
              bracket_sh(gamma.base, u, gamma.shift(k, v, w), nullptr));
    gvec_axpy(out, Scalar(-1),
              gamma.shift(k, bracket_sh(gamma.base, u, v, nullptr), w));
  }
  return out;
}

std::string slot_str(int k, const std::vector<Bel>& args) {
  std::ostringstream os;
  os << "order " << k << " at";
  for (const Bel& b : args) os << " " << bel_str(b);
  return os.str();
}

}  // namespace

bool CorollaryReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.holds) return false;
  return true;
}

CorollaryReport corollary_checks(const ConstantStructure& gamma) {
  const int mu = gamma.depth();
  const int N = gamma.order();
  const std::vector<Bel> negs = gamma.base.dims.basis_range(-mu, -1);
  const std::vector<Bel> poss = gamma.base.dims.basis_range(0, N);
  CorollaryReport rep;

  auto neg_pairs = [&](auto&& f) {
    for (size_t i = 0; i < negs.size(); ++i)
      for (size_t j = i + 1; j < negs.size(); ++j)
        if (!f(negs[i], negs[j])) return false;
    return true;
  };

  // d kappa_[1] = 0, unconditionally a component of the Bianchi identity.
  {
    CorollaryRow row{"dkappa1_zero", true, true, ""};
    for (size_t i = 0; i < negs.size() && row.holds; ++i)
      for (size_t j = i + 1; j < negs.size() && row.holds; ++j)
        for (size_t l = j + 1; l < negs.size() && row.holds; ++l)
          if (!gvec_is_zero(dkappa_lhs(gamma, 1, negs[i], negs[j], negs[l]))) {
            row.holds = false;
            row.witness = slot_str(1, {negs[i], negs[j], negs[l]});
          }
    rep.rows.push_back(row);
  }

  // kappa^[k-1] flat => d kappa_[k] = 0 and d tau_[k](A, .) = 0.
  {
    CorollaryRow row{"kappa_flat_chain", false, true, ""};
    for (int k = 2; k <= N + 2 * mu && row.holds; ++k) {
      if (!kappa_flat_through(gamma, k - 1)) continue;
      row.hypothesis = true;
      for (size_t i = 0; i < negs.size() && row.holds; ++i)
        for (size_t j = i + 1; j < negs.size() && row.holds; ++j)
          for (size_t l = j + 1; l < negs.size() && row.holds; ++l)
            if (!gvec_is_zero(dkappa_lhs(gamma, k, negs[i], negs[j], negs[l]))) {
              row.holds = false;
              row.witness = slot_str(k, {negs[i], negs[j], negs[l]});
            }
      for (const Bel& A : poss) {
        if (!row.holds) break;
        const int d = k - A.p - 1;
        if (d < 0) continue;
        neg_pairs([&](const Bel& X, const Bel& Y) {
          if (!gvec_is_zero(dtau_lhs(gamma, A, d, X, Y))) {
            row.holds = false;
            row.witness = slot_str(k, {A, X, Y});
          }
          return row.holds;
        });
      }
    }
    rep.rows.push_back(row);
  }

  // tau^[k-1] flat => sigma^[k] flat.
  {
    CorollaryRow row{"tau_flat_sigma_flat", false, true, ""};
    for (int k = 2; k <= N + mu + 2; ++k) {
      if (!tau_flat_through(gamma, k - 1)) continue;
      row.hypothesis = true;
      if (!sigma_flat_through(gamma, k)) {
        row.holds = false;
        row.witness = "sigma not flat through modified degree " +
                      std::to_string(k);
        break;
      }
    }
    rep.rows.push_back(row);
  }

  // tau^[k-1] flat => d tau_[k](A, .) = rho(A) kappa_[k-a-1].
  {
    CorollaryRow row{"dtau_rho_kappa", false, true, ""};
    for (int k = 2; k <= N + mu + 2 && row.holds; ++k) {
      if (!tau_flat_through(gamma, k - 1)) continue;
      row.hypothesis = true;
      for (const Bel& A : poss) {
        if (!row.holds) break;
        if (A.p > k - 2) continue;
        const int d = k - A.p - 1;
        neg_pairs([&](const Bel& X, const Bel& Y) {
          GVec diff = dtau_lhs(gamma, A, d, X, Y);
          gvec_axpy(diff, Scalar(-1), rho_kappa(gamma, A, d, X, Y));
          if (!gvec_is_zero(diff)) {
            row.holds = false;
            row.witness = slot_str(k, {A, X, Y});
          }
          return row.holds;
        });
      }
    }
    rep.rows.push_back(row);
  }

  // flat tau => negative sigma slices vanish.
  {
    CorollaryRow row{"sigma_neg_vanish",
                     tau_flat_through(gamma, N + mu + 1), true, ""};
    for (const auto& [key, val] : gamma.table()) {
      if (gamma_part(key.first.p, key.second.p) != GammaPart::III) continue;
      for (const auto& [b, c] : val) {
        (void)c;
        if (b.p - key.first.p - key.second.p < 0) {
          row.holds = false;
          row.witness = "sigma slice " + bel_str(key.first) + "^" +
                        bel_str(key.second) + " -> " + bel_str(b);
        }
      }
    }
    rep.rows.push_back(row);
  }

  // flat tau => sigma_(0) is the bracket.
  {
    CorollaryRow row{"sigma0_bracket",
                     tau_flat_through(gamma, N + mu + 1), true, ""};
    for (size_t i = 0; i < poss.size() && row.holds; ++i)
      for (size_t j = i + 1; j < poss.size() && row.holds; ++j) {
        if (!gamma.base.bracket_defined(poss[i].p, poss[j].p)) continue;
        GVec diff = gamma.shift(0, to_vec(poss[i]), to_vec(poss[j]));
        gvec_axpy(diff, Scalar(-1), gamma.base.bracket_basis(poss[i], poss[j]));
        if (!gvec_is_zero(diff)) {
          row.holds = false;
          row.witness =
              "sigma_0 at " + bel_str(poss[i]) + "^" + bel_str(poss[j]);
        }
      }
    rep.rows.push_back(row);
  }

  return rep;
}

PreCartanReport pre_cartan_verdict(const ConstantStructure& gamma,
                                   const ConditionCReport* condition_c) {
  PreCartanReport rep;
  rep.tau_flat = tau_flat_through(gamma, gamma.order() + gamma.depth() + 1);
  rep.condition_c = condition_c != nullptr && condition_c->holds;
  rep.caveat =
      "bundle-level hypotheses (existence of the underlying geometric "
      "structure, connectedness of the structure group) are outside scope";
  if (rep.condition_c) {
    rep.verdict = "condition (C) => Cartan";
    rep.certified =
        "the selected complements are invariant under the degree-0 action";
  } else if (rep.tau_flat) {
    rep.verdict = "Cartan-connection type (algebraic)";
    rep.certified = "tau flat through the truncation";
  } else {
    rep.verdict = "pre-Cartan (constant tau)";
    rep.certified = "tau constant by construction";
  }
  return rep;
}

FilteredModel model_from_filtered(const FilteredInput& in) {
  const int mu = in.dims.depth();
  const int top = std::max(in.dims.top(), -1);

  // Degree-0 slices form the associated graded algebra.
  GradedLieAlgebra g;
  g.dims = in.dims;
  g.name = in.name;
  for (const auto& [key, val] : in.brackets) {
    const auto& [x, y] = key;
    if (!(x < y))
      throw ComputationError("filtered bracket table key not canonical");
    if (x.i < 0 || x.i >= in.dims.at(x.p) || y.i < 0 || y.i >= in.dims.at(y.p))
      throw ComputationError("filtered bracket table indexes a missing basis element");
    for (const auto& [b, c] : val) {
      (void)c;
      if (b.p < x.p + y.p)
        throw ComputationError("bracket value below filtration degree at pair " +
                               bel_str(x) + ", " + bel_str(y));
      if (b.p < -mu || b.p > top || b.i < 0 || b.i >= in.dims.at(b.p))
        throw ComputationError("bracket value outside the algebra at pair " +
                               bel_str(x) + ", " + bel_str(y));
    }
    GVec v0 = gvec_degree_part(val, x.p + y.p);
    if (!gvec_is_zero(v0)) g.set_bracket(x, y, std::move(v0));
  }
  std::vector<std::string> errs = g.validate_structure();
  if (!errs.empty())
    throw ComputationError("associated graded algebra invalid: " + errs.front());

  ConstantStructure cs;
  cs.base = g;
  cs.name = in.name;
  for (const auto& [key, val] : in.brackets) cs.set(key.first, key.second, val);

  BianchiResidual bi = bianchi_residual(cs);
  if (!bi.zero()) {
    const auto& w = *bi.witness();
    throw ComputationError("input table violates the Jacobi identity at " +
                           bel_str(w[0]) + ", " + bel_str(w[1]) + ", " +
                           bel_str(w[2]));
  }
  return FilteredModel{std::move(cs)};
}

}  // namespace gs
