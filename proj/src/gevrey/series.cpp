#include "gevrey/series.hpp"

#include <algorithm>
#include <random>

#include "core/error.hpp"

namespace gs {

int exponent_weight(const Exponent& a) {
  int w = 0;
  for (int e : a) w += e;
  return w;
}

Scalar factorial(int k) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Scalar(f);
}

Scalar exponent_factorial(const Exponent& a) {
  Scalar f(1);
  for (int e : a) f *= factorial(e);
  return f;
}

Scalar binomial(int n, int k) {
  if (k < 0 || k > n) return Scalar(0);
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Scalar(b);
}

FormalSeries FormalSeries::zero(int n, int order) {
  if (n < 1 || order < 0)
    throw ComputationError("series needs at least one variable and a nonnegative order");
  FormalSeries f;
  f.n = n;
  f.order = order;
  return f;
}

FormalSeries FormalSeries::constant(int n, int order, const Scalar& c) {
  FormalSeries f = zero(n, order);
  if (!gs::is_zero(c)) f.coeff[Exponent(n, 0)] = c;
  return f;
}

FormalSeries FormalSeries::variable(int n, int order, int i) {
  FormalSeries f = zero(n, order);
  Exponent a(n, 0);
  a[i] = 1;
  f.set(a, Scalar(1));
  return f;
}

namespace {

void check_key(const FormalSeries& f, const Exponent& a) {
  if (static_cast<int>(a.size()) != f.n)
    throw ComputationError("exponent length does not match the variable count");
  for (int e : a)
    if (e < 0) throw ComputationError("exponent entries must be nonnegative");
  if (exponent_weight(a) > f.order)
    throw ComputationError("monomial degree exceeds the truncation order");
}

}  // namespace

void FormalSeries::set(const Exponent& a, const Scalar& c) {
  check_key(*this, a);
  if (gs::is_zero(c))
    coeff.erase(a);
  else
    coeff[a] = c;
}

void FormalSeries::add(const Exponent& a, const Scalar& c) {
  check_key(*this, a);
  auto it = coeff.find(a);
  if (it == coeff.end()) {
    if (!gs::is_zero(c)) coeff.emplace(a, c);
    return;
  }
  it->second += c;
  if (gs::is_zero(it->second)) coeff.erase(it);
}

Scalar FormalSeries::at(const Exponent& a) const {
  auto it = coeff.find(a);
  return it == coeff.end() ? Scalar(0) : it->second;
}

Scalar FormalSeries::at_origin() const { return at(Exponent(n, 0)); }

FormalSeries FormalSeries::truncated(int m) const {
  if (m > order) throw ComputationError("cannot raise a truncation order");
  FormalSeries out = zero(n, m < 0 ? 0 : m);
  if (m < 0) {
    out.order = 0;
    return out;
  }
  for (const auto& [a, c] : coeff)
    if (exponent_weight(a) <= m) out.coeff.emplace(a, c);
  return out;
}

namespace {

void check_same_n(const FormalSeries& f, const FormalSeries& g) {
  if (f.n != g.n)
    throw ComputationError("series operate in different variable counts");
}

}  // namespace

FormalSeries series_add(const FormalSeries& f, const FormalSeries& g) {
  check_same_n(f, g);
  FormalSeries out = FormalSeries::zero(f.n, std::min(f.order, g.order));
  for (const auto& [a, c] : f.coeff)
    if (exponent_weight(a) <= out.order) out.coeff.emplace(a, c);
  for (const auto& [a, c] : g.coeff)
    if (exponent_weight(a) <= out.order) out.add(a, c);
  return out;
}

FormalSeries series_sub(const FormalSeries& f, const FormalSeries& g) {
  return series_add(f, series_scale(g, Scalar(-1)));
}

FormalSeries series_scale(const FormalSeries& f, const Scalar& c) {
  FormalSeries out = FormalSeries::zero(f.n, f.order);
  if (gs::is_zero(c)) return out;
  for (const auto& [a, v] : f.coeff) out.coeff.emplace(a, c * v);
  return out;
}

FormalSeries series_mul(const FormalSeries& f, const FormalSeries& g) {
  check_same_n(f, g);
  FormalSeries out = FormalSeries::zero(f.n, std::min(f.order, g.order));
  for (const auto& [a, ca] : f.coeff) {
    const int wa = exponent_weight(a);
    if (wa > out.order) continue;
    for (const auto& [b, cb] : g.coeff) {
      if (wa + exponent_weight(b) > out.order) continue;
      Exponent s(f.n);
      for (int i = 0; i < f.n; ++i) s[i] = a[i] + b[i];
      out.add(s, ca * cb);
    }
  }
  return out;
}

FormalSeries series_derive(const FormalSeries& f, int i) {
  if (i < 0 || i >= f.n) throw ComputationError("derivative variable out of range");
  if (f.order < 1)
    throw ComputationError("derivative exceeds the available truncation order");
  FormalSeries out = FormalSeries::zero(f.n, f.order - 1);
  for (const auto& [a, c] : f.coeff) {
    if (a[i] == 0) continue;
    Exponent b = a;
    b[i] -= 1;
    out.coeff.emplace(std::move(b), Scalar(a[i]) * c);
  }
  return out;
}

WeightVector::WeightVector(std::vector<Scalar> w) : r(std::move(w)) {
  if (r.empty()) throw ComputationError("weight vector needs at least one entry");
  for (const Scalar& x : r)
    if (sgn(x) <= 0) throw ComputationError("weight vector entries must be positive");
}

Scalar WeightVector::min() const {
  Scalar m = r.front();
  for (const Scalar& x : r)
    if (x < m) m = x;
  return m;
}

Scalar WeightVector::power(const Exponent& a) const {
  Scalar p(1);
  for (size_t i = 0; i < r.size(); ++i)
    for (int e = 0; e < a[i]; ++e) p *= r[i];
  return p;
}

WeightedNorm weighted_norm(const FormalSeries& f, const WeightVector& r) {
  if (r.n() != f.n)
    throw ComputationError("weight vector length does not match the variable count");
  WeightedNorm out;
  out.layer.assign(static_cast<size_t>(f.order) + 1, Scalar(0));
  for (const auto& [a, c] : f.coeff) {
    const int k = exponent_weight(a);
    Scalar term = exponent_factorial(a) / factorial(k) * abs_scalar(c) * r.power(a);
    if (term > out.layer[k]) out.layer[k] = std::move(term);
  }
  out.total = Scalar(0);
  for (const Scalar& l : out.layer) out.total += l;
  return out;
}

namespace {

/// Homogeneous sample of the given degree with small rational coefficients;
/// roughly half the monomials are skipped to vary the support.
FormalSeries random_homogeneous(std::mt19937_64& rng, int n, int deg) {
  FormalSeries f = FormalSeries::zero(n, deg);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> keep(0, 1);
  // Walk all compositions of deg into n parts.
  Exponent a(n, 0);
  a[0] = deg;
  while (true) {
    if (keep(rng)) f.set(a, frac(num(rng), den(rng)));
    int i = n - 2;
    while (i >= 0 && a[i] == 0) --i;
    if (i < 0) break;
    a[i] -= 1;
    int t = 1;
    for (int j = i + 1; j < n; ++j) {
      t += a[j];
      a[j] = 0;
    }
    a[i + 1] = t;
  }
  return f;
}

WeightVector random_weights(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(1, 5);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<Scalar> w;
  for (int i = 0; i < n; ++i) w.push_back(frac(num(rng), den(rng)));
  return WeightVector(std::move(w));
}

}  // namespace

LemmaAReport lemma_a_check(int samples, unsigned long seed) {
  LemmaAReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nvars(1, 3);
  std::uniform_int_distribution<int> degree(0, 6);
  for (int s = 0; s < samples; ++s) {
    const int n = nvars(rng);
    const int k = degree(rng);
    const int l = degree(rng);
    FormalSeries F = random_homogeneous(rng, n, k);
    FormalSeries G = random_homogeneous(rng, n, l);
    WeightVector r = random_weights(rng, n);
    bool tight = false;

    // Layer submultiplicativity on the homogeneous pair. The samples are
    // polynomials known completely, so re-declaring their order is exact.
    {
      FormalSeries Fw = F, Gw = G;
      Fw.order = k + l;
      Gw.order = k + l;
      const FormalSeries P = series_mul(Fw, Gw);
      const Scalar lhs = weighted_norm(P, r).layer[static_cast<size_t>(k + l)];
      const Scalar rhs =
          weighted_norm(F, r).layer[static_cast<size_t>(k)] *
          weighted_norm(G, r).layer[static_cast<size_t>(l)];
      ++rep.layer_checks;
      if (lhs > rhs) ++rep.violations;
      if (lhs == rhs && sgn(rhs) != 0) tight = true;
    }

    // Total submultiplicativity on inhomogeneous sums: pad each factor with
    // a random constant so several layers interact.
    {
      std::uniform_int_distribution<int> cnum(-3, 3);
      FormalSeries Fi = F, Gi = G;
      Fi.order = k + l;
      Gi.order = k + l;
      Fi.add(Exponent(n, 0), Scalar(cnum(rng)));
      Gi.add(Exponent(n, 0), Scalar(cnum(rng)));
      const Scalar lhs = weighted_norm(series_mul(Fi, Gi), r).total;
      const Scalar rhs = weighted_norm(Fi, r).total * weighted_norm(Gi, r).total;
      ++rep.total_checks;
      if (lhs > rhs) ++rep.violations;
      if (lhs == rhs && sgn(rhs) != 0) tight = true;
    }

    // Derivative bound, every variable.
    if (k >= 1) {
      const Scalar nf = weighted_norm(F, r).layer[static_cast<size_t>(k)];
      const Scalar bound = Scalar(k) / r.min() * nf;
      for (int j = 0; j < n; ++j) {
        const FormalSeries D = series_derive(F, j);
        const Scalar lhs = weighted_norm(D, r).layer[static_cast<size_t>(k - 1)];
        ++rep.derivative_checks;
        if (lhs > bound) ++rep.violations;
        if (lhs == bound && sgn(bound) != 0) tight = true;
      }
    }

    ++rep.samples;
    if (tight) ++rep.tight;
  }
  return rep;
}

}  // namespace gs
