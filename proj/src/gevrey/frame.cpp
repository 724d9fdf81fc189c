#include "gevrey/frame.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace gs {

SeriesVectorField::SeriesVectorField(std::vector<FormalSeries> c)
    : coeff(std::move(c)) {
  if (coeff.empty())
    throw ComputationError("vector field needs at least one coefficient");
  for (const FormalSeries& f : coeff)
    if (f.n != coeff.front().n || f.order != coeff.front().order)
      throw ComputationError("vector field coefficients disagree in variables or order");
}

FormalSeries apply_field(const SeriesVectorField& X, const FormalSeries& u) {
  if (X.coeff.front().n != u.n)
    throw ComputationError("vector field and series disagree in variables");
  if (u.order < 1)
    throw ComputationError("derivative exceeds the available truncation order");
  FormalSeries out =
      FormalSeries::zero(u.n, std::min(u.order - 1, X.order()));
  for (int j = 0; j < X.n(); ++j) {
    if (X.coeff[j].is_zero()) continue;
    out = series_add(out, series_mul(X.coeff[j], series_derive(u, j)));
  }
  return out;
}

std::vector<SeriesVectorField> coordinate_frame(int n, int order) {
  std::vector<SeriesVectorField> frame;
  for (int i = 0; i < n; ++i) {
    std::vector<FormalSeries> c;
    for (int j = 0; j < n; ++j)
      c.push_back(FormalSeries::constant(n, order, Scalar(i == j ? 1 : 0)));
    frame.emplace_back(std::move(c));
  }
  return frame;
}

SeriesMatrix series_matrix_identity(int n, int order) {
  SeriesMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i].push_back(FormalSeries::constant(n, order, Scalar(i == j ? 1 : 0)));
  return m;
}

SeriesMatrix series_matrix_mul(const SeriesMatrix& a, const SeriesMatrix& b) {
  const size_t n = a.size();
  SeriesMatrix out(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      FormalSeries acc = series_mul(a[i][0], b[0][j]);
      for (size_t l = 1; l < n; ++l)
        acc = series_add(acc, series_mul(a[i][l], b[l][j]));
      out[i].push_back(std::move(acc));
    }
  return out;
}

SeriesMatrix frame_matrix(const std::vector<SeriesVectorField>& X) {
  const int n = static_cast<int>(X.size());
  if (n == 0) throw ComputationError("frame needs at least one field");
  for (const SeriesVectorField& f : X)
    if (f.n() != n)
      throw ComputationError("frame needs exactly as many fields as variables");
  const int order = X.front().order();
  for (const SeriesVectorField& f : X)
    if (f.order() != order)
      throw ComputationError("frame fields disagree in truncation order");

  // Exact inverse of the constant-term matrix by Gauss-Jordan.
  std::vector<std::vector<Scalar>> c0(n, std::vector<Scalar>(n, Scalar(0)));
  std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) {
    inv[i][i] = Scalar(1);
    for (int j = 0; j < n; ++j) c0[i][j] = X[i].coeff[j].at_origin();
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int row = col; row < n; ++row)
      if (!is_zero(c0[row][col])) {
        piv = row;
        break;
      }
    if (piv < 0)
      throw ComputationError("frame coefficient matrix is singular at the origin");
    std::swap(c0[piv], c0[col]);
    std::swap(inv[piv], inv[col]);
    const Scalar d = c0[col][col];
    for (int j = 0; j < n; ++j) {
      c0[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || is_zero(c0[row][col])) continue;
      const Scalar f = c0[row][col];
      for (int j = 0; j < n; ++j) {
        c0[row][j] -= f * c0[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }

  SeriesMatrix inv0(n);
  SeriesMatrix c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      inv0[i].push_back(FormalSeries::constant(n, order, inv[i][j]));
      c[i].push_back(X[i].coeff[j]);
    }

  // C = C0 (I + E) with E vanishing at the origin, so the inverse is the
  // truncated Neumann sum of (-E) powers times C0^{-1}.
  SeriesMatrix e = series_matrix_mul(inv0, c);
  for (int i = 0; i < n; ++i)
    e[i][i] = series_sub(e[i][i], FormalSeries::constant(n, order, Scalar(1)));
  SeriesMatrix acc = series_matrix_identity(n, order);
  SeriesMatrix power = series_matrix_identity(n, order);
  for (int m = 1; m <= order; ++m) {
    power = series_matrix_mul(power, e);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc[i][j] = (m % 2 == 1) ? series_sub(acc[i][j], power[i][j])
                                 : series_add(acc[i][j], power[i][j]);
  }
  return series_matrix_mul(acc, inv0);
}

FormalSeries PhiTensor::at(const Slots& I, const Slots& J) const {
  auto it = entry.find({I, J});
  return it == entry.end() ? FormalSeries::zero(n, order) : it->second;
}

void PhiTensor::add_entry(const Slots& I, const Slots& J,
                          const FormalSeries& s) {
  if (s.is_zero()) return;
  auto it = entry.find({I, J});
  if (it == entry.end()) {
    entry.emplace(std::make_pair(I, J), s);
    return;
  }
  it->second = series_add(it->second, s);
  if (it->second.is_zero()) entry.erase(it);
}

const PhiTensor& FrameTensors::phi(int k, int i) const {
  if (k < 1 || k > static_cast<int>(levels.size()) || i < 1 || i > k)
    throw ComputationError("tensor level outside the computed range");
  return levels[static_cast<size_t>(k) - 1][static_cast<size_t>(i) - 1];
}

FrameTensors phi_tensors(const SeriesMatrix& A, int k_max) {
  const int n = static_cast<int>(A.size());
  if (n == 0 || k_max < 1)
    throw ComputationError("tensor recursion needs a frame matrix and a level");
  const int order = A[0][0].order;
  for (const auto& row : A) {
    if (static_cast<int>(row.size()) != n)
      throw ComputationError("frame matrix must be square");
    for (const FormalSeries& s : row)
      if (s.n != n || s.order != order)
        throw ComputationError("frame matrix entries disagree in variables or order");
  }
  if (order < k_max - 1)
    throw ComputationError("tensor level exceeds the available truncation order");

  FrameTensors out;
  out.A = A;
  out.levels.resize(static_cast<size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    out.levels[k - 1].resize(static_cast<size_t>(k));
    for (int i = 1; i <= k; ++i) {
      PhiTensor& t = out.levels[k - 1][i - 1];
      t.k = k;
      t.i = i;
      t.n = n;
      t.order = order - (k - 1);
    }
  }

  PhiTensor& base = out.levels[0][0];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) base.add_entry({a}, {b}, A[a][b]);

  for (int k = 2; k <= k_max; ++k) {
    const int ord_k = order - (k - 1);
    for (int i = 1; i <= k; ++i) {
      PhiTensor& t = out.levels[k - 1][i - 1];
      // Tensor A onto the newest coordinate and frame slots.
      if (i >= 2) {
        const PhiTensor& prev = out.levels[k - 2][i - 2];
        for (const auto& [key, s] : prev.entry)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              if (A[a][b].is_zero()) continue;
              Slots I{a};
              I.insert(I.end(), key.first.begin(), key.first.end());
              Slots J{b};
              J.insert(J.end(), key.second.begin(), key.second.end());
              t.add_entry(I, J, series_mul(A[a][b], s).truncated(ord_k));
            }
      }
      // Apply the gradient to the newest coordinate slot.
      if (i <= k - 1) {
        const PhiTensor& prev = out.levels[k - 2][i - 1];
        for (const auto& [key, s] : prev.entry)
          for (int a = 0; a < n; ++a) {
            Slots I{a};
            I.insert(I.end(), key.first.begin(), key.first.end());
            t.add_entry(I, key.second, series_derive(s, a));
          }
      }
    }
  }
  return out;
}

Scalar phi_path_count(int k, int i) { return binomial(k - 1, i - 1); }

namespace {

/// All words of the given length over 0..n-1, lexicographic.
std::vector<Slots> all_words(int n, int len) {
  std::vector<Slots> words{Slots{}};
  for (int d = 0; d < len; ++d) {
    std::vector<Slots> next;
    next.reserve(words.size() * static_cast<size_t>(n));
    for (const Slots& w : words)
      for (int a = 0; a < n; ++a) {
        Slots v{a};
        v.insert(v.end(), w.begin(), w.end());
        next.push_back(std::move(v));
      }
    words = std::move(next);
  }
  std::sort(words.begin(), words.end());
  return words;
}

}  // namespace

ExpansionResidual expansion_verify(const FormalSeries& u,
                                   const std::vector<SeriesVectorField>& X,
                                   int k) {
  if (k < 1) throw ComputationError("expansion level must be positive");
  const int n = static_cast<int>(X.size());
  if (n == 0 || u.n != n)
    throw ComputationError("frame and series disagree in variables");
  const int ox = X.front().order();
  const int checked = std::min(u.order - k, ox - (k - 1));
  if (u.order < k || checked < 0)
    throw ComputationError("expansion level exceeds the available truncation order");

  const FrameTensors T = phi_tensors(frame_matrix(X), k);

  // Frame derivatives X_J u for words J of length 1..k; the word's first
  // label is the outermost application.
  std::vector<std::map<Slots, FormalSeries>> xw(static_cast<size_t>(k) + 1);
  xw[0][Slots{}] = u;
  for (int len = 1; len <= k; ++len)
    for (const auto& [w, s] : xw[len - 1])
      for (int a = 0; a < n; ++a) {
        Slots v{a};
        v.insert(v.end(), w.begin(), w.end());
        xw[len][std::move(v)] = apply_field(X[a], s);
      }

  ExpansionResidual res;
  res.k = k;
  res.checked_order = checked;

  std::map<Slots, FormalSeries> acc;
  for (const Slots& I : all_words(n, k)) {
    // Coordinate derivative D_I u, rightmost label applied first.
    FormalSeries d = u;
    for (int pos = k - 1; pos >= 0; --pos) d = series_derive(d, I[pos]);
    acc[I] = d.truncated(checked);
    ++res.slots;
  }
  for (int i = 1; i <= k; ++i)
    for (const auto& [key, phi] : T.phi(k, i).entry) {
      const FormalSeries& xju = xw[static_cast<size_t>(i)].at(key.second);
      acc[key.first] = series_sub(
          acc[key.first], series_mul(phi, xju).truncated(checked));
    }
  for (auto& [I, s] : acc)
    if (!s.is_zero()) res.nonzero.emplace(I, std::move(s));
  return res;
}

EstimateProfile estimate_profile(const FormalSeries& f,
                                 const std::vector<SeriesVectorField>& X,
                                 int l_max, const Scalar& rho) {
  if (sgn(rho) <= 0) throw ComputationError("estimate scale must be positive");
  const int n = static_cast<int>(X.size());
  if (n == 0 || f.n != n)
    throw ComputationError("frame and series disagree in variables");
  if (l_max < 0) throw ComputationError("estimate depth must be nonnegative");
  if (l_max > f.order || (l_max >= 1 && X.front().order() < l_max - 1))
    throw ComputationError("estimate depth exceeds the available truncation order");

  std::vector<Scalar> best(static_cast<size_t>(l_max) + 1, Scalar(0));
  // Depth-first over words, sharing the common suffix applications.
  std::vector<FormalSeries> stack{f};
  std::vector<int> word;
  auto visit = [&](auto&& self) -> void {
    const size_t d = word.size();
    const Scalar v = abs_scalar(stack.back().at_origin());
    if (v > best[d]) best[d] = v;
    if (static_cast<int>(d) == l_max) return;
    for (int a = 0; a < n; ++a) {
      word.push_back(a);
      stack.push_back(apply_field(X[a], stack.back()));
      self(self);
      stack.pop_back();
      word.pop_back();
    }
  };
  visit(visit);

  EstimateProfile out;
  out.rho = rho;
  Scalar denom(1);
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) denom *= Scalar(l) * rho;
    out.ratio.push_back(best[static_cast<size_t>(l)] / denom);
  }
  return out;
}

std::vector<double> profile_as_double(const EstimateProfile& p) {
  std::vector<double> out;
  out.reserve(p.ratio.size());
  for (const Scalar& r : p.ratio) out.push_back(r.get_d());
  return out;
}

}  // namespace gs
