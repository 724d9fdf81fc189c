#include "core/sparsemat.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace gs {

void SparseMatrix::add(int r, int c, const Scalar& v) {
  assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
  if (is_zero(v)) return;
  data_[r].emplace_back(c, v);
}

std::vector<std::pair<int, Scalar>> SparseMatrix::row(int r) const {
  std::map<int, Scalar> acc;
  for (const auto& [c, v] : data_[r]) acc[c] += v;
  std::vector<std::pair<int, Scalar>> out;
  for (auto& [c, v] : acc)
    if (!is_zero(v)) out.emplace_back(c, v);
  return out;
}

std::vector<SparseMatrix::IntRow> SparseMatrix::integer_rows(
    const std::vector<Scalar>* augment) const {
  std::vector<IntRow> rows(rows_);
  for (int r = 0; r < rows_; ++r) {
    auto entries = row(r);
    if (augment && !is_zero((*augment)[r]))
      entries.emplace_back(cols_, (*augment)[r]);
    if (entries.empty()) continue;
    // Scale to a primitive integer row: multiply by the lcm of denominators,
    // divide by the gcd of the resulting numerators. Sign preserved.
    Integer lcm_den = 1;
    for (const auto& [c, v] : entries) {
      Integer den = v.get_den();
      Integer g;
      mpz_gcd(g.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
      lcm_den = lcm_den / g * den;
    }
    IntRow irow;
    irow.reserve(entries.size());
    Integer gcd_num = 0;
    for (const auto& [c, v] : entries) {
      Integer num = v.get_num() * (lcm_den / v.get_den());
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), num.get_mpz_t());
      irow.emplace_back(c, std::move(num));
    }
    if (gcd_num > 1)
      for (auto& [c, n] : irow) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), gcd_num.get_mpz_t());
    rows[r] = std::move(irow);
  }
  return rows;
}

namespace {

const Integer* find_col(const std::vector<std::pair<int, Integer>>& row, int col) {
  auto it = std::lower_bound(
      row.begin(), row.end(), col,
      [](const std::pair<int, Integer>& e, int c) { return e.first < c; });
  if (it != row.end() && it->first == col) return &it->second;
  return nullptr;
}

}  // namespace

SparseMatrix::Echelon SparseMatrix::echelonize(const std::vector<IntRow>& input,
                                               int pivot_limit) const {
  Echelon ech;
  ech.rows = input;
  Integer prev = 1;
  int next = 0;  // rows above `next` are settled echelon rows
  const int nrows = static_cast<int>(ech.rows.size());
  for (int col = 0; col < pivot_limit && next < nrows; ++col) {
    int pivot = -1;
    for (int r = next; r < nrows; ++r) {
      if (find_col(ech.rows[r], col)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(ech.rows[next], ech.rows[pivot]);
    const IntRow prow = ech.rows[next];
    const Integer piv = *find_col(prow, col);
    for (int r = next + 1; r < nrows; ++r) {
      IntRow& rr = ech.rows[r];
      if (rr.empty()) continue;
      const Integer* ap = find_col(rr, col);
      IntRow merged;
      merged.reserve(rr.size() + (ap ? prow.size() : 0));
      if (!ap) {
        // (piv * rr) / prev, entrywise exact.
        for (auto& [c, v] : rr) {
          Integer t = piv * v;
          mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
          merged.emplace_back(c, std::move(t));
        }
      } else {
        const Integer a = *ap;
        size_t i = 0, j = 0;
        while (i < rr.size() || j < prow.size()) {
          int ci = i < rr.size() ? rr[i].first : cols_ + 2;
          int cj = j < prow.size() ? prow[j].first : cols_ + 2;
          int c = std::min(ci, cj);
          Integer t = 0;
          if (ci == c) t += piv * rr[i++].second;
          if (cj == c) t -= a * prow[j++].second;
          if (sgn(t) != 0) {
            mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            merged.emplace_back(c, std::move(t));
          }
        }
      }
      rr = std::move(merged);
    }
    ech.pivot_col.push_back(col);
    prev = piv;
    ++next;
  }
  ech.rank = next;
  return ech;
}

int SparseMatrix::rank() const {
  return echelonize(integer_rows(nullptr), cols_).rank;
}

std::vector<std::vector<Scalar>> SparseMatrix::nullspace() const {
  Echelon ech = echelonize(integer_rows(nullptr), cols_);
  std::vector<bool> is_pivot(cols_, false);
  for (int c : ech.pivot_col) is_pivot[c] = true;

  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> x(cols_, Scalar(0));
    x[f] = 1;
    for (int i = ech.rank - 1; i >= 0; --i) {
      const IntRow& r = ech.rows[i];
      const int pc = ech.pivot_col[i];
      Scalar acc(0);
      for (const auto& [c, v] : r) {
        if (c == pc) continue;
        if (!is_zero(x[c])) acc += Scalar(v) * x[c];
      }
      x[pc] = is_zero(acc) ? Scalar(0) : Scalar(-acc / Scalar(*find_col(r, pc)));
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<std::vector<Scalar>> SparseMatrix::solve(
    const std::vector<Scalar>& b) const {
  assert(static_cast<int>(b.size()) == rows_);
  // Augment -b so rows read  sum_c a_c x_c - b = 0  with x_aug = 1.
  std::vector<Scalar> neg(b.size());
  for (size_t i = 0; i < b.size(); ++i) neg[i] = -b[i];
  Echelon ech = echelonize(integer_rows(&neg), cols_);
  // Consistency: a surviving row supported only on the augmented column means
  // 0 * x = nonzero.
  for (size_t r = ech.rank; r < ech.rows.size(); ++r)
    if (!ech.rows[r].empty()) return std::nullopt;

  std::vector<Scalar> x(cols_, Scalar(0));
  for (int i = ech.rank - 1; i >= 0; --i) {
    const IntRow& r = ech.rows[i];
    const int pc = ech.pivot_col[i];
    Scalar acc(0);
    for (const auto& [c, v] : r) {
      if (c == pc) continue;
      Scalar xc = (c == cols_) ? Scalar(1) : x[c];
      if (!is_zero(xc)) acc += Scalar(v) * xc;
    }
    x[pc] = is_zero(acc) ? Scalar(0) : Scalar(-acc / Scalar(*find_col(r, pc)));
  }
  return x;
}

Scalar dense_det(std::vector<std::vector<Scalar>> m) {
  const int n = static_cast<int>(m.size());
  Scalar det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!is_zero(m[r][col])) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Scalar(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < n; ++r) {
      if (is_zero(m[r][col])) continue;
      Scalar f = m[r][col] / m[col][col];
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

bool SpanTracker::absorb(const std::vector<Scalar>& v) {
  assert(static_cast<int>(v.size()) == dim_);
  std::vector<Scalar> w = v;
  for (size_t i = 0; i < rows_.size(); ++i) {
    const int lc = lead_[i];
    if (is_zero(w[lc])) continue;
    Scalar f = w[lc] / rows_[i][lc];
    for (int c = 0; c < dim_; ++c) w[c] -= f * rows_[i][c];
  }
  int lead = -1;
  for (int c = 0; c < dim_; ++c)
    if (!is_zero(w[c])) {
      lead = c;
      break;
    }
  if (lead < 0) return false;
  rows_.push_back(std::move(w));
  lead_.push_back(lead);
  return true;
}

}  // namespace gs
