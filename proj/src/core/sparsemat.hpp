#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "core/rational.hpp"

namespace gs {

/// Sparse matrix over exact rationals with fraction-free elimination.
///
/// Elimination strategy: rows are scaled to primitive integer vectors, then a
/// one-step fraction-free (Bareiss) elimination runs column by column. The
/// pivot for a column is the first remaining row with a nonzero entry there,
/// and every remaining row is updated each step (including rows with a zero in
/// the pivot column), which is what keeps the exact-division invariant valid
/// on a sparse layout. All derived operations (rank, nullspace, solve) share
/// this one routine, so results are deterministic for a given entry order.
class SparseMatrix {
 public:
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Accumulates v into entry (r, c).
  void add(int r, int c, const Scalar& v);

  /// Entries of row r, sorted by column, zeros pruned.
  std::vector<std::pair<int, Scalar>> row(int r) const;

  int rank() const;

  /// Basis of {x : Mx = 0}. One vector per free column, in ascending column
  /// order, normalized with 1 at the free coordinate. Empty when the kernel is
  /// trivial.
  std::vector<std::vector<Scalar>> nullspace() const;

  /// Any particular solution of Mx = b (free coordinates set to 0), or nullopt
  /// when the system is inconsistent.
  std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const;

 private:
  using IntRow = std::vector<std::pair<int, Integer>>;

  struct Echelon {
    std::vector<IntRow> rows;     // first `rank` rows are the echelon rows
    std::vector<int> pivot_col;   // strictly increasing, size == rank
    int rank = 0;
  };

  /// Runs the elimination. Columns >= pivot_limit never become pivots (used to
  /// keep an augmented right-hand side out of the pivot set).
  Echelon echelonize(const std::vector<IntRow>& input, int pivot_limit) const;

  std::vector<IntRow> integer_rows(const std::vector<Scalar>* augment) const;

  int rows_, cols_;
  std::vector<std::vector<std::pair<int, Scalar>>> data_;  // unsorted triplets
};

/// Determinant by rational Gaussian elimination; matrix must be square.
Scalar dense_det(std::vector<std::vector<Scalar>> m);

/// Incremental exact rank tracker: feed vectors, learn which extend the span.
/// Used to extract independent subsets deterministically (first-come wins).
class SpanTracker {
 public:
  explicit SpanTracker(int dim) : dim_(dim) {}

  /// Returns true (and absorbs v) when v is independent of the span so far.
  bool absorb(const std::vector<Scalar>& v);

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  int dim_;
  std::vector<std::vector<Scalar>> rows_;  // reduced rows
  std::vector<int> lead_;                  // leading column of each row
};

}  // namespace gs
