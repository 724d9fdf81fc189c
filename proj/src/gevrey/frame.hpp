#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gevrey/series.hpp"

namespace gs {

/// A derivation sum_j coeff[j] d/dx_j. The coefficient series share one
/// variable count and one truncation order.
struct SeriesVectorField {
  std::vector<FormalSeries> coeff;

  explicit SeriesVectorField(std::vector<FormalSeries> c);
  int n() const { return static_cast<int>(coeff.size()); }
  int order() const { return coeff.front().order; }
};

/// X applied to u, exact through min(u.order - 1, coefficient order).
FormalSeries apply_field(const SeriesVectorField& X, const FormalSeries& u);

/// The coordinate frame D_1, ..., D_n at the given order.
std::vector<SeriesVectorField> coordinate_frame(int n, int order);

using SeriesMatrix = std::vector<std::vector<FormalSeries>>;

SeriesMatrix series_matrix_identity(int n, int order);
SeriesMatrix series_matrix_mul(const SeriesMatrix& a, const SeriesMatrix& b);

/// The matrix A with D = A X: row i holds the coefficients expressing D_i in
/// the frame, i.e. A is the truncated inverse of the matrix whose row i
/// lists the coefficient series of X_i. Errors when that matrix is singular
/// at the origin.
SeriesMatrix frame_matrix(const std::vector<SeriesVectorField>& X);

/// Word of slot labels in 0..n-1.
using Slots = std::vector<int>;

/// Level-(k,i) tensor of the derivative expansion: the (I,J) entry is the
/// series coefficient that carries the frame word J (applied to u) into the
/// coordinate word I. Output words prepend the newest derivative slot.
struct PhiTensor {
  int k = 0;
  int i = 0;
  int n = 0;
  int order = 0;
  std::map<std::pair<Slots, Slots>, FormalSeries> entry;

  FormalSeries at(const Slots& I, const Slots& J) const;
  void add_entry(const Slots& I, const Slots& J, const FormalSeries& s);
};

/// A together with the recursion tensors through level k_max.
struct FrameTensors {
  SeriesMatrix A;
  std::vector<std::vector<PhiTensor>> levels;

  /// Valid for 1 <= i <= k <= k_max; the recursion treats everything else
  /// as zero.
  const PhiTensor& phi(int k, int i) const;
};

/// Runs the two-term recursion from the frame matrix: level 1 is A itself,
/// and each next level tensors A onto the newest frame slot or applies the
/// gradient to the newest coordinate slot. Each level consumes one
/// truncation order of A; errors when k_max asks for more than A carries.
FrameTensors phi_tensors(const SeriesMatrix& A, int k_max);

/// Paths from (1,1) to (k,i) in the recursion graph, C(k-1, i-1); the number
/// of summands the level-(k,i) tensor is assembled from.
Scalar phi_path_count(int k, int i);

/// Exact residual of the order-k derivative expansion of u in the frame X:
/// the coordinate word I maps to D_I u minus the tensor-contracted frame
/// derivatives, compared through every trustworthy layer.
struct ExpansionResidual {
  int k = 0;
  int checked_order = 0;
  long slots = 0;
  std::map<Slots, FormalSeries> nonzero;

  bool zero() const { return nonzero.empty(); }
};
ExpansionResidual expansion_verify(const FormalSeries& u,
                                   const std::vector<SeriesVectorField>& X,
                                   int k);

/// ratio[l] = max over words I of length l of |(X_I f)(0)| / (l! rho^l),
/// the finite-order boundedness profile of the derivative-growth criterion.
struct EstimateProfile {
  Scalar rho;
  std::vector<Scalar> ratio;
};
EstimateProfile estimate_profile(const FormalSeries& f,
                                 const std::vector<SeriesVectorField>& X,
                                 int l_max, const Scalar& rho);

/// Float view for display; everything upstream stays exact.
std::vector<double> profile_as_double(const EstimateProfile& p);

}  // namespace gs
