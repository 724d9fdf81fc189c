#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace gs {

/// Exact rational scalar. Canonical form (reduced, positive denominator) is an
/// invariant maintained by every constructor path below; GMP arithmetic
/// preserves it.
using Scalar = mpq_class;
using Integer = mpz_class;

/// Builds num/den in canonical form. GMP does not reduce on construction, so
/// every two-argument construction must go through here.
inline Scalar frac(long num, long den = 1) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline Scalar frac(const Integer& num, const Integer& den) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

/// |s| as a fresh value.
inline Scalar abs_scalar(const Scalar& s) { return sgn(s) < 0 ? Scalar(-s) : s; }

inline std::string to_string(const Scalar& s) { return s.get_str(); }

}  // namespace gs
