#pragma once

// The numeric layer on top of the exact core: q -> 1 limit studies of the
// recurrence coefficients against the classical family, certified zero
// location for constructed polynomials, and truncated-sum orthogonality
// residuals (the only orthogonality path open to non-integer beta).

#include <string>
#include <utility>
#include <vector>

#include "qmeix/classical.hpp"
#include "qmeix/weights.hpp"

namespace qmeix {

// ---------------------------------------------------------------------------
// limit study
// ---------------------------------------------------------------------------

// One table entry: the q-side coefficient at q_m = 1 - 2^{-m} against its
// classical target.  The q-side value is computed exactly (oracle-normalized
// monic recurrence in Q(sqrt(q_m))) and converted only here, so abs_error
// carries no solver noise beyond the final rounding.
struct LimitRow {
  long m = 0;
  Rational q;
  std::string coeff_name;  // "b", "d1", ..., "dr"
  NumScalar q_value;
  Rational classical_value;
  NumScalar abs_error;
  NumScalar ratio;  // abs_error at m divided by abs_error at the previous m
  bool has_ratio = false;
};

struct LimitStudy {
  std::vector<LimitRow> rows;  // m-major, coefficients in order b, d1, ..., dr
  // errors strictly decrease in m, separately for every coefficient
  bool monotone = false;
  // consecutive-error ratios within [1/4, 3/4] on the last three steps
  // of every coefficient (first-order convergence in 1-q, 2x margin)
  bool band_ok = false;
};

// Runs the recurrence-coefficient comparison (b, d_i for n_i > 0) between the
// q-family at q_m (same alphas and beta) and the classical family, for each m
// in m_range (ascending, each >= 2).  Exact-mode arithmetic caps m at 40;
// beyond that the denominators outgrow their usefulness and the request is
// rejected with PrecisionExhausted.
LimitStudy limit_study(const ClassicalParams& cw, const MultiIndex& n, long k,
                       const std::vector<long>& m_range, unsigned bits = 192);

// CSV rendering: header line
// m,q,coeff_name,q_value,classical_value,abs_error,ratio
// with exact rationals for q and classical_value, scientific decimals for the
// numeric columns, and an empty ratio on each coefficient's first row.
std::string limit_study_csv(const LimitStudy& t);

// ---------------------------------------------------------------------------
// zeros
// ---------------------------------------------------------------------------

// Locates all |n| zeros of a constructed member, each certified by a sign
// change across a bracket of width below 2^{-precision/2 - 8}.  The search
// refines the lattice nodes x(0), x(1), ... (halving the step in s, which
// matches the geometric accumulation of the nodes toward 1/(1-q)) until
// exactly |n| sign changes are isolated, then bisects each bracket; a Newton
// polish sharpens the midpoint but the bracket alone is the certificate.
//
// Verified on return: the count is |n|, every zero lies strictly inside
// (0, 1/(1-q)), and consecutive zeros are separated by more than
// 2^{-precision/2}.  Violations raise ZeroCountMismatch; a bracket whose
// endpoint signs degenerate raises BracketingFailure.
std::vector<NumScalar> find_zeros(const MopPolynomial& p, unsigned precision);

// True when lo and hi interlace strictly: |hi| = |lo| + 1 and
// hi_0 < lo_0 < hi_1 < ... < lo_{k-1} < hi_k.  Reported, never asserted.
bool zeros_interlace(const std::vector<NumScalar>& lo, const std::vector<NumScalar>& hi);

// ---------------------------------------------------------------------------
// truncated orthogonality residual
// ---------------------------------------------------------------------------

// sum_s p(x(s)) [s]^{(k)} omega_i(s), truncated once the certified tail drops
// below tol: the product p * [s]^{(k)} is expanded over the factorial basis
// and each coefficient delegates to the truncated moment with its share of
// the tolerance.  |result| < tol + rounding for k < n_i; for k = n_i the sum
// is the (nonzero) normalization against measure i.
NumScalar numeric_orthogonality_residual(const MopPolynomial& p, long i, long k,
                                         const Rational& tol, unsigned bits = 256);

}  // namespace qmeix
