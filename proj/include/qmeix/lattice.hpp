#pragma once

// The exponential lattice x(s) = (q^s - 1)/(q - 1) and its calculus.
//
// Polynomials are stored in the monomial basis of X = x(s).  The two divided
// differences
//
//     (Delta f)(s) = (f(s+1) - f(s)) / q^{s-1/2}
//     (Nabla f)(s) = (f(s) - f(s-1)) / q^{s-1/2}
//
// map polynomials in X to polynomials in X: the shifted variables satisfy
// x(s+1) = q x(s) + 1 and x(s-1) = (x(s) - 1)/q, and q^s = (q-1) X + 1 is
// itself a polynomial in X, so both operators reduce to an exact polynomial
// division by (q-1) X + 1 followed by a factor q^{1/2}.
//
// The factorial basis [s]^{(k)} = x(s) x(s-1) ... x(s-k+1) plays the role of
// falling powers; conversions to and from it are triangular and exact.

#include <vector>

#include "qmeix/scalars.hpp"

namespace qmeix {

// x(s) for integer s (negative s allowed: x(-1) = -1/q, etc.)
Rational lattice_x(const QField& fld, long s);

// (a; q)_k = prod_{j=0}^{k-1} (1 - a q^j), k >= 0
Rational qpochhammer(const QField& fld, const Rational& a, long k);

// [s]_q = x(s) viewed as the q-number of s; evaluated factorial
// [s]^{(k)} = x(s) x(s-1) ... x(s-k+1) for integer s (any sign) and k >= 0.
Rational qstirling_eval(const QField& fld, long s, long k);

// ---------------------------------------------------------------------------
// LatticePolynomial
// ---------------------------------------------------------------------------

class LatticePolynomial {
public:
  LatticePolynomial() = default;
  explicit LatticePolynomial(FieldPtr fld) : fld_(std::move(fld)) {}
  LatticePolynomial(std::vector<QScalar> coeffs, FieldPtr fld);

  static LatticePolynomial zero(FieldPtr fld) { return LatticePolynomial(std::move(fld)); }
  static LatticePolynomial constant(const QScalar& c, FieldPtr fld);
  static LatticePolynomial monomial(long deg, const QScalar& c, FieldPtr fld);

  const FieldPtr& field() const { return fld_; }
  const std::vector<QScalar>& coeffs() const { return c_; }  // ascending degree
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  QScalar coeff(long k) const;        // 0 beyond the stored range
  QScalar leading_coeff() const;      // 0 for the zero polynomial
  bool is_monic() const;

  QScalar operator()(const QScalar& x) const;      // Horner evaluation
  QScalar eval_at_node(long s) const;              // evaluate at X = x(s)

  LatticePolynomial operator-() const;
  LatticePolynomial& operator+=(const LatticePolynomial& o);
  LatticePolynomial& operator-=(const LatticePolynomial& o);
  friend LatticePolynomial operator+(LatticePolynomial l, const LatticePolynomial& r) { return l += r; }
  friend LatticePolynomial operator-(LatticePolynomial l, const LatticePolynomial& r) { return l -= r; }
  friend LatticePolynomial operator*(const LatticePolynomial& l, const LatticePolynomial& r);
  LatticePolynomial scaled(const QScalar& c) const;

  friend bool operator==(const LatticePolynomial& l, const LatticePolynomial& r) {
    return l.c_ == r.c_;
  }
  friend bool operator!=(const LatticePolynomial& l, const LatticePolynomial& r) { return !(l == r); }

  // p(u X + v): affine substitution, used by the lattice shifts
  LatticePolynomial compose_affine(const QScalar& u, const QScalar& v) const;

private:
  void trim();
  std::vector<QScalar> c_;
  FieldPtr fld_;
};

// p(s) -> p(s+1): X -> q X + 1
LatticePolynomial shift_plus(const LatticePolynomial& p);
// p(s) -> p(s-1): X -> (X - 1)/q
LatticePolynomial shift_minus(const LatticePolynomial& p);

// Delta p and Nabla p as polynomials (degree drops by exactly one).
LatticePolynomial delta_op(const LatticePolynomial& p);
LatticePolynomial nabla_op(const LatticePolynomial& p);

// [s]^{(k)} as a polynomial in X; degree k, leading coefficient q^{-k(k-1)/2}
LatticePolynomial qstirling_poly(const FieldPtr& fld, long k);

// Exact triangular change of basis.  to_factorial_basis returns c with
// p = sum_k c[k] [s]^{(k)}; from_factorial_basis inverts it.
std::vector<QScalar> to_factorial_basis(const LatticePolynomial& p);
LatticePolynomial from_factorial_basis(const std::vector<QScalar>& c, const FieldPtr& fld);

// ---------------------------------------------------------------------------
// GridFunction: exact values on an integer window of s
// ---------------------------------------------------------------------------

// Holds f(s) for s in [s_min, s_min + size).  With zero_below_zero set, reads
// at any s < 0 return 0 (the convention 1/Gamma_q(s+1) = 0 there); this lets
// backward differences run without consuming the left edge of the window.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(long s_min, std::vector<QScalar> values, FieldPtr fld,
               bool zero_below_zero = false);

  const FieldPtr& field() const { return fld_; }
  long s_min() const { return s_min_; }
  long s_max() const { return s_min_ + static_cast<long>(v_.size()) - 1; }
  bool zero_below_zero() const { return zbz_; }

  QScalar value(long s) const;

  // pointwise f(s) *= g^s for a rational base g (g > 0)
  void scale_exponential(const Rational& base);
  // pointwise f(s) *= m(s) for an arbitrary exact factor
  void scale_pointwise(const std::vector<QScalar>& factors_from_smin);

private:
  long s_min_ = 0;
  std::vector<QScalar> v_;
  FieldPtr fld_;
  bool zbz_ = false;
};

// (Nabla f)(s) = (f(s) - f(s-1)) / q^{s-1/2} on the largest window the input
// supports: the full window when f is zero below zero, otherwise the window
// loses its leftmost point.  Throws WindowUnderflow if nothing remains.
GridFunction grid_nabla(const GridFunction& f);

// Samples a polynomial on [s_lo, s_hi].
GridFunction sample_polynomial(const LatticePolynomial& p, long s_lo, long s_hi);

}  // namespace qmeix
