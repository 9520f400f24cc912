#pragma once

// The classical multiple Meixner polynomials of the first kind — the q -> 1
// target family.  Everything here lives on the linear lattice x = 0, 1, 2, ...
// with the Pascal weights
//
//     v^{alpha_i, beta}(x) = (beta)_x alpha_i^x / x!,   0 < alpha_i < 1,
//
// and plain rational arithmetic.  The module stays deliberately thin: an AR
// recurrence builder, a Rodrigues evaluation, raising operators and the
// difference-equation residual, plus a truncated-sum moment oracle with a
// certified geometric tail (the only moment path implemented; closed forms
// are left to the tests as an independent cross-check).

#include <vector>

#include "qmeix/mop_core.hpp"

namespace qmeix {

// ---------------------------------------------------------------------------
// XPolynomial: dense polynomial in x over Q
// ---------------------------------------------------------------------------

class XPolynomial {
public:
  XPolynomial() = default;
  explicit XPolynomial(std::vector<Rational> coeffs);

  static XPolynomial constant(const Rational& c);
  static XPolynomial monomial(long deg, const Rational& c);

  const std::vector<Rational>& coeffs() const { return c_; }  // ascending
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Rational coeff(long k) const;
  Rational leading_coeff() const;
  bool is_monic() const;

  Rational operator()(const Rational& x) const;

  XPolynomial operator-() const;
  XPolynomial& operator+=(const XPolynomial& o);
  XPolynomial& operator-=(const XPolynomial& o);
  friend XPolynomial operator+(XPolynomial l, const XPolynomial& r) { return l += r; }
  friend XPolynomial operator-(XPolynomial l, const XPolynomial& r) { return l -= r; }
  friend XPolynomial operator*(const XPolynomial& l, const XPolynomial& r);
  XPolynomial scaled(const Rational& c) const;
  XPolynomial shifted(long h) const;  // p(x + h)

  friend bool operator==(const XPolynomial& l, const XPolynomial& r) { return l.c_ == r.c_; }
  friend bool operator!=(const XPolynomial& l, const XPolynomial& r) { return !(l == r); }

private:
  void trim();
  std::vector<Rational> c_;
};

// x (x-1) ... (x-k+1); the discrete analogue of x^k
XPolynomial falling_factorial_poly(long k);
// exact triangular conversion: p = sum_k c[k] * falling_factorial_poly(k)
std::vector<Rational> to_falling_basis(const XPolynomial& p);

// ---------------------------------------------------------------------------
// parameters and operations
// ---------------------------------------------------------------------------

struct ClassicalParams {
  std::vector<Rational> alphas;  // pairwise distinct, each in (0,1)
  Rational beta;                 // > 0

  static ClassicalParams make(std::vector<Rational> alphas, const Rational& beta);

  long r() const { return static_cast<long>(alphas.size()); }
  long beta_int() const;  // NonIntegerBeta when fractional (Rodrigues needs it)
};

// b = (beta+|n|) alpha_k/(1-alpha_k) + sum_i n_i/(1-alpha_i),
// d_i = alpha_i n_i (beta+|n|-1)/(alpha_i-1)^2
struct ClassicalRecurrence {
  Rational b;
  std::vector<Rational> d;
};

ClassicalRecurrence classical_recurrence_coeffs(const ClassicalParams& w,
                                                const MultiIndex& n, long k);

// Monic member of degree |n|, built from M_0 = 1 by stepping the recurrence
// x M_m = M_{m+e_k} + b M_m + sum d_i M_{m-e_i} over the componentwise box
// below n (the result is path-independent).
XPolynomial classical_construct(const ClassicalParams& w, const MultiIndex& n);

// R p = [alpha_i (beta-1+x) p(x) - x p(x-1)] / (1 - alpha_i);
// satisfies R M_n^{alpha,beta} = -M_{n+e_i}^{alpha,beta-1}.  Needs beta >= 2
// so the target parameters stay admissible.
XPolynomial classical_raising_apply(const ClassicalParams& w, long i,
                                    const XPolynomial& p);

// Grid evaluation of the Rodrigues formula (integer beta): the operators
// alpha_i^{-x} Nabla^{n_i} alpha_i^x applied to (beta+|n|)_x / x! on
// [0, 2|n|+2] (zero below 0), prefactor (beta)_{|n|} prod (alpha_i/(alpha_i-1))^{n_i}
// x! / (beta)_x, then Newton interpolation with a certificate node at |n|+1.
XPolynomial classical_rodrigues(const ClassicalParams& w, const MultiIndex& n);

// Residual of  prod_i R^{alpha_i,.} (forward difference of M_n)
//            + sum_i n_i prod_{j != i} R^{alpha_j,.} M_n,
// operators threaded with the same chain convention as the q-case (the member
// reached so far fixes each beta tag).  Identically zero in every case tested,
// r = 2 included — on the classical side the chain reading recovers the full
// theorem.  Needs beta >= r+1.
XPolynomial classical_diffeq_residual(const ClassicalParams& w, const MultiIndex& n);

// ---------------------------------------------------------------------------
// truncated-sum moment oracle
// ---------------------------------------------------------------------------

struct ClassicalResidual {
  NumScalar value;       // partial sum of p(x) (-x)_j v_i(x) over x = 0..last_x
  NumScalar tail_bound;  // certified bound on the discarded tail (< tol)
  long last_x = 0;
};

// The orthogonality sum for measure i and test index j, truncated once the
// tail is certifiably below tol: the integrand expands over falling
// factorials, and each factorial-weighted tail is geometric with ratio
// alpha (beta+x)/(x+1-k) <= (1+alpha)/2 for x large enough.
ClassicalResidual classical_orthogonality_residual(const ClassicalParams& w,
                                                   const XPolynomial& p, long i, long j,
                                                   const Rational& tol,
                                                   unsigned bits = 256);

}  // namespace qmeix
