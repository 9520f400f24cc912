#pragma once

// Exact scalar arithmetic for the quadratic field Q(sqrt(q)) together with a
// thin arbitrary-precision floating point layer (MPFR via Boost.Multiprecision).
//
// Every exact quantity in this library is a value
//
//     x = a + b*sqrt(q),       a, b in Q,  0 < q < 1 rational,
//
// because the lattice step q^{s-1/2} introduces a single factor sqrt(q) into
// otherwise rational data.  When q itself is a square of a rational (e.g.
// q = 1/4) the representation is canonicalized by folding b*sqrt(q) into the
// rational part, so equality of values is equality of (a, b) pairs.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace qmeix {

using Rational = boost::multiprecision::mpq_rational;
using Integer  = boost::multiprecision::mpz_int;

// Variable-precision MPFR real; precision is carried per value (in bits).
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// error taxonomy
// ---------------------------------------------------------------------------

enum class ErrorCode {
  InvalidParams,        // rejected input parameters / mode misuse
  NonIntegerBeta,       // exact mode requires a positive integer beta
  BetaUnderflow,        // a parameter shift would push beta below 1
  TransformInadmissible,// alpha shift leaves the admissible range
  WindowUnderflow,      // grid window too small for the requested operation
  CacheMiss,            // required family member absent from a cache
  TailBoundFailure,     // requested truncation tolerance unreachable
  NonzeroResidual,      // an identity that must vanish exactly did not
  CoefficientMismatch,  // closed-form coefficients disagree with the oracle
  ZeroCountMismatch,    // wrong number of certified zeros located
  BracketingFailure,    // sign-change search exhausted its refinement budget
  PrecisionExhausted,   // numeric refinement stalled before the target
  InexactDivision,      // polynomial division left a nonzero remainder
  SingularSystem,       // exact linear solve met a singular matrix
  InconsistentSystem,   // overdetermined exact solve had no solution
  DegreeCertificateFailure, // interpolated polynomial failed its extra-node check
  NotMonic,             // constructed polynomial is not monic
  Internal,             // broken internal invariant
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

// ---------------------------------------------------------------------------
// QField: the session context carrying the fixed base q
// ---------------------------------------------------------------------------

// One field object is created per choice of q and shared (immutably) by all
// scalars, polynomials and grids derived from it.  No global state.
struct QField {
  Rational q;
  std::optional<Rational> sqrt_q;  // engaged iff q is the square of a rational

  static std::shared_ptr<const QField> make(const Rational& q);

  // q^e for integer e (negative exponents allowed; q != 0).
  Rational q_pow(long e) const;
};

using FieldPtr = std::shared_ptr<const QField>;

// ---------------------------------------------------------------------------
// QScalar
// ---------------------------------------------------------------------------

class QScalar {
public:
  // Default construction gives the rational value 0 with no attached field;
  // such values combine freely with scalars of any field.
  QScalar() = default;
  QScalar(const Rational& a, FieldPtr fld) : a_(a), fld_(std::move(fld)) { normalize(); }
  QScalar(const Rational& a, const Rational& b, FieldPtr fld)
      : a_(a), b_(b), fld_(std::move(fld)) { normalize(); }

  static QScalar from_int(long v) { return QScalar(Rational(v), nullptr); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const FieldPtr& field() const { return fld_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  QScalar operator-() const;
  QScalar& operator+=(const QScalar& o);
  QScalar& operator-=(const QScalar& o);
  QScalar& operator*=(const QScalar& o);
  QScalar& operator/=(const QScalar& o);

  friend QScalar operator+(QScalar l, const QScalar& r) { return l += r; }
  friend QScalar operator-(QScalar l, const QScalar& r) { return l -= r; }
  friend QScalar operator*(QScalar l, const QScalar& r) { return l *= r; }
  friend QScalar operator/(QScalar l, const QScalar& r) { return l /= r; }

  friend bool operator==(const QScalar& l, const QScalar& r) {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }
  friend bool operator!=(const QScalar& l, const QScalar& r) { return !(l == r); }

  // Multiplicative inverse; the norm a^2 - b^2 q of a nonzero element is
  // nonzero (sqrt(q) irrational after canonicalization), so this is total
  // away from 0.
  QScalar inverse() const;

  // Exact sign of the real value a + b*sqrt(q): -1, 0 or +1.  Mixed-sign
  // components are decided by comparing a^2 with b^2 q, which never ties for
  // nonzero values (the norm is nonzero).
  int sign() const;

  std::string str() const;  // "a" or "a + b*sqrt(q)" style, for diagnostics

private:
  void normalize();

  Rational a_{0};
  Rational b_{0};
  FieldPtr fld_;  // null only for pure rationals created without a field
};

// Picks the common field of two scalars (either may be field-free rational).
FieldPtr unify_fields(const FieldPtr& x, const FieldPtr& y);

// q^{h/2} as an exact element of Q(sqrt(q)); h may be negative.
// Even h stays rational, odd h lands in the sqrt(q) component (which the
// constructor folds back into the rational part when sqrt(q) is rational).
QScalar qpow_half(const FieldPtr& fld, long h);

inline QScalar qscalar_rational(const Rational& a, const FieldPtr& fld) {
  return QScalar(a, fld);
}

// ---------------------------------------------------------------------------
// numeric layer
// ---------------------------------------------------------------------------

struct NumScalar {
  Real value;
  unsigned precision_bits = 0;
};

// Decimal digits that guarantee at least `bits` bits of mantissa.
unsigned digits_for_bits(unsigned bits);

// Scoped override of the MPFR working precision used for fresh Real values.
// Single-threaded helper: the underlying default is process-wide.
class PrecisionGuard {
public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
  unsigned saved_digits_;
};

// Rounds x to a float of `bits` bits.  Internally evaluated with 64 guard
// bits, so |result - exact| <= 2^{1-bits} |exact| always holds.
NumScalar to_numeric(const QScalar& x, unsigned bits);

Real rational_to_real(const Rational& x, unsigned bits);

}  // namespace qmeix
