#include "qmeix/scalars.hpp"

#include <cmath>
#include <sstream>

namespace qmeix {

namespace mp = boost::multiprecision;

std::shared_ptr<const QField> QField::make(const Rational& q) {
  if (!(q > 0 && q < 1)) fail(ErrorCode::InvalidParams, "q must satisfy 0 < q < 1");
  auto f = std::make_shared<QField>();
  f->q = q;
  // sqrt(q) is rational iff numerator and denominator are both perfect squares
  Integer num = mp::numerator(q), den = mp::denominator(q);
  if (mpz_perfect_square_p(num.backend().data()) &&
      mpz_perfect_square_p(den.backend().data())) {
    Integer rn = sqrt(num), rd = sqrt(den);
    f->sqrt_q = Rational(rn) / Rational(rd);
  }
  return f;
}

Rational QField::q_pow(long e) const {
  Rational r(1);
  Rational base = e >= 0 ? q : Rational(1) / q;
  unsigned long k = e >= 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

FieldPtr unify_fields(const FieldPtr& x, const FieldPtr& y) {
  if (!x) return y;
  if (!y) return x;
  if (x != y && x->q != y->q)
    fail(ErrorCode::InvalidParams, "mixing scalars from different base fields");
  return x;
}

void QScalar::normalize() {
  // mpq_rational keeps itself reduced; only the sqrt folding is ours.
  if (b_ != 0 && fld_ && fld_->sqrt_q) {
    a_ += b_ * (*fld_->sqrt_q);
    b_ = 0;
  }
  if (b_ != 0 && !fld_)
    fail(ErrorCode::Internal, "irrational part requires a field");
}

QScalar QScalar::operator-() const {
  QScalar r(*this);
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QScalar& QScalar::operator+=(const QScalar& o) {
  fld_ = unify_fields(fld_, o.fld_);
  a_ += o.a_;
  b_ += o.b_;
  normalize();
  return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) {
  fld_ = unify_fields(fld_, o.fld_);
  a_ -= o.a_;
  b_ -= o.b_;
  normalize();
  return *this;
}

QScalar& QScalar::operator*=(const QScalar& o) {
  fld_ = unify_fields(fld_, o.fld_);
  // (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 q + (a1 b2 + b1 a2) s,  s = sqrt(q)
  Rational na = a_ * o.a_;
  if (b_ != 0 && o.b_ != 0) na += b_ * o.b_ * fld_->q;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  normalize();
  return *this;
}

QScalar QScalar::inverse() const {
  if (is_zero()) fail(ErrorCode::InvalidParams, "division by zero scalar");
  if (b_ == 0) {
    QScalar r(*this);
    r.a_ = Rational(1) / a_;
    return r;
  }
  // 1/(a + b s) = (a - b s)/(a^2 - b^2 q)
  Rational norm = a_ * a_ - b_ * b_ * fld_->q;
  if (norm == 0) fail(ErrorCode::Internal, "zero norm for nonzero scalar");
  QScalar r(*this);
  r.a_ = a_ / norm;
  r.b_ = -b_ / norm;
  return r;
}

QScalar& QScalar::operator/=(const QScalar& o) { return *this *= o.inverse(); }

int QScalar::sign() const {
  auto sgn = [](const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
  if (b_ == 0) return sgn(a_);
  if (a_ == 0) return sgn(b_);  // sqrt(q) > 0
  int sa = sgn(a_), sb = sgn(b_);
  if (sa == sb) return sa;
  // opposite signs: |a| vs |b| sqrt(q) decides, i.e. a^2 vs b^2 q
  Rational d = a_ * a_ - b_ * b_ * fld_->q;
  if (d == 0) fail(ErrorCode::Internal, "zero norm for nonzero scalar");
  return d > 0 ? sa : sb;
}

std::string QScalar::str() const {
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
  } else {
    os << a_ << " + (" << b_ << ")*sqrt(q)";
  }
  return os.str();
}

QScalar qpow_half(const FieldPtr& fld, long h) {
  if (!fld) fail(ErrorCode::InvalidParams, "qpow_half requires a field");
  if (h % 2 == 0) return QScalar(fld->q_pow(h / 2), fld);
  // odd h: q^{h/2} = q^{(h-1)/2} * sqrt(q), and h-1 is even so the integer
  // division below is exact for negative h too
  long m = (h - 1) / 2;
  return QScalar(Rational(0), fld->q_pow(m), fld);
}

unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2;
}

PrecisionGuard::PrecisionGuard(unsigned bits)
    : saved_digits_(Real::default_precision()) {
  Real::default_precision(digits_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits_); }

Real rational_to_real(const Rational& x, unsigned bits) {
  PrecisionGuard g(bits);
  return Real(x);
}

NumScalar to_numeric(const QScalar& x, unsigned bits) {
  if (bits == 0) fail(ErrorCode::InvalidParams, "precision must be positive");
  Real work;
  {
    PrecisionGuard g(bits + 64);
    work = Real(x.a());
    if (x.b() != 0) {
      Real sq = sqrt(Real(x.field()->q));
      work += Real(x.b()) * sq;
    }
  }
  // round the guarded result down to the requested precision
  mpfr_prec_round(work.backend().data(), static_cast<mpfr_prec_t>(bits), MPFR_RNDN);
  return NumScalar{std::move(work), bits};
}

}  // namespace qmeix
