#include "qmeix/lattice.hpp"

namespace qmeix {

Rational lattice_x(const QField& fld, long s) {
  // (q^s - 1)/(q - 1); exact for any integer s
  return (fld.q_pow(s) - 1) / (fld.q - 1);
}

Rational qpochhammer(const QField& fld, const Rational& a, long k) {
  if (k < 0) fail(ErrorCode::InvalidParams, "qpochhammer needs k >= 0");
  Rational r(1), aq = a;
  for (long j = 0; j < k; ++j) {
    r *= 1 - aq;
    aq *= fld.q;
  }
  return r;
}

Rational qstirling_eval(const QField& fld, long s, long k) {
  if (k < 0) fail(ErrorCode::InvalidParams, "qstirling_eval needs k >= 0");
  Rational r(1);
  for (long j = 0; j < k; ++j) r *= lattice_x(fld, s - j);
  return r;
}

// ---------------------------------------------------------------------------
// LatticePolynomial
// ---------------------------------------------------------------------------

LatticePolynomial::LatticePolynomial(std::vector<QScalar> coeffs, FieldPtr fld)
    : c_(std::move(coeffs)), fld_(std::move(fld)) {
  trim();
}

LatticePolynomial LatticePolynomial::constant(const QScalar& c, FieldPtr fld) {
  LatticePolynomial p(std::move(fld));
  if (!c.is_zero()) p.c_.push_back(c);
  return p;
}

LatticePolynomial LatticePolynomial::monomial(long deg, const QScalar& c, FieldPtr fld) {
  LatticePolynomial p(std::move(fld));
  if (!c.is_zero()) {
    p.c_.assign(static_cast<size_t>(deg) + 1, QScalar());
    p.c_.back() = c;
  }
  return p;
}

void LatticePolynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

QScalar LatticePolynomial::coeff(long k) const {
  if (k < 0 || k >= static_cast<long>(c_.size())) return QScalar();
  return c_[static_cast<size_t>(k)];
}

QScalar LatticePolynomial::leading_coeff() const {
  return c_.empty() ? QScalar() : c_.back();
}

bool LatticePolynomial::is_monic() const {
  return !c_.empty() && c_.back() == QScalar::from_int(1);
}

QScalar LatticePolynomial::operator()(const QScalar& x) const {
  QScalar acc;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

QScalar LatticePolynomial::eval_at_node(long s) const {
  return (*this)(QScalar(lattice_x(*fld_, s), fld_));
}

LatticePolynomial LatticePolynomial::operator-() const {
  LatticePolynomial r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

LatticePolynomial& LatticePolynomial::operator+=(const LatticePolynomial& o) {
  fld_ = unify_fields(fld_, o.fld_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

LatticePolynomial& LatticePolynomial::operator-=(const LatticePolynomial& o) {
  fld_ = unify_fields(fld_, o.fld_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

LatticePolynomial operator*(const LatticePolynomial& l, const LatticePolynomial& r) {
  FieldPtr fld = unify_fields(l.fld_, r.fld_);
  if (l.is_zero() || r.is_zero()) return LatticePolynomial::zero(fld);
  std::vector<QScalar> out(l.c_.size() + r.c_.size() - 1);
  for (size_t i = 0; i < l.c_.size(); ++i)
    for (size_t j = 0; j < r.c_.size(); ++j) out[i + j] += l.c_[i] * r.c_[j];
  return LatticePolynomial(std::move(out), fld);
}

LatticePolynomial LatticePolynomial::scaled(const QScalar& c) const {
  if (c.is_zero()) return zero(fld_);
  LatticePolynomial r(*this);
  for (auto& x : r.c_) x *= c;
  r.trim();
  return r;
}

LatticePolynomial LatticePolynomial::compose_affine(const QScalar& u, const QScalar& v) const {
  // Horner in the substituted variable: p(uX+v)
  LatticePolynomial acc = zero(fld_);
  LatticePolynomial lin({v, u}, fld_);
  for (size_t i = c_.size(); i-- > 0;) {
    acc = acc * lin;
    acc += constant(c_[i], fld_);
  }
  return acc;
}

LatticePolynomial shift_plus(const LatticePolynomial& p) {
  const FieldPtr& f = p.field();
  return p.compose_affine(QScalar(f->q, f), QScalar::from_int(1));
}

LatticePolynomial shift_minus(const LatticePolynomial& p) {
  const FieldPtr& f = p.field();
  Rational invq = 1 / f->q;
  return p.compose_affine(QScalar(invq, f), QScalar(-invq, f));
}

namespace {

// Exact division by (q-1) X + 1.  The numerators produced by the divided
// differences always vanish at X = 1/(1-q), so a nonzero remainder signals a
// broken invariant rather than bad input.
LatticePolynomial divide_by_qs(const LatticePolynomial& num) {
  const FieldPtr& f = num.field();
  if (num.is_zero()) return num;
  QScalar lead(f->q - 1, f);  // coefficient of X in the divisor
  std::vector<QScalar> rem(num.coeffs());
  long dn = num.degree();
  std::vector<QScalar> quot(static_cast<size_t>(dn));
  for (long k = dn; k >= 1; --k) {
    QScalar t = rem[static_cast<size_t>(k)] / lead;
    quot[static_cast<size_t>(k - 1)] = t;
    rem[static_cast<size_t>(k)] = QScalar();
    rem[static_cast<size_t>(k - 1)] -= t;  // subtract t * (constant term 1)
  }
  if (!rem[0].is_zero())
    fail(ErrorCode::InexactDivision, "divided difference not divisible by (q-1)X+1");
  return LatticePolynomial(std::move(quot), f);
}

}  // namespace

LatticePolynomial delta_op(const LatticePolynomial& p) {
  // q^{1/2} (p(qX+1) - p(X)) / ((q-1)X + 1)
  LatticePolynomial num = shift_plus(p) - p;
  return divide_by_qs(num).scaled(qpow_half(p.field(), 1));
}

LatticePolynomial nabla_op(const LatticePolynomial& p) {
  // q^{1/2} (p(X) - p((X-1)/q)) / ((q-1)X + 1)
  LatticePolynomial num = p - shift_minus(p);
  return divide_by_qs(num).scaled(qpow_half(p.field(), 1));
}

LatticePolynomial qstirling_poly(const FieldPtr& fld, long k) {
  if (k < 0) fail(ErrorCode::InvalidParams, "qstirling_poly needs k >= 0");
  // [s]^{(k)} = prod_{j=0}^{k-1} (q^{-j} X + x(-j))
  LatticePolynomial p = LatticePolynomial::constant(QScalar::from_int(1), fld);
  for (long j = 0; j < k; ++j) {
    LatticePolynomial lin({QScalar(lattice_x(*fld, -j), fld), QScalar(fld->q_pow(-j), fld)}, fld);
    p = p * lin;
  }
  return p;
}

std::vector<QScalar> to_factorial_basis(const LatticePolynomial& p) {
  const FieldPtr& f = p.field();
  long d = p.degree();
  if (d < 0) return {};
  std::vector<QScalar> out(static_cast<size_t>(d) + 1);
  LatticePolynomial rest = p;
  for (long k = d; k >= 0; --k) {
    // leading coefficient of [s]^{(k)} is q^{-k(k-1)/2}
    QScalar lc(f->q_pow(-(k * (k - 1) / 2)), f);
    QScalar ck = rest.coeff(k) / lc;
    out[static_cast<size_t>(k)] = ck;
    if (!ck.is_zero()) rest -= qstirling_poly(f, k).scaled(ck);
    if (rest.degree() >= k)
      fail(ErrorCode::Internal, "factorial basis conversion failed to lower degree");
  }
  if (!rest.is_zero()) fail(ErrorCode::Internal, "factorial basis conversion residue");
  return out;
}

LatticePolynomial from_factorial_basis(const std::vector<QScalar>& c, const FieldPtr& fld) {
  LatticePolynomial p = LatticePolynomial::zero(fld);
  for (size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) p += qstirling_poly(fld, static_cast<long>(k)).scaled(c[k]);
  return p;
}

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(long s_min, std::vector<QScalar> values, FieldPtr fld,
                           bool zero_below_zero)
    : s_min_(s_min), v_(std::move(values)), fld_(std::move(fld)), zbz_(zero_below_zero) {
  if (v_.empty()) fail(ErrorCode::WindowUnderflow, "empty grid window");
}

QScalar GridFunction::value(long s) const {
  if (s < s_min_) {
    if (zbz_ && s < 0) return QScalar();
    fail(ErrorCode::WindowUnderflow, "grid read below window");
  }
  if (s > s_max()) fail(ErrorCode::WindowUnderflow, "grid read above window");
  return v_[static_cast<size_t>(s - s_min_)];
}

void GridFunction::scale_exponential(const Rational& base) {
  if (base <= 0) fail(ErrorCode::InvalidParams, "exponential base must be positive");
  // g^s across the window, built incrementally from g^{s_min}
  Rational g(1);
  {
    Rational b = base;
    long e = s_min_;
    if (e < 0) { b = 1 / b; e = -e; }
    for (long i = 0; i < e; ++i) g *= b;
  }
  for (size_t i = 0; i < v_.size(); ++i) {
    v_[i] *= QScalar(g, fld_);
    g *= base;
  }
  // zero stays zero below the window, so the zbz flag survives scaling
}

void GridFunction::scale_pointwise(const std::vector<QScalar>& factors_from_smin) {
  if (factors_from_smin.size() != v_.size())
    fail(ErrorCode::InvalidParams, "pointwise factor window mismatch");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] *= factors_from_smin[i];
}

GridFunction grid_nabla(const GridFunction& f) {
  const FieldPtr& fld = f.field();
  long lo = (f.zero_below_zero() && f.s_min() <= 0) ? f.s_min() : f.s_min() + 1;
  if (lo > f.s_max()) fail(ErrorCode::WindowUnderflow, "grid too small for nabla");
  std::vector<QScalar> out;
  out.reserve(static_cast<size_t>(f.s_max() - lo + 1));
  for (long s = lo; s <= f.s_max(); ++s) {
    QScalar prev = (s - 1 < f.s_min() && f.zero_below_zero() && s - 1 < 0)
                       ? QScalar()
                       : f.value(s - 1);
    QScalar diff = f.value(s) - prev;
    // divide by q^{s-1/2}
    out.push_back(diff * qpow_half(fld, 1 - 2 * s));
  }
  return GridFunction(lo, std::move(out), fld, f.zero_below_zero());
}

GridFunction sample_polynomial(const LatticePolynomial& p, long s_lo, long s_hi) {
  if (s_hi < s_lo) fail(ErrorCode::InvalidParams, "empty sampling window");
  std::vector<QScalar> vals;
  vals.reserve(static_cast<size_t>(s_hi - s_lo + 1));
  for (long s = s_lo; s <= s_hi; ++s) vals.push_back(p.eval_at_node(s));
  return GridFunction(s_lo, std::move(vals), p.field());
}

}  // namespace qmeix
