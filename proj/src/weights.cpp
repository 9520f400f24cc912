#include "qmeix/weights.hpp"

namespace qmeix {

namespace mp = boost::multiprecision;

namespace {

Rational rat_pow(const Rational& x, long e) {
  if (e < 0) {
    if (x == 0) fail(ErrorCode::InvalidParams, "0 cannot be raised to a negative power");
    return rat_pow(Rational(1) / x, -e);
  }
  Rational r(1), base(x);
  unsigned long k = static_cast<unsigned long>(e);
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

// admissibility: alpha_i/alpha_j must avoid q^k for |k| <= 64
constexpr long kAdmissibilityRange = 64;

}  // namespace

WeightParams WeightParams::make(FieldPtr fld, std::vector<Rational> alphas,
                                const Rational& beta, Mode mode) {
  if (!fld) fail(ErrorCode::InvalidParams, "weight parameters require a field");
  if (alphas.empty()) fail(ErrorCode::InvalidParams, "at least one measure is required");
  for (const Rational& a : alphas)
    if (!(a > 0 && a < 1))
      fail(ErrorCode::InvalidParams, "alpha parameters must lie in (0, 1)");
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j) {
      Rational ratio = alphas[i] / alphas[j];
      Rational up(1), down(1);
      for (long k = 0; k <= kAdmissibilityRange; ++k) {
        if (ratio == up || ratio == down)
          fail(ErrorCode::InvalidParams,
               "alpha_i/alpha_j coincides with a power q^k, |k| <= 64");
        up *= fld->q;
        down /= fld->q;
      }
    }
  if (!(beta > 0)) fail(ErrorCode::InvalidParams, "beta must be positive");
  WeightParams w;
  w.fld = std::move(fld);
  w.alphas = std::move(alphas);
  w.beta = beta;
  w.mode = mode;
  if (mode == Mode::Exact) w.beta_int();  // reject fractional beta up front
  return w;
}

long WeightParams::beta_int() const {
  if (mp::denominator(beta) != 1)
    fail(ErrorCode::NonIntegerBeta, "exact computation requires a positive integer beta");
  Integer num = mp::numerator(beta);
  if (num > 1000000) fail(ErrorCode::InvalidParams, "beta is unreasonably large");
  return num.convert_to<long>();
}

static void check_measure_index(const WeightParams& w, long i) {
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "measure index out of range");
}

QScalar weight_density(const WeightParams& w, long i, long s) {
  check_measure_index(w, i);
  if (s < 0) fail(ErrorCode::InvalidParams, "weight density is defined for s >= 0");
  long b = w.beta_int();
  const QField& f = *w.fld;
  Rational v = qpochhammer(f, f.q_pow(b), s) / qpochhammer(f, f.q, s) *
               rat_pow(w.alphas[static_cast<std::size_t>(i)], s);
  return QScalar(v, w.fld);
}

QScalar measure_mass(const WeightParams& w, long i, long s) {
  return weight_density(w, i, s) * qpow_half(w.fld, 2 * s - 1);
}

QScalar factorial_moment(const WeightParams& w, long i, long k) {
  check_measure_index(w, i);
  if (k < 0) fail(ErrorCode::InvalidParams, "moment order must be nonnegative");
  long b = w.beta_int();
  const QField& f = *w.fld;
  const Rational& alpha = w.alphas[static_cast<std::size_t>(i)];
  Rational v = rat_pow(alpha, k) * qpochhammer(f, f.q_pow(b), k) /
               rat_pow(1 - f.q, k) / qpochhammer(f, alpha * f.q, b + k);
  return QScalar(v, w.fld) * qpow_half(w.fld, 2 * k - 1);
}

TruncatedMoment truncated_moment(const WeightParams& w, long i, long k,
                                 const Rational& tol, unsigned bits) {
  check_measure_index(w, i);
  if (k < 0) fail(ErrorCode::InvalidParams, "moment order must be nonnegative");
  if (!(tol > 0)) fail(ErrorCode::InvalidParams, "tolerance must be positive");

  PrecisionGuard guard(bits);
  const Real qr(w.fld->q);
  const Real ar(w.alphas[static_cast<std::size_t>(i)]);
  const Real br(w.beta);
  const Real one(1);
  const Real tolr(tol);

  // lower bound for (q;q)_infinity: (q;q)_N (1 - q^{N+1}/(1-q)) with N chosen
  // so the bracket stays above 1/2
  Real qq_n = one;
  Real qpow = qr;  // q^{N+1} as N advances from 0
  long N = 0;
  while (!(qpow / (one - qr) < Real(0.5))) {
    qq_n *= (one - qpow);
    qpow *= qr;
    ++N;
    if (N > 100000) fail(ErrorCode::TailBoundFailure, "no usable (q;q)_infinity bound");
  }
  Real lower = qq_n * (one - qpow / (one - qr));

  Real C = pow(one - qr, -static_cast<int>(k)) / sqrt(qr) / lower;
  const Real aq = ar * qr;

  // per-term state
  Real mass = one / sqrt(qr);          // omega(s) for the current s
  Real qpow_beta = pow(qr, br);        // q^{beta+s}
  Real qpow_s1 = qr;                   // q^{s+1}
  Real qpow_s = one;                   // q^s
  std::vector<Real> qneg;              // q^{-j}, j = 0..k-1
  qneg.reserve(static_cast<std::size_t>(k));
  {
    Real v = one;
    for (long j = 0; j < k; ++j) {
      qneg.push_back(v);
      v /= qr;
    }
  }

  Real sum(0);
  Real bound = C * aq / (one - aq);  // tail bound after including s = 0
  long s = 0;
  for (;; ++s) {
    if (s > 1000000) fail(ErrorCode::TailBoundFailure, "tail bound did not reach tolerance");
    if (s >= k) {
      Real fact = one;
      for (long j = 0; j < k; ++j) fact *= (qpow_s * qneg[static_cast<std::size_t>(j)] - one) / (qr - one);
      sum += fact * mass;
    }
    if (bound < tolr && s >= k) break;
    mass *= aq * (one - qpow_beta) / (one - qpow_s1);
    qpow_beta *= qr;
    qpow_s1 *= qr;
    qpow_s *= qr;
    bound *= aq;
  }
  return TruncatedMoment{NumScalar{std::move(sum), bits}, NumScalar{std::move(bound), bits}, s};
}

QScalar mixed_moment(const WeightParams& w, long i, long j, long k) {
  check_measure_index(w, i);
  if (j < 0 || k < 0) fail(ErrorCode::InvalidParams, "moment orders must be nonnegative");
  LatticePolynomial prod = qstirling_poly(w.fld, j) * qstirling_poly(w.fld, k);
  std::vector<QScalar> c = to_factorial_basis(prod);
  QScalar acc;
  for (std::size_t m = 0; m < c.size(); ++m)
    if (!c[m].is_zero()) acc += c[m] * factorial_moment(w, i, static_cast<long>(m));
  return acc;
}

MomentTable::MomentTable(WeightParams w, long k_max) : w_(std::move(w)), k_max_(k_max) {
  if (k_max_ < 0) fail(ErrorCode::InvalidParams, "k_max must be nonnegative");
  mu_.resize(static_cast<std::size_t>(w_.r()));
  for (long i = 0; i < w_.r(); ++i) {
    auto& row = mu_[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(k_max_) + 1);
    for (long k = 0; k <= k_max_; ++k) {
      row.push_back(factorial_moment(w_, i, k));
      if (row.back().sign() <= 0)
        fail(ErrorCode::Internal, "factorial moment is not positive");
    }
  }
}

const QScalar& MomentTable::moment(long i, long k) const {
  check_measure_index(w_, i);
  if (k < 0 || k > k_max_) fail(ErrorCode::CacheMiss, "moment order beyond cached range");
  return mu_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
}

QScalar MomentTable::mixed(long i, long j, long k) const {
  check_measure_index(w_, i);
  if (j < 0 || k < 0) fail(ErrorCode::InvalidParams, "moment orders must be nonnegative");
  if (j + k > k_max_) fail(ErrorCode::CacheMiss, "mixed moment beyond cached range");
  LatticePolynomial prod = qstirling_poly(w_.fld, j) * qstirling_poly(w_.fld, k);
  std::vector<QScalar> c = to_factorial_basis(prod);
  QScalar acc;
  for (std::size_t m = 0; m < c.size(); ++m)
    if (!c[m].is_zero()) acc += c[m] * moment(i, static_cast<long>(m));
  return acc;
}

}  // namespace qmeix
