#include "qmeix/classical.hpp"

#include <algorithm>
#include <map>

namespace mp = boost::multiprecision;

namespace qmeix {

namespace {

// (a)_k = a (a+1) ... (a+k-1)
Rational rising(const Rational& a, long k) {
  Rational v = 1;
  for (long t = 0; t < k; ++t) v *= a + t;
  return v;
}

Rational falling_eval(long x, long k) {
  Rational v = 1;
  for (long t = 0; t < k; ++t) v *= x - t;
  return v;
}

void require_index(const ClassicalParams& w, const MultiIndex& n) {
  if (n.r() != w.r())
    fail(ErrorCode::InvalidParams, "multi-index order does not match parameter order");
}

}  // namespace

// ---------------------------------------------------------------------------
// XPolynomial
// ---------------------------------------------------------------------------

XPolynomial::XPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void XPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

XPolynomial XPolynomial::constant(const Rational& c) { return XPolynomial({c}); }

XPolynomial XPolynomial::monomial(long deg, const Rational& c) {
  std::vector<Rational> v(static_cast<size_t>(deg) + 1, Rational(0));
  v.back() = c;
  return XPolynomial(std::move(v));
}

Rational XPolynomial::coeff(long k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return c_[static_cast<size_t>(k)];
}

Rational XPolynomial::leading_coeff() const { return c_.empty() ? Rational(0) : c_.back(); }

bool XPolynomial::is_monic() const { return !c_.empty() && c_.back() == 1; }

Rational XPolynomial::operator()(const Rational& x) const {
  Rational v = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

XPolynomial XPolynomial::operator-() const {
  XPolynomial out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

XPolynomial& XPolynomial::operator+=(const XPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

XPolynomial& XPolynomial::operator-=(const XPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

XPolynomial operator*(const XPolynomial& l, const XPolynomial& r) {
  if (l.is_zero() || r.is_zero()) return XPolynomial();
  std::vector<Rational> out(l.c_.size() + r.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < l.c_.size(); ++i)
    for (size_t j = 0; j < r.c_.size(); ++j) out[i + j] += l.c_[i] * r.c_[j];
  return XPolynomial(std::move(out));
}

XPolynomial XPolynomial::scaled(const Rational& c) const {
  XPolynomial out = *this;
  for (auto& v : out.c_) v *= c;
  out.trim();
  return out;
}

XPolynomial XPolynomial::shifted(long h) const {
  // Horner in (x + h)
  XPolynomial out;
  XPolynomial lin({Rational(h), Rational(1)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    out = out * lin + XPolynomial::constant(*it);
  return out;
}

XPolynomial falling_factorial_poly(long k) {
  XPolynomial p = XPolynomial::constant(Rational(1));
  for (long t = 0; t < k; ++t) p = p * XPolynomial({Rational(-t), Rational(1)});
  return p;
}

std::vector<Rational> to_falling_basis(const XPolynomial& p) {
  std::vector<Rational> c(static_cast<size_t>(p.degree() + 1), Rational(0));
  XPolynomial rem = p;
  for (long k = p.degree(); k >= 0; --k) {
    Rational ck = rem.coeff(k);  // falling factorials are monic
    c[static_cast<size_t>(k)] = ck;
    rem -= falling_factorial_poly(k).scaled(ck);
  }
  if (!rem.is_zero()) fail(ErrorCode::Internal, "falling-basis conversion left a remainder");
  return c;
}

// ---------------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------------

ClassicalParams ClassicalParams::make(std::vector<Rational> alphas, const Rational& beta) {
  if (alphas.empty()) fail(ErrorCode::InvalidParams, "need at least one weight");
  for (const auto& a : alphas)
    if (!(a > 0 && a < 1)) fail(ErrorCode::InvalidParams, "alpha outside (0,1)");
  for (size_t i = 0; i < alphas.size(); ++i)
    for (size_t j = i + 1; j < alphas.size(); ++j)
      if (alphas[i] == alphas[j]) fail(ErrorCode::InvalidParams, "alphas must be distinct");
  if (!(beta > 0)) fail(ErrorCode::InvalidParams, "beta must be positive");
  return {std::move(alphas), beta};
}

long ClassicalParams::beta_int() const {
  if (mp::denominator(beta) != 1)
    fail(ErrorCode::NonIntegerBeta, "this path needs a positive integer beta");
  Integer num = mp::numerator(beta);
  if (num > 1000000) fail(ErrorCode::InvalidParams, "beta is unreasonably large");
  return num.convert_to<long>();
}

// ---------------------------------------------------------------------------
// recurrence and construction
// ---------------------------------------------------------------------------

ClassicalRecurrence classical_recurrence_coeffs(const ClassicalParams& w,
                                                const MultiIndex& n, long k) {
  require_index(w, n);
  if (k < 0 || k >= w.r()) fail(ErrorCode::InvalidParams, "recurrence direction out of range");
  const long N = n.total();
  ClassicalRecurrence out;
  out.b = (w.beta + N) * w.alphas[static_cast<size_t>(k)] /
          (1 - w.alphas[static_cast<size_t>(k)]);
  for (long i = 0; i < w.r(); ++i)
    out.b += Rational(n[i]) / (1 - w.alphas[static_cast<size_t>(i)]);
  out.d.reserve(static_cast<size_t>(w.r()));
  for (long i = 0; i < w.r(); ++i) {
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    out.d.push_back(a * n[i] * (w.beta + N - 1) / ((a - 1) * (a - 1)));
  }
  return out;
}

XPolynomial classical_construct(const ClassicalParams& w, const MultiIndex& n) {
  require_index(w, n);
  std::map<std::vector<long>, XPolynomial> fam;
  // walk the componentwise box below n in |m|-then-lex order
  std::vector<std::vector<long>> box;
  std::vector<long> cur(static_cast<size_t>(w.r()), 0);
  auto rec = [&](auto&& self, long pos) -> void {
    if (pos == w.r()) {
      box.push_back(cur);
      return;
    }
    for (long v = 0; v <= n[pos]; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  std::sort(box.begin(), box.end(), [](const auto& a, const auto& b) {
    long sa = 0, sb = 0;
    for (long v : a) sa += v;
    for (long v : b) sb += v;
    return sa != sb ? sa < sb : a < b;
  });
  XPolynomial xpoly = XPolynomial::monomial(1, Rational(1));
  for (const auto& m : box) {
    MultiIndex mi(m);
    if (mi.total() == 0) {
      fam[m] = XPolynomial::constant(Rational(1));
      continue;
    }
    long k = 0;
    while (m[static_cast<size_t>(k)] == 0) ++k;
    MultiIndex prev = mi.bump(k, -1);
    ClassicalRecurrence rc = classical_recurrence_coeffs(w, prev, k);
    const XPolynomial& pm = fam.at(prev.entries());
    XPolynomial step = xpoly * pm - pm.scaled(rc.b);
    for (long i = 0; i < w.r(); ++i)
      if (prev[i] > 0)
        step -= fam.at(prev.bump(i, -1).entries()).scaled(rc.d[static_cast<size_t>(i)]);
    fam[m] = std::move(step);
  }
  XPolynomial out = fam.at(n.entries());
  if (out.degree() != n.total() || !out.is_monic())
    fail(ErrorCode::Internal, "recurrence build lost monicity");
  return out;
}

// ---------------------------------------------------------------------------
// raising, Rodrigues, difference equation
// ---------------------------------------------------------------------------

namespace {

XPolynomial raising_core_classical(const Rational& alpha, const Rational& beta,
                                   const XPolynomial& p) {
  XPolynomial t1 = XPolynomial({alpha * (beta - 1), alpha}) * p;
  XPolynomial t2 = XPolynomial::monomial(1, Rational(1)) * p.shifted(-1);
  return (t1 - t2).scaled(1 / (1 - alpha));
}

}  // namespace

XPolynomial classical_raising_apply(const ClassicalParams& w, long i, const XPolynomial& p) {
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "raising component out of range");
  if (w.beta < 2) fail(ErrorCode::BetaUnderflow, "raising target needs beta >= 2");
  return raising_core_classical(w.alphas[static_cast<size_t>(i)], w.beta, p);
}

XPolynomial classical_rodrigues(const ClassicalParams& w, const MultiIndex& n) {
  require_index(w, n);
  const long N = n.total();
  const long beta = w.beta_int();
  const long hi = 2 * N + 2;

  // g(x) = (beta+N)_x / x! on [0, hi]; reads below 0 give 0
  std::vector<Rational> g(static_cast<size_t>(hi) + 1);
  for (long x = 0; x <= hi; ++x)
    g[static_cast<size_t>(x)] = rising(Rational(beta + N), x) / rising(Rational(1), x);
  auto at = [&](const std::vector<Rational>& v, long x) -> Rational {
    return x < 0 ? Rational(0) : v[static_cast<size_t>(x)];
  };
  for (long i = w.r() - 1; i >= 0; --i) {
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    Rational pw = 1;
    for (long x = 0; x <= hi; ++x, pw *= a) g[static_cast<size_t>(x)] *= pw;
    for (long t = 0; t < n[i]; ++t) {
      std::vector<Rational> nx(g.size());
      for (long x = 0; x <= hi; ++x) nx[static_cast<size_t>(x)] = at(g, x) - at(g, x - 1);
      g = std::move(nx);
    }
    pw = 1;
    for (long x = 0; x <= hi; ++x, pw /= a) g[static_cast<size_t>(x)] *= pw;
  }

  Rational pref = rising(w.beta, N);
  for (long i = 0; i < w.r(); ++i) {
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    for (long t = 0; t < n[i]; ++t) pref *= a / (a - 1);
  }
  std::vector<Rational> vals(static_cast<size_t>(N) + 2);
  for (long x = 0; x <= N + 1; ++x)
    vals[static_cast<size_t>(x)] =
        pref * rising(Rational(1), x) / rising(w.beta, x) * g[static_cast<size_t>(x)];

  // Newton interpolation over falling factorials at x = 0..N
  std::vector<Rational> c;
  c.reserve(static_cast<size_t>(N) + 1);
  for (long k = 0; k <= N; ++k) {
    Rational v = vals[static_cast<size_t>(k)];
    for (long j = 0; j < k; ++j) v -= c[static_cast<size_t>(j)] * falling_eval(k, j);
    c.push_back(v / falling_eval(k, k));
  }
  XPolynomial p;
  for (long k = 0; k <= N; ++k) p += falling_factorial_poly(k).scaled(c[static_cast<size_t>(k)]);
  if (p(Rational(N + 1)) != vals[static_cast<size_t>(N) + 1])
    fail(ErrorCode::DegreeCertificateFailure,
         "interpolant misses the certificate node x = " + std::to_string(N + 1));
  if (p.degree() != N || !p.is_monic())
    fail(ErrorCode::NotMonic, "normalized output is not monic of degree " + std::to_string(N));
  return p;
}

XPolynomial classical_diffeq_residual(const ClassicalParams& w, const MultiIndex& n) {
  require_index(w, n);
  const long r = w.r();
  if (w.beta < r + 1)
    fail(ErrorCode::BetaUnderflow, "difference equation needs beta >= r+1");
  XPolynomial Mn = classical_construct(w, n);

  // forward difference, then the chain of raisings through components r..1;
  // the operand after the difference lives at beta+1, each raising steps the
  // reached member's beta down by one
  XPolynomial p = Mn.shifted(1) - Mn;
  for (long t = 1; t <= r; ++t) {
    long ci = r - t;
    p = raising_core_classical(w.alphas[static_cast<size_t>(ci)], w.beta + 2 - t, p);
  }
  XPolynomial res = std::move(p);
  for (long i = 0; i < r; ++i) {
    if (n[i] == 0) continue;
    XPolynomial pi = Mn;
    long t = 1;
    for (long j = r - 1; j >= 0; --j) {
      if (j == i) continue;
      pi = raising_core_classical(w.alphas[static_cast<size_t>(j)], w.beta + 1 - t, pi);
      ++t;
    }
    res += pi.scaled(Rational(n[i]));
  }
  return res;
}

// ---------------------------------------------------------------------------
// truncated-sum oracle
// ---------------------------------------------------------------------------

ClassicalResidual classical_orthogonality_residual(const ClassicalParams& w,
                                                   const XPolynomial& p, long i, long j,
                                                   const Rational& tol, unsigned bits) {
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "measure index out of range");
  if (j < 0) fail(ErrorCode::InvalidParams, "test index out of range");
  if (!(tol > 0)) fail(ErrorCode::InvalidParams, "tolerance must be positive");
  PrecisionGuard guard(bits);
  const Rational& alpha = w.alphas[static_cast<size_t>(i)];

  // integrand P(x) = p(x) * (-x)_j in the falling-factorial basis
  XPolynomial negp = XPolynomial::constant(Rational(1));
  for (long t = 0; t < j; ++t) negp = negp * XPolynomial({Rational(t), Rational(-1)});
  std::vector<Rational> c = to_falling_basis(p * negp);
  const long D = static_cast<long>(c.size()) - 1;

  // weight terms obey t(x+1)/t(x) = alpha (beta+x)/(x+1); against the k-th
  // falling factorial the ratio becomes alpha (beta+x)/(x+1-k), which drops
  // below rho = (1+alpha)/2 once x >= (alpha beta - rho (1-D)) / (rho - alpha)
  Rational rho = (1 + alpha) / 2;
  Rational xsafe = (alpha * w.beta - rho * (1 - D)) / (rho - alpha);

  Real value = rational_to_real(Rational(0), bits);
  Real bound = value;
  Rational t = 1;  // v_i(x), exact
  long x = 0;
  const long max_iter = 1000000;
  for (;; ++x) {
    if (x > max_iter)
      fail(ErrorCode::TailBoundFailure, "tolerance unreachable within the iteration budget");
    Rational px = 0;
    for (long k = 0; k <= D; ++k) {
      if (c[static_cast<size_t>(k)] == 0) continue;
      px += c[static_cast<size_t>(k)] * falling_eval(x, k);
    }
    value += rational_to_real(px * t, bits);
    Rational tnext = t * alpha * (w.beta + x) / (x + 1);
    if (x + 1 > xsafe && x >= D) {
      // tail <= sum_k |c_k| (x+1)_k * t(x+1) / (1 - rho)
      Rational tail = 0;
      for (long k = 0; k <= D; ++k) {
        Rational ab = c[static_cast<size_t>(k)] < 0 ? -c[static_cast<size_t>(k)]
                                                    : c[static_cast<size_t>(k)];
        tail += ab * falling_eval(x + 1, k);
      }
      tail *= tnext / (1 - rho);
      if (tail < tol) {
        bound = rational_to_real(tail, bits);
        break;
      }
    }
    t = std::move(tnext);
  }
  return {{value, bits}, {bound, bits}, x};
}

}  // namespace qmeix
