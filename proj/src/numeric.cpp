#include "qmeix/numeric_verify.hpp"

#include <algorithm>
#include <ios>

namespace qmeix {

namespace {

int sgn(const Real& v) { return v == 0 ? 0 : (v < 0 ? -1 : 1); }

Real horner(const std::vector<Real>& cf, const Real& x) {
  Real v = cf.back();
  for (auto it = cf.rbegin() + 1; it != cf.rend(); ++it) v = v * x + *it;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// limit study
// ---------------------------------------------------------------------------

LimitStudy limit_study(const ClassicalParams& cw, const MultiIndex& n, long k,
                       const std::vector<long>& m_range, unsigned bits) {
  if (n.r() != cw.r()) fail(ErrorCode::InvalidParams, "multi-index order mismatch");
  if (k < 0 || k >= cw.r()) fail(ErrorCode::InvalidParams, "direction out of range");
  if (m_range.empty()) fail(ErrorCode::InvalidParams, "empty m range");
  for (size_t t = 0; t < m_range.size(); ++t) {
    if (m_range[t] < 2) fail(ErrorCode::InvalidParams, "limit study needs m >= 2");
    if (t > 0 && m_range[t] <= m_range[t - 1])
      fail(ErrorCode::InvalidParams, "m range must be strictly increasing");
    if (m_range[t] > 40)
      fail(ErrorCode::PrecisionExhausted,
           "q_m too close to 1 for the exact q-side; supported range is m <= 40");
  }
  cw.beta_int();  // the exact q-side shares the integer-beta requirement
  PrecisionGuard guard(bits);

  std::vector<std::string> names{"b"};
  std::vector<Rational> targets;
  {
    ClassicalRecurrence cc = classical_recurrence_coeffs(cw, n, k);
    targets.push_back(cc.b);
    for (long i = 0; i < cw.r(); ++i) {
      if (n[i] == 0) continue;  // d_i = 0 on both sides; nothing to study
      names.push_back("d" + std::to_string(i + 1));
      targets.push_back(cc.d[static_cast<size_t>(i)]);
    }
  }

  LimitStudy out;
  out.monotone = true;
  std::vector<Real> prev(names.size());
  std::vector<bool> has_prev(names.size(), false);
  std::vector<std::vector<Real>> ratios(names.size());

  for (long m : m_range) {
    Rational qm = 1 - Rational(1, Integer(1) << m);
    FieldPtr f = QField::make(qm);
    WeightParams wq = WeightParams::make(f, cw.alphas, cw.beta);
    FamilyCache cache(wq);
    RecurrenceOracle oc = recurrence_coeffs_oracle(wq, n, k, cache);

    std::vector<QScalar> qvals{oc.b};
    for (long i = 0; i < cw.r(); ++i)
      if (n[i] > 0) qvals.push_back(oc.d[static_cast<size_t>(i)]);

    for (size_t t = 0; t < names.size(); ++t) {
      QScalar err = qvals[t] - qscalar_rational(targets[t], f);
      if (err.sign() < 0) err = -err;
      LimitRow row;
      row.m = m;
      row.q = qm;
      row.coeff_name = names[t];
      row.q_value = to_numeric(qvals[t], bits);
      row.classical_value = targets[t];
      row.abs_error = to_numeric(err, bits);
      if (has_prev[t] && prev[t] > 0) {
        row.ratio = NumScalar{row.abs_error.value / prev[t], bits};
        row.has_ratio = true;
        ratios[t].push_back(row.ratio.value);
        if (!(row.abs_error.value < prev[t])) out.monotone = false;
      } else if (has_prev[t]) {
        out.monotone = false;  // a vanished error cannot keep decreasing
      }
      prev[t] = row.abs_error.value;
      has_prev[t] = true;
      out.rows.push_back(std::move(row));
    }
  }

  out.band_ok = true;
  for (const auto& rs : ratios) {
    if (rs.empty()) {
      out.band_ok = false;
      continue;
    }
    size_t cnt = std::min<size_t>(3, rs.size());
    for (size_t t = rs.size() - cnt; t < rs.size(); ++t)
      if (!(rs[t] >= 0.25 && rs[t] <= 0.75)) out.band_ok = false;
  }
  return out;
}

std::string limit_study_csv(const LimitStudy& t) {
  std::string out = "m,q,coeff_name,q_value,classical_value,abs_error,ratio\n";
  for (const LimitRow& r : t.rows) {
    out += std::to_string(r.m);
    out += ',';
    out += r.q.str();
    out += ',';
    out += r.coeff_name;
    out += ',';
    out += r.q_value.value.str(20, std::ios_base::scientific);
    out += ',';
    out += r.classical_value.str();
    out += ',';
    out += r.abs_error.value.str(20, std::ios_base::scientific);
    out += ',';
    if (r.has_ratio) out += r.ratio.value.str(20, std::ios_base::scientific);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// zeros
// ---------------------------------------------------------------------------

std::vector<NumScalar> find_zeros(const MopPolynomial& p, unsigned precision) {
  if (precision < 32) fail(ErrorCode::InvalidParams, "zero search needs at least 32 bits");
  const long N = p.index.total();
  if (p.poly.degree() != N || !p.poly.is_monic())
    fail(ErrorCode::NotMonic, "zero search expects the monic degree-|n| member");
  if (N == 0) return {};

  PrecisionGuard guard(precision);
  const QField& f = *p.params.fld;
  const Real qr = rational_to_real(f.q, precision);
  const Real hull = rational_to_real(Rational(1) / (1 - f.q), precision);

  std::vector<Real> cf, dcf;
  cf.reserve(static_cast<size_t>(N) + 1);
  for (long k = 0; k <= N; ++k) cf.push_back(to_numeric(p.poly.coeff(k), precision).value);
  for (long k = 1; k <= N; ++k) dcf.push_back(cf[static_cast<size_t>(k)] * k);

  auto eval_nonzero = [&](Real x) -> std::pair<Real, int> {
    Real v = horner(cf, x);
    if (v == 0) {  // nudge off an exact hit; signs are the whole certificate
      x += ldexp(hull, -static_cast<int>(precision) + 8);
      v = horner(cf, x);
      if (v == 0)
        fail(ErrorCode::BracketingFailure, "polynomial vanishes at a sample beyond nudging");
    }
    return {v, sgn(v)};
  };

  // isolation: sign changes over x(j * 2^{-lev}), j = 0, 1, ..., plus the
  // hull endpoint; halving the step in s refines everywhere at once since the
  // nodes accumulate geometrically at the hull
  std::vector<std::pair<Real, Real>> brackets;
  long s_units = 48;
  bool isolated = false;
  for (int lev = 0; lev <= 14 && !isolated; ++lev, s_units += 8) {
    brackets.clear();
    const long steps = s_units << lev;
    const Real qstep = pow(qr, ldexp(Real(1), -lev));
    Real qs = 1;
    Real x_prev = 0;
    int sign_prev = eval_nonzero(x_prev).second;
    for (long j = 1; j <= steps; ++j) {
      qs *= qstep;
      Real x = (qs - 1) / (qr - 1);
      int s = eval_nonzero(x).second;
      if (s != sign_prev) brackets.emplace_back(x_prev, x);
      x_prev = x;
      sign_prev = s;
    }
    if (eval_nonzero(hull).second != sign_prev) brackets.emplace_back(x_prev, hull);
    isolated = static_cast<long>(brackets.size()) == N;
  }
  if (!isolated)
    fail(ErrorCode::ZeroCountMismatch,
         "isolated " + std::to_string(brackets.size()) + " sign changes, expected " +
             std::to_string(N));

  // certification: bisect each bracket below the distinctness resolution,
  // then polish the midpoint (the bracket, not the polish, is the evidence)
  const Real wmin = ldexp(Real(1), -static_cast<int>(precision) / 2 - 8);
  std::vector<NumScalar> zeros;
  zeros.reserve(static_cast<size_t>(N));
  for (auto& [lo, hi] : brackets) {
    const int slo = eval_nonzero(lo).second;
    long iter = 0;
    while (hi - lo > wmin) {
      if (++iter > 4096)
        fail(ErrorCode::BracketingFailure, "bisection failed to contract a bracket");
      Real mid = (lo + hi) / 2;
      auto [v, s] = eval_nonzero(mid);
      (void)v;
      if (s == slo)
        lo = mid;
      else
        hi = mid;
    }
    Real z = (lo + hi) / 2;
    for (int it = 0; it < 4; ++it) {
      Real dv = horner(dcf, z);
      if (dv == 0) break;
      Real step = horner(cf, z) / dv;
      Real zn = z - step;
      if (!(zn > lo && zn < hi)) break;
      z = zn;
    }
    zeros.push_back(NumScalar{z, precision});
  }

  for (size_t j = 0; j < zeros.size(); ++j) {
    const Real& z = zeros[j].value;
    if (!(z > 0 && z < hull))
      fail(ErrorCode::ZeroCountMismatch, "zero located outside the support hull");
    if (j > 0 && !(z - zeros[j - 1].value > ldexp(Real(1), -static_cast<int>(precision) / 2)))
      fail(ErrorCode::ZeroCountMismatch, "zeros not resolved as pairwise distinct");
  }
  return zeros;
}

bool zeros_interlace(const std::vector<NumScalar>& lo, const std::vector<NumScalar>& hi) {
  if (hi.size() != lo.size() + 1) return false;
  for (size_t j = 0; j < lo.size(); ++j) {
    if (!(hi[j].value < lo[j].value)) return false;
    if (!(lo[j].value < hi[j + 1].value)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// truncated orthogonality residual
// ---------------------------------------------------------------------------

NumScalar numeric_orthogonality_residual(const MopPolynomial& p, long i, long k,
                                         const Rational& tol, unsigned bits) {
  const WeightParams& w = p.params;
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "measure index out of range");
  if (k < 0) fail(ErrorCode::InvalidParams, "moment order must be nonnegative");
  if (!(tol > 0)) fail(ErrorCode::InvalidParams, "tolerance must be positive");
  PrecisionGuard guard(bits);

  std::vector<QScalar> c = to_factorial_basis(p.poly * qstirling_poly(w.fld, k));
  const Rational share = tol / static_cast<long>(c.size());

  Real acc = rational_to_real(Rational(0), bits);
  for (size_t m = 0; m < c.size(); ++m) {
    if (c[m].is_zero()) continue;
    // |a + b sqrt(q)| <= |a| + |b| since sqrt(q) < 1; rational, so the
    // per-term tolerance split stays exact
    Rational mag = abs(c[m].a()) + abs(c[m].b());
    if (mag < 1) mag = 1;
    TruncatedMoment tm = truncated_moment(w, i, static_cast<long>(m), share / mag, bits);
    acc += to_numeric(c[m], bits).value * tm.value.value;
  }
  return NumScalar{acc, bits};
}

}  // namespace qmeix
