#include "qmeix/mop_core.hpp"

// Literal transcriptions of the closed-form nearest-neighbor recurrence
// coefficients (the displayed b_{n,k}, c_{n,k} and down-coefficients).  They
// are kept in one translation unit, separate from the verified constructions,
// and are only ever *compared* against oracle projections — see
// recurrence_step and the verification suites.  Known outcome of that
// comparison: c matches the oracle through the K-ratio identity everywhere
// tested, the down-coefficients match (unconverted) for r = 1, and b
// disagrees already at n = 0, r = 1 where the oracle value is the plain
// first-moment ratio.  Nothing here is "corrected"; the comparison is the
// point.

namespace qmeix {

namespace {

QScalar qs(const Rational& v, const FieldPtr& f) { return qscalar_rational(v, f); }

}  // namespace

RecurrenceFormula recurrence_coeffs_formula(const WeightParams& w, const MultiIndex& n,
                                            long k) {
  if (w.mode != Mode::Exact)
    fail(ErrorCode::InvalidParams, "recurrence_coeffs_formula requires exact mode");
  if (n.r() != w.r())
    fail(ErrorCode::InvalidParams, "multi-index order does not match parameter order");
  if (k < 0 || k >= w.r()) fail(ErrorCode::InvalidParams, "recurrence direction out of range");
  const FieldPtr& fld = w.fld;
  const long r = w.r();
  const long N = n.total();
  const long beta = w.beta_int();
  auto alpha = [&](long i) -> const Rational& { return w.alphas[static_cast<size_t>(i)]; };
  auto qp = [&](long e) { return fld->q_pow(e); };
  auto xq = [&](long s) { return lattice_x(*fld, s); };
  const Rational& q = fld->q;

  RecurrenceFormula out;

  // c_{n,k} = q^{|n|-1/2} prod_i (a_i q^{|n|+b}-1)/(a_i q^{|n|+b+n_i}-1)
  //           * a_k q^{n_k+1} x(b+|n|) / (a_k q^{|n|+b+n_k+1}-1)
  {
    Rational v = 1;
    for (long i = 0; i < r; ++i)
      v *= (alpha(i) * qp(N + beta) - 1) / (alpha(i) * qp(N + beta + n[i]) - 1);
    v *= alpha(k) * qp(n[k] + 1) * xq(beta + N) / (alpha(k) * qp(N + beta + n[k] + 1) - 1);
    out.c = qpow_half(fld, 2 * N - 1) * qs(v, fld);
  }

  // b_{n,k} = P (S1 + (q-1) q^{|n|+b} P2 - (q-1) Px S3 + T_k) - S4
  {
    Rational P = 1;
    for (long i = 0; i < r; ++i)
      P *= (alpha(i) * qp(N + beta) - 1) / (alpha(i) * qp(N + beta + n[i]) - 1);
    Rational S1 = 0;
    for (long i = 0; i < r; ++i)
      S1 += qp(n.partial_below(i)) * xq(n[i]) * (alpha(i) * qp(n.partial_from(i)) - 1) /
            (alpha(i) * qp(N + beta) - 1);
    Rational P2 = 1;
    for (long i = 0; i < r; ++i)
      P2 *= (alpha(i) * qp(n[i]) - 1) / (alpha(i) * qp(N + beta) - 1);
    Rational Px = 1;
    for (long i = 0; i < r; ++i) Px *= xq(n[i]);
    Rational S3 = 0;
    for (long i = 0; i < r; ++i) {
      Rational t = 1;
      for (long j = 0; j <= i; ++j) t /= alpha(j) * qp(N + beta) - 1;
      S3 += t;
    }
    Rational Tk =
        qp(N) * alpha(k) * qp(n[k] + 1) * xq(beta + N) / (1 - alpha(k) * qp(N + beta + n[k] + 1));
    Rational S4 = 0;
    for (long i = 0; i < r; ++i) {
      if (n[i] == 0) continue;  // the x(n_i) factor vanishes
      Rational t = 1;
      for (long j = 0; j < r; ++j) {
        if (j == i) continue;
        t *= (alpha(i) * qp(N) - alpha(j) * qp(n[j])) /
             (alpha(i) * qp(n[i]) - alpha(j) * qp(n[j]));
      }
      t *= xq(n[i]) * (alpha(i) * qp(n[i]) - 1) / (alpha(i) * qp(N + beta + n[i]) - 1);
      t *= alpha(i) * qp(beta + N + n[i] - 1) / (alpha(i) * qp(N + beta + n[i] - 1) - 1);
      S4 += t;
    }
    out.b = qs(P * (S1 + (q - 1) * qp(N + beta) * P2 - (q - 1) * Px * S3 + Tk) - S4, fld);
  }

  // down-coefficient for component i; the inner product runs over its own
  // index l, the trailing factors reuse the outer i (most literal scoping of
  // the printed display, which reuses one symbol for both)
  out.d.reserve(static_cast<size_t>(r));
  for (long i = 0; i < r; ++i) {
    if (n[i] == 0) {
      out.d.push_back(qs(0, fld));
      continue;
    }
    Rational v = xq(n[i]);
    for (long j = 0; j < r; ++j) {
      if (j == i) continue;
      v *= (alpha(i) * qp(N) - alpha(j) * qp(n[j])) /
           (alpha(i) * qp(n[i]) - alpha(j) * qp(n[j]));
    }
    for (long l = 0; l < r; ++l) {
      v *= (alpha(l) * qp(N + beta - 1) - 1) / (alpha(l) * qp(N + beta + n[l] - 1) - 1);
      v *= (alpha(l) * qp(n[l]) - 1) / (alpha(l) * qp(N + beta + n[l]) - 1);
    }
    v *= alpha(i) * qp(N + n[i] - 1) * xq(beta + N - 1) / (alpha(i) * qp(N + beta + n[i] - 1) - 1);
    v /= alpha(i) * qp(N + beta + n[i] - 2) - 1;
    out.d.push_back(qs(v, fld));
  }
  return out;
}

}  // namespace qmeix
