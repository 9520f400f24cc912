#include "qmeix/mop_core.hpp"

#include <algorithm>
#include <sstream>

namespace qmeix {

namespace {

QScalar qs(const Rational& v, const FieldPtr& f) { return qscalar_rational(v, f); }

std::string poly_brief(const LatticePolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  os << "deg " << p.degree() << ", lc " << p.leading_coeff().str();
  return os.str();
}

// Exact Gauss-Jordan on an augmented matrix (rows x (cols+1)).  Returns the
// unique solution of the first `cols` unknowns.  A missing pivot raises
// `on_singular`; with rows > cols, leftover rows must reduce to zero or
// `on_inconsistent` is raised.
std::vector<QScalar> solve_exact(std::vector<std::vector<QScalar>> a, long cols,
                                 ErrorCode on_singular, ErrorCode on_inconsistent) {
  const long rows = static_cast<long>(a.size());
  std::vector<long> pivot_row(cols, -1);
  std::vector<bool> used(rows, false);
  for (long col = 0; col < cols; ++col) {
    long piv = -1;
    for (long r0 = 0; r0 < rows; ++r0) {
      if (!used[r0] && !a[r0][col].is_zero()) { piv = r0; break; }
    }
    if (piv < 0) fail(on_singular, "no pivot in exact linear solve");
    used[piv] = true;
    pivot_row[col] = piv;
    QScalar inv = a[piv][col].inverse();
    for (auto& v : a[piv]) v *= inv;
    for (long r0 = 0; r0 < rows; ++r0) {
      if (r0 == piv || a[r0][col].is_zero()) continue;
      QScalar f = a[r0][col];
      for (long c0 = 0; c0 <= cols; ++c0) a[r0][c0] -= f * a[piv][c0];
    }
  }
  for (long r0 = 0; r0 < rows; ++r0) {
    if (used[r0]) continue;
    for (long c0 = 0; c0 <= cols; ++c0) {
      if (!a[r0][c0].is_zero())
        fail(on_inconsistent, "overdetermined exact system has no solution");
    }
  }
  std::vector<QScalar> sol(cols);
  for (long col = 0; col < cols; ++col) sol[col] = a[pivot_row[col]][cols];
  return sol;
}

void require_exact(const WeightParams& w, const char* what) {
  if (w.mode != Mode::Exact)
    fail(ErrorCode::InvalidParams, std::string(what) + " requires exact mode");
}

void require_index(const WeightParams& w, const MultiIndex& n) {
  if (n.r() != w.r())
    fail(ErrorCode::InvalidParams, "multi-index order does not match parameter order");
}

// D_q^{alpha,beta} for operands of degree big_n, with explicit scalar tags;
// shared by the public raising operator and the difference-equation chains.
LatticePolynomial raising_core(const FieldPtr& fld, const Rational& alpha, long beta,
                               long big_n, const LatticePolynomial& p) {
  Rational den = 1 - alpha * fld->q_pow(big_n + beta - 1);
  if (den == 0) fail(ErrorCode::Internal, "degenerate raising denominator");
  QScalar pref = qpow_half(fld, 2 * big_n + 1) / qs(den, fld);
  Rational aq = alpha * fld->q_pow(beta - 1);
  // [alpha q^{beta-1} (X - x(1-beta)) - X] as a linear polynomial
  LatticePolynomial lin({qs(-aq * lattice_x(*fld, 1 - beta), fld), qs(aq - 1, fld)}, fld);
  LatticePolynomial xpoly = LatticePolynomial::monomial(1, qs(1, fld), fld);
  LatticePolynomial out = lin * p + xpoly * (p - shift_minus(p));
  return out.scaled(pref);
}

// alpha^{-s} Nabla^m (alpha q^m)^s applied to a grid function.
GridFunction grid_mop_operator(const FieldPtr& fld, const Rational& alpha, long m,
                               GridFunction g) {
  g.scale_exponential(alpha * fld->q_pow(m));
  for (long t = 0; t < m; ++t) g = grid_nabla(g);
  g.scale_exponential(Rational(1) / alpha);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

MultiIndex::MultiIndex(std::vector<long> entries) : e_(std::move(entries)) {
  if (e_.empty()) fail(ErrorCode::InvalidParams, "empty multi-index");
  for (long v : e_)
    if (v < 0) fail(ErrorCode::InvalidParams, "negative multi-index entry");
}

MultiIndex MultiIndex::zeros(long r) {
  if (r < 1) fail(ErrorCode::InvalidParams, "multi-index order must be >= 1");
  return MultiIndex(std::vector<long>(static_cast<size_t>(r), 0));
}

long MultiIndex::total() const {
  long t = 0;
  for (long v : e_) t += v;
  return t;
}

long MultiIndex::partial_below(long i) const {
  long t = 0;
  for (long j = 0; j < i; ++j) t += e_[static_cast<size_t>(j)];
  return t;
}

long MultiIndex::partial_from(long i) const {
  long t = 0;
  for (long j = i; j < r(); ++j) t += e_[static_cast<size_t>(j)];
  return t;
}

MultiIndex MultiIndex::bump(long i, long delta) const {
  if (i < 0 || i >= r()) fail(ErrorCode::InvalidParams, "multi-index component out of range");
  std::vector<long> e = e_;
  e[static_cast<size_t>(i)] += delta;
  if (e[static_cast<size_t>(i)] < 0)
    fail(ErrorCode::InvalidParams, "multi-index bump below zero");
  return MultiIndex(std::move(e));
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << "(";
  for (long j = 0; j < r(); ++j) os << (j ? "," : "") << e_[static_cast<size_t>(j)];
  os << ")";
  return os.str();
}

std::vector<MultiIndex> indices_up_to(long r, long max_total) {
  if (r < 1 || max_total < 0) fail(ErrorCode::InvalidParams, "bad index sweep bounds");
  std::vector<MultiIndex> out;
  std::vector<long> cur(static_cast<size_t>(r), 0);
  for (long tot = 0; tot <= max_total; ++tot) {
    // lexicographic over compositions of tot into r parts
    auto rec = [&](auto&& self, long pos, long left) -> void {
      if (pos == r - 1) {
        cur[static_cast<size_t>(pos)] = left;
        out.push_back(MultiIndex(cur));
        return;
      }
      for (long v = 0; v <= left; ++v) {
        cur[static_cast<size_t>(pos)] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, tot);
  }
  return out;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Oracle: return "oracle";
    case Method::Rodrigues: return "rodrigues";
    case Method::Recurrence: return "recurrence";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ParamTransform
// ---------------------------------------------------------------------------

ParamTransform ParamTransform::alpha_step(long r, long i, int exponent, long beta_shift) {
  if (i < 0 || i >= r) fail(ErrorCode::InvalidParams, "transform component out of range");
  ParamTransform t;
  t.alpha_q_exponents.assign(static_cast<size_t>(r), 0);
  t.alpha_q_exponents[static_cast<size_t>(i)] = exponent;
  t.beta_shift = beta_shift;
  return t;
}

WeightParams ParamTransform::apply(const WeightParams& w) const {
  if (static_cast<long>(alpha_q_exponents.size()) != w.r())
    fail(ErrorCode::InvalidParams, "transform order does not match parameter order");
  std::vector<Rational> alphas = w.alphas;
  for (size_t i = 0; i < alphas.size(); ++i) {
    int e = alpha_q_exponents[i];
    if (e < -1 || e > 1) fail(ErrorCode::InvalidParams, "alpha factor must be one of 1, q, 1/q");
    if (e != 0) alphas[i] *= w.fld->q_pow(e);
    if (!(alphas[i] > 0 && alphas[i] < 1))
      fail(ErrorCode::TransformInadmissible,
           "alpha_" + std::to_string(i + 1) + " leaves (0,1) under the q-shift");
  }
  Rational beta = w.beta + beta_shift;
  if (w.mode == Mode::Exact ? (beta < 1) : (beta <= 0))
    fail(ErrorCode::BetaUnderflow, "beta shift lands below the admissible range");
  return WeightParams::make(w.fld, std::move(alphas), beta, w.mode);
}

// ---------------------------------------------------------------------------
// FamilyCache
// ---------------------------------------------------------------------------

const MopPolynomial* FamilyCache::find(const MultiIndex& n) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = members_.find(n);
  return it == members_.end() ? nullptr : &it->second;
}

const MopPolynomial& FamilyCache::get(const MultiIndex& n) const {
  const MopPolynomial* p = find(n);
  if (!p) fail(ErrorCode::CacheMiss, "family member " + n.str() + " not cached");
  return *p;
}

const MopPolynomial& FamilyCache::insert(MopPolynomial m) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = members_.find(m.index);
  if (it != members_.end()) {
    if (!(it->second.poly == m.poly))
      fail(ErrorCode::Internal, "conflicting cache insert for " + m.index.str());
    return it->second;
  }
  MultiIndex key = m.index;
  return members_.emplace(std::move(key), std::move(m)).first->second;
}

const MopPolynomial& FamilyCache::ensure(const MultiIndex& n) {
  if (const MopPolynomial* p = find(n)) return *p;
  return insert(solve_orthogonality(w_, n));
}

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

MopPolynomial solve_orthogonality(const WeightParams& w, const MultiIndex& n) {
  require_exact(w, "solve_orthogonality");
  require_index(w, n);
  const FieldPtr& fld = w.fld;
  const long N = n.total();
  if (N == 0) {
    return {LatticePolynomial::constant(qs(1, fld), fld), n, w, Method::Oracle};
  }
  MomentTable table(w, 2 * N);
  // monic top coefficient in the factorial basis: lc of [s]^{(N)} is
  // q^{-N(N-1)/2}, so c_N = q^{N(N-1)/2}
  QScalar cN = qs(fld->q_pow(N * (N - 1) / 2), fld);
  std::vector<std::vector<QScalar>> aug;
  aug.reserve(static_cast<size_t>(N));
  for (long i = 0; i < w.r(); ++i) {
    for (long t = 0; t < n[i]; ++t) {
      std::vector<QScalar> row(static_cast<size_t>(N) + 1);
      for (long m = 0; m < N; ++m) row[static_cast<size_t>(m)] = table.mixed(i, m, t);
      row[static_cast<size_t>(N)] = -(cN * table.mixed(i, N, t));
      aug.push_back(std::move(row));
    }
  }
  std::vector<QScalar> c =
      solve_exact(std::move(aug), N, ErrorCode::SingularSystem, ErrorCode::SingularSystem);
  c.push_back(cN);
  LatticePolynomial p = from_factorial_basis(c, fld);
  if (p.degree() != N || !p.is_monic())
    fail(ErrorCode::Internal, "orthogonality solve produced a non-monic result");
  return {std::move(p), n, w, Method::Oracle};
}

QScalar normalization_K(const WeightParams& w, const MultiIndex& n) {
  require_exact(w, "normalization_K");
  require_index(w, n);
  const FieldPtr& fld = w.fld;
  const long N = n.total();
  const long beta = w.beta_int();
  Rational rat = qstirling_eval(*fld, -beta, N);  // [-beta]^{(|n|)}
  if (N % 2 != 0) rat = -rat;
  for (long i = 0; i < w.r(); ++i) {
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    const long ni = n[i];
    Rational num = 1, den = 1;
    for (long j = 1; j <= ni; ++j) {
      num *= fld->q_pow(n.partial_below(i) + beta + j - 1);
      den *= a * fld->q_pow(N + beta + j - 1) - 1;
    }
    for (long j = 0; j < ni; ++j) num *= a;
    rat *= num / den;
    rat *= fld->q_pow(ni * n.partial_from(i));
  }
  QScalar K = qs(rat, fld) * qpow_half(fld, -N);
  if (K.is_zero()) fail(ErrorCode::Internal, "vanishing normalization constant");
  return K;
}

MopPolynomial rodrigues_construct(const WeightParams& w, const MultiIndex& n) {
  require_exact(w, "rodrigues_construct");
  require_index(w, n);
  const FieldPtr& fld = w.fld;
  const long N = n.total();
  const long beta = w.beta_int();
  const long hi = 2 * N + 2;

  // g(s) = (q^{beta+|n|}; q)_s / (q; q)_s on [0, hi], zero below 0
  std::vector<QScalar> gv;
  gv.reserve(static_cast<size_t>(hi) + 1);
  for (long s = 0; s <= hi; ++s)
    gv.push_back(qs(qpochhammer(*fld, fld->q_pow(beta + N), s) / qpochhammer(*fld, fld->q, s), fld));
  GridFunction g(0, std::move(gv), fld, /*zero_below_zero=*/true);

  for (long i = w.r() - 1; i >= 0; --i)
    g = grid_mop_operator(fld, w.alphas[static_cast<size_t>(i)], n[i], std::move(g));

  QScalar K = normalization_K(w, n);
  std::vector<QScalar> vals;  // K * (q;q)_s/(q^beta;q)_s * g(s) at s = 0..N+1
  vals.reserve(static_cast<size_t>(N) + 2);
  for (long s = 0; s <= N + 1; ++s) {
    Rational m = qpochhammer(*fld, fld->q, s) / qpochhammer(*fld, fld->q_pow(beta), s);
    vals.push_back(K * qs(m, fld) * g.value(s));
  }

  // Newton interpolation at the nodes s = 0..N in the factorial basis:
  // [s]^{(j)} vanishes at s = 0..j-1, so the coefficients come out forward.
  std::vector<QScalar> c;
  c.reserve(static_cast<size_t>(N) + 1);
  for (long k = 0; k <= N; ++k) {
    QScalar v = vals[static_cast<size_t>(k)];
    for (long j = 0; j < k; ++j) v -= c[static_cast<size_t>(j)] * qs(qstirling_eval(*fld, k, j), fld);
    c.push_back(v / qs(qstirling_eval(*fld, k, k), fld));
  }
  LatticePolynomial p = from_factorial_basis(c, fld);
  if (p.eval_at_node(N + 1) != vals[static_cast<size_t>(N) + 1])
    fail(ErrorCode::DegreeCertificateFailure,
         "interpolant misses the certificate node s = " + std::to_string(N + 1));
  if (p.degree() != N || !p.is_monic())
    fail(ErrorCode::NotMonic, "normalized output is not monic of degree " + std::to_string(N));
  return {std::move(p), n, w, Method::Rodrigues};
}

// ---------------------------------------------------------------------------
// raising / lowering
// ---------------------------------------------------------------------------

LatticePolynomial raising_apply(const WeightParams& w, long i, long big_n,
                                const LatticePolynomial& p) {
  require_exact(w, "raising_apply");
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "raising component out of range");
  // the identity's target lives at (alpha_i/q, beta-1); insist it exists
  ParamTransform::alpha_step(w.r(), i, -1, -1).apply(w);
  return raising_core(w.fld, w.alphas[static_cast<size_t>(i)], w.beta_int(), big_n, p);
}

LoweringExpansion lowering_expand(const WeightParams& w, const MultiIndex& n,
                                  const LatticePolynomial& p, bool require_zero) {
  require_exact(w, "lowering_expand");
  require_index(w, n);
  const FieldPtr& fld = w.fld;
  const long N = n.total();
  if (N < 1) fail(ErrorCode::InvalidParams, "lowering needs |n| >= 1");
  const long beta = w.beta_int();

  LoweringExpansion out;
  out.residual = delta_op(p);
  for (long i = 0; i < w.r(); ++i) {
    if (n[i] == 0) continue;  // [n_i]_q = 0
    WeightParams wt = ParamTransform::alpha_step(w.r(), i, +1, +1).apply(w);
    MopPolynomial member = solve_orthogonality(wt, n.bump(i, -1));
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    QScalar coeff = qpow_half(fld, 2 * (N - n[i]) + 1) *
                    qs((1 - a * fld->q_pow(n[i] + beta)) / (1 - a * fld->q_pow(N + beta)) *
                           lattice_x(*fld, n[i]),
                       fld);
    out.residual -= member.poly.scaled(coeff);
    out.terms.push_back({i, std::move(coeff), std::move(member)});
  }
  if (require_zero && !out.residual.is_zero())
    fail(ErrorCode::NonzeroResidual,
         "lowering expansion of n=" + n.str() + " left " + poly_brief(out.residual));
  return out;
}

// ---------------------------------------------------------------------------
// nearest-neighbor recurrence
// ---------------------------------------------------------------------------

RecurrenceOracle recurrence_coeffs_oracle(const WeightParams& w, const MultiIndex& n,
                                          long k, const FamilyCache& cache) {
  require_exact(w, "recurrence_coeffs_oracle");
  require_index(w, n);
  if (k < 0 || k >= w.r()) fail(ErrorCode::InvalidParams, "recurrence direction out of range");
  const FieldPtr& fld = w.fld;
  const long N = n.total();

  auto member = [&](const MultiIndex& m) -> LatticePolynomial {
    if (const MopPolynomial* hit = cache.find(m)) return hit->poly;
    return solve_orthogonality(w, m).poly;
  };
  LatticePolynomial Mn = member(n);
  LatticePolynomial Mup = member(n.bump(k, +1));
  std::vector<std::pair<long, LatticePolynomial>> downs;
  for (long i = 0; i < w.r(); ++i)
    if (n[i] > 0) downs.emplace_back(i, member(n.bump(i, -1)));

  LatticePolynomial xpoly = LatticePolynomial::monomial(1, qs(1, fld), fld);
  LatticePolynomial lhs = xpoly * Mn - Mup;  // degree <= N: the monic tops cancel

  const long U = 1 + static_cast<long>(downs.size());
  std::vector<std::vector<QScalar>> aug(static_cast<size_t>(N) + 1,
                                        std::vector<QScalar>(static_cast<size_t>(U) + 1));
  for (long m = 0; m <= N; ++m) {
    aug[static_cast<size_t>(m)][0] = Mn.coeff(m);
    for (size_t d = 0; d < downs.size(); ++d)
      aug[static_cast<size_t>(m)][d + 1] = downs[d].second.coeff(m);
    aug[static_cast<size_t>(m)][static_cast<size_t>(U)] = lhs.coeff(m);
  }
  std::vector<QScalar> sol =
      solve_exact(std::move(aug), U, ErrorCode::SingularSystem, ErrorCode::InconsistentSystem);

  RecurrenceOracle out;
  out.b = sol[0];
  out.d.assign(static_cast<size_t>(w.r()), QScalar());
  for (size_t d = 0; d < downs.size(); ++d)
    out.d[static_cast<size_t>(downs[d].first)] = sol[d + 1];
  return out;
}

MopPolynomial recurrence_step(const WeightParams& w, const MultiIndex& n, long k,
                              FamilyCache& cache, bool use_formula) {
  require_exact(w, "recurrence_step");
  require_index(w, n);
  if (k < 0 || k >= w.r()) fail(ErrorCode::InvalidParams, "recurrence direction out of range");
  const FieldPtr& fld = w.fld;
  const MultiIndex up = n.bump(k, +1);

  LatticePolynomial Mn = cache.get(n).poly;
  std::vector<std::pair<long, LatticePolynomial>> downs;
  for (long i = 0; i < w.r(); ++i)
    if (n[i] > 0) downs.emplace_back(i, cache.get(n.bump(i, -1)).poly);

  LatticePolynomial xpoly = LatticePolynomial::monomial(1, qs(1, fld), fld);
  LatticePolynomial result(fld);
  if (!use_formula) {
    RecurrenceOracle oc = recurrence_coeffs_oracle(w, n, k, cache);
    result = xpoly * Mn - Mn.scaled(oc.b);
    for (auto& [i, down] : downs) result -= down.scaled(oc.d[static_cast<size_t>(i)]);
  } else {
    // printed coefficients, converted to the monic normalization by K-ratios
    RecurrenceFormula fc = recurrence_coeffs_formula(w, n, k);
    QScalar Kn = normalization_K(w, n);
    QScalar scale = fc.c * Kn / normalization_K(w, up);
    result = xpoly * Mn - Mn.scaled(fc.b);
    for (auto& [i, down] : downs) {
      QScalar Di = fc.d[static_cast<size_t>(i)] * Kn / normalization_K(w, n.bump(i, -1));
      result -= down.scaled(Di);
    }
    result = result.scaled(scale.inverse());
    LatticePolynomial oracle = solve_orthogonality(w, up).poly;
    if (!(result == oracle)) {
      LatticePolynomial diff = result - oracle;
      fail(ErrorCode::CoefficientMismatch,
           "formula-coefficient step to " + up.str() + " differs from the oracle by " +
               poly_brief(diff));
    }
  }
  if (result.degree() != up.total() || !result.is_monic())
    fail(ErrorCode::Internal, "recurrence step lost monicity");
  return cache.insert({std::move(result), up, w, Method::Recurrence});
}

// ---------------------------------------------------------------------------
// difference equation
// ---------------------------------------------------------------------------

LatticePolynomial difference_equation_residual(const WeightParams& w, const MultiIndex& n) {
  require_exact(w, "difference_equation_residual");
  require_index(w, n);
  const FieldPtr& fld = w.fld;
  const long r = w.r();
  const long N = n.total();
  const long beta = w.beta_int();
  if (beta < r + 1)
    fail(ErrorCode::BetaUnderflow, "difference equation needs beta >= r+1 in exact mode");

  LatticePolynomial Mn = solve_orthogonality(w, n).poly;

  // left side: Delta M_n, then the raising chain upward through components
  // r, r-1, ..., 1; the first (rightmost) operator sees the lowering target
  // (its own alpha q-bumped, beta+1, degree |n|-1), each later one the family
  // the chain has reached so far.
  LatticePolynomial p = delta_op(Mn);
  for (long t = 1; t <= r; ++t) {
    long ci = r - t;
    Rational alpha = w.alphas[static_cast<size_t>(ci)];
    if (t == 1) alpha *= fld->q;
    p = raising_core(fld, alpha, beta + 2 - t, N + t - 2, p);
  }
  LatticePolynomial lhs = std::move(p);

  LatticePolynomial rhs(fld);
  for (long i = 0; i < r; ++i) {
    if (n[i] == 0) continue;
    LatticePolynomial pi = Mn;
    long t = 1;
    for (long j = r - 1; j >= 0; --j) {
      if (j == i) continue;
      pi = raising_core(fld, w.alphas[static_cast<size_t>(j)], beta + 1 - t, N + t - 1, pi);
      ++t;
    }
    const Rational& a = w.alphas[static_cast<size_t>(i)];
    Rational coeff = -fld->q_pow(N - n[i] + 1) * (1 - a * fld->q_pow(n[i] + beta)) /
                     (1 - a * fld->q_pow(N + beta)) * lattice_x(*fld, n[i]);
    rhs += pi.scaled(qs(coeff, fld));
  }
  return lhs - rhs;
}

// ---------------------------------------------------------------------------
// product-rule identity
// ---------------------------------------------------------------------------

GridFunction lemma51_identity_check(const WeightParams& w, long n_i, long i,
                                    const GridFunction& f) {
  if (i < 0 || i >= w.r()) fail(ErrorCode::InvalidParams, "measure index out of range");
  if (n_i < 0) fail(ErrorCode::InvalidParams, "operator order must be >= 0");
  const FieldPtr& fld = w.fld;
  const Rational& alpha = w.alphas[static_cast<size_t>(i)];
  const long m = n_i;

  GridFunction xf = f;
  {
    std::vector<QScalar> xs;
    for (long s = f.s_min(); s <= f.s_max(); ++s) xs.push_back(qs(lattice_x(*fld, s), fld));
    xf.scale_pointwise(xs);
  }
  GridFunction lhs = grid_mop_operator(fld, alpha, m, std::move(xf));
  GridFunction Mf = grid_mop_operator(fld, alpha, m, f);

  long lo = std::max(lhs.s_min(), Mf.s_min());
  GridFunction inner;
  if (m >= 1) {
    inner = f;
    inner.scale_exponential(alpha * fld->q_pow(m));
    for (long t = 0; t < m - 1; ++t) inner = grid_nabla(inner);
    inner.scale_exponential(Rational(1) / alpha);
    lo = std::max(lo, inner.s_min());
  }
  long hi = std::min(lhs.s_max(), Mf.s_max());
  if (m >= 1) hi = std::min(hi, inner.s_max());
  if (lo > hi) fail(ErrorCode::WindowUnderflow, "no window survives the product-rule check");

  QScalar bpref = m >= 1 ? qpow_half(fld, 1 - 2 * m) * qs(lattice_x(*fld, m), fld) : QScalar();
  Rational qm_inv = fld->q_pow(-m);
  Rational xm = lattice_x(*fld, m);
  std::vector<QScalar> res;
  res.reserve(static_cast<size_t>(hi - lo) + 1);
  for (long s = lo; s <= hi; ++s) {
    QScalar v = lhs.value(s);
    if (m >= 1) v -= bpref * inner.value(s);
    v -= qs((lattice_x(*fld, s) - xm) * qm_inv, fld) * Mf.value(s);
    res.push_back(std::move(v));
  }
  return GridFunction(lo, std::move(res), fld);
}

}  // namespace qmeix
