#include "qmeix/verify.hpp"

#include <algorithm>

namespace qmeix {

namespace {

std::string poly_str(const LatticePolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out = "[";
  for (long k = 0; k <= p.degree(); ++k) {
    if (k) out += ", ";
    out += p.coeff(k).str();
  }
  return out + "]";
}

std::string params_str(const WeightParams& w) {
  std::string out = "q=" + w.fld->q.str() + " alpha=(";
  for (size_t i = 0; i < w.alphas.size(); ++i) {
    if (i) out += ",";
    out += w.alphas[i].str();
  }
  out += ") beta=" + w.beta.str();
  if (w.mode == Mode::Numeric) out += " numeric";
  return out;
}

struct SuiteContext {
  const WeightParams& w;
  long max_order;
  VerifyReport& report;

  void add(std::string identity, const MultiIndex& n, VerifyStatus status,
           std::string residual, std::string detail = "") {
    report.entries.push_back(VerifyEntry{std::move(identity), params_str(w), n, status,
                                         std::move(residual), std::move(detail)});
  }
};

void suite_orthogonality(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  for (const MultiIndex& n : indices_up_to(w.r(), cx.max_order)) {
    // the Rodrigues pipeline feeds the check, so a pass crosses two
    // independent construction paths against the closed-form moments
    MopPolynomial m = rodrigues_construct(w, n);
    MomentTable table(w, 2 * n.total());
    std::vector<QScalar> c = to_factorial_basis(m.poly);
    QScalar worst;
    for (long i = 0; i < w.r() && worst.is_zero(); ++i) {
      for (long t = 0; t < n[i] && worst.is_zero(); ++t) {
        QScalar acc;
        for (size_t j = 0; j < c.size(); ++j)
          acc += c[j] * table.mixed(i, static_cast<long>(j), t);
        if (!acc.is_zero()) worst = acc;
      }
    }
    if (worst.is_zero())
      cx.add("orthogonality", n, VerifyStatus::ExactPass, "0");
    else
      cx.add("orthogonality", n, VerifyStatus::Mismatch, worst.str(),
             "a moment sum that must vanish did not");
  }
}

void suite_raising(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  const QScalar neg_root_q = -qpow_half(w.fld, 1);
  for (long i = 0; i < w.r(); ++i) {
    WeightParams wt = ParamTransform::alpha_step(w.r(), i, -1, -1).apply(w);
    for (const MultiIndex& n : indices_up_to(w.r(), std::max<long>(cx.max_order - 1, 0))) {
      MopPolynomial p = solve_orthogonality(w, n);
      LatticePolynomial lhs = raising_apply(w, i, n.total(), p.poly);
      LatticePolynomial rhs = solve_orthogonality(wt, n.bump(i, 1)).poly.scaled(neg_root_q);
      if (lhs == rhs)
        cx.add("raising[" + std::to_string(i + 1) + "]", n, VerifyStatus::ExactPass, "0");
      else
        cx.add("raising[" + std::to_string(i + 1) + "]", n, VerifyStatus::Mismatch,
               poly_str(lhs - rhs), "operator image differs from the shifted member");
    }
  }
}

void suite_lowering(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  for (const MultiIndex& n : indices_up_to(w.r(), cx.max_order)) {
    if (n.total() == 0) continue;
    LoweringExpansion ex =
        lowering_expand(w, n, solve_orthogonality(w, n).poly, /*require_zero=*/false);
    if (ex.residual.is_zero()) {
      cx.add("lowering", n, VerifyStatus::ExactPass, "0");
    } else {
      cx.add("lowering", n, VerifyStatus::Mismatch, poly_str(ex.residual),
             "stated down coefficients fail for two or more active components: "
             "their sum already misses the forced leading coefficient");
    }
  }
}

void suite_diffeq(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  for (const MultiIndex& n : indices_up_to(w.r(), cx.max_order)) {
    LatticePolynomial res = difference_equation_residual(w, n);
    if (res.is_zero()) {
      cx.add("diffeq", n, VerifyStatus::ExactPass, "0");
    } else if (w.r() >= 2) {
      cx.add("diffeq", n, VerifyStatus::MismatchDocumented, poly_str(res),
             "chain-convention residual of the printed operator product; "
             "inherits the r >= 2 down-shift discrepancy");
    } else {
      cx.add("diffeq", n, VerifyStatus::Mismatch, poly_str(res),
             "single-weight residual must vanish");
    }
  }
}

void suite_recurrence(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  FamilyCache cache(w);
  for (const MultiIndex& n : indices_up_to(w.r(), cx.max_order)) {
    QScalar kn = normalization_K(w, n);
    for (long k = 0; k < w.r(); ++k) {
      const std::string tag = "[k=" + std::to_string(k + 1) + "]";
      RecurrenceOracle oracle;
      try {
        oracle = recurrence_coeffs_oracle(w, n, k, cache);
      } catch (const Error& e) {
        if (e.code != ErrorCode::InconsistentSystem) throw;
        cx.add("recurrence-oracle" + tag, n, VerifyStatus::Mismatch, e.what(),
               "nearest-neighbor expansion left a residual");
        continue;
      }
      cx.add("recurrence-oracle" + tag, n, VerifyStatus::ExactPass, "0");

      RecurrenceFormula formula = recurrence_coeffs_formula(w, n, k);
      QScalar c_norm = formula.c * kn * normalization_K(w, n.bump(k, 1)).inverse();
      if (c_norm == QScalar::from_int(1))
        cx.add("recurrence-c" + tag, n, VerifyStatus::ExactPass, "0");
      else
        cx.add("recurrence-c" + tag, n, VerifyStatus::Mismatch, c_norm.str(),
               "normalized up coefficient must be 1");

      if (formula.b == oracle.b)
        cx.add("recurrence-b" + tag, n, VerifyStatus::ExactPass, "0");
      else
        cx.add("recurrence-b" + tag, n, VerifyStatus::MismatchDocumented,
               (formula.b - oracle.b).str(),
               "printed diagonal coefficient disagrees with the moment oracle "
               "(formula " + formula.b.str() + ", oracle " + oracle.b.str() + ")");

      for (long i = 0; i < w.r(); ++i) {
        if (n[i] == 0) continue;
        const std::string dtag = "recurrence-d" + std::to_string(i + 1) + tag;
        if (formula.d[static_cast<size_t>(i)] == oracle.d[static_cast<size_t>(i)])
          cx.add(dtag, n, VerifyStatus::ExactPass, "0");
        else
          cx.add(dtag, n, VerifyStatus::MismatchDocumented,
                 (formula.d[static_cast<size_t>(i)] - oracle.d[static_cast<size_t>(i)]).str(),
                 "printed down coefficient disagrees with the moment oracle "
                 "(multi-component index)");
      }
    }
  }
}

void suite_kratio(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  for (const MultiIndex& n : indices_up_to(w.r(), cx.max_order)) {
    QScalar kn = normalization_K(w, n);
    for (long k = 0; k < w.r(); ++k) {
      QScalar v = recurrence_coeffs_formula(w, n, k).c * kn *
                  normalization_K(w, n.bump(k, 1)).inverse();
      const std::string tag = "kratio[k=" + std::to_string(k + 1) + "]";
      if (v == QScalar::from_int(1))
        cx.add(tag, n, VerifyStatus::ExactPass, "0");
      else
        cx.add(tag, n, VerifyStatus::Mismatch, v.str(),
               "c K_n / K_{n+e_k} must collapse to 1");
    }
  }
}

void suite_lemma51(SuiteContext& cx) {
  const WeightParams& w = cx.w;
  const long mmax = std::max<long>(1, std::min<long>(cx.max_order, 3));
  for (long i = 0; i < w.r(); ++i) {
    for (long m = 1; m <= mmax; ++m) {
      // one polynomial sample and one decidedly non-polynomial grid
      GridFunction fp = sample_polynomial(qstirling_poly(w.fld, 2), 0, 2 * m + 8);
      std::vector<QScalar> lumpy;
      for (long s = 0; s <= 2 * m + 8; ++s)
        lumpy.push_back(qscalar_rational(Rational(s * s + 1) / Rational(s + 2), w.fld));
      GridFunction fl(0, lumpy, w.fld);

      bool ok = true;
      std::string res = "0";
      for (const GridFunction* f : {&fp, &fl}) {
        GridFunction r = lemma51_identity_check(w, m, i, *f);
        for (long s = r.s_min(); s <= r.s_max() && ok; ++s) {
          if (!r.value(s).is_zero()) {
            ok = false;
            res = "s=" + std::to_string(s) + ": " + r.value(s).str();
          }
        }
        if (!ok) break;
      }
      MultiIndex n = MultiIndex::zeros(w.r()).bump(i, m);
      if (ok)
        cx.add("product-rule[m=" + std::to_string(m) + "]", n, VerifyStatus::ExactPass, "0");
      else
        cx.add("product-rule[m=" + std::to_string(m) + "]", n, VerifyStatus::Mismatch, res,
               "grid product rule must hold pointwise");
    }
  }
}

}  // namespace

const char* verify_status_name(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::ExactPass: return "exact-pass";
    case VerifyStatus::Mismatch: return "mismatch";
    case VerifyStatus::MismatchDocumented: return "mismatch-documented";
  }
  return "unknown";
}

long VerifyReport::count(VerifyStatus s) const {
  return std::count_if(entries.begin(), entries.end(),
                       [&](const VerifyEntry& e) { return e.status == s; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"orthogonality", "raising", "lowering",
                                              "diffeq",        "recurrence", "kratio",
                                              "lemma51",       "all"};
  return names;
}

VerifyReport run_suite(const WeightParams& w, const std::string& suite, long max_order) {
  if (max_order < 0) fail(ErrorCode::InvalidParams, "max order must be nonnegative");
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    fail(ErrorCode::InvalidParams, "unknown suite '" + suite + "'");

  VerifyReport report;
  report.suite = suite;
  SuiteContext cx{w, max_order, report};
  const bool all = suite == "all";
  if (all || suite == "orthogonality") suite_orthogonality(cx);
  if (all || suite == "raising") suite_raising(cx);
  if (all || suite == "lowering") suite_lowering(cx);
  if (all || suite == "diffeq") suite_diffeq(cx);
  if (all || suite == "recurrence") suite_recurrence(cx);
  if (all || suite == "kratio") suite_kratio(cx);
  if (all || suite == "lemma51") suite_lemma51(cx);
  return report;
}

}  // namespace qmeix
