// Command-line surface over the library: family generation, verification
// suites, recurrence tables, moments, certified zeros and q -> 1 limit
// studies.  All output is deterministic; rationals cross the boundary only as
// exact p/q strings.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmeix/json_io.hpp"
#include "qmeix/numeric_verify.hpp"

using namespace qmeix;

namespace {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams:
    case ErrorCode::NonIntegerBeta:
    case ErrorCode::BetaUnderflow:
    case ErrorCode::TransformInadmissible:
    case ErrorCode::WindowUnderflow:
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::TailBoundFailure:
      return 1;  // rejected input / unreachable request
    case ErrorCode::NonzeroResidual:
    case ErrorCode::CoefficientMismatch:
    case ErrorCode::ZeroCountMismatch:
    case ErrorCode::BracketingFailure:
    case ErrorCode::InconsistentSystem:
    case ErrorCode::DegreeCertificateFailure:
    case ErrorCode::NotMonic:
      return 2;  // a verified property failed
    default:
      return 3;  // broken internal invariant
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_long(const std::string& s) {
  if (s.empty()) fail(ErrorCode::InvalidParams, "empty integer");
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidParams, "malformed integer '" + s + "'");
  }
  if (used != s.size()) fail(ErrorCode::InvalidParams, "malformed integer '" + s + "'");
  return v;
}

struct Session {
  std::string q = "1/4";
  std::string alpha = "1/9";
  std::string beta = "3";
  std::string mode = "exact";
  unsigned precision = 256;
  std::string out = "json";
  std::string n_str;
  long k = 1;
  long i = 0;
  std::string method = "oracle";
  std::string suite = "all";
  long max_order = 3;
  std::string m_range = "4..10";
  std::string tol = "1/1000000000000000000000000000000";

  std::vector<Rational> alphas() const {
    std::vector<Rational> v;
    for (const std::string& part : split(alpha, ','))
      v.push_back(rational_from_string(part));
    return v;
  }

  WeightParams weights() const {
    Mode md;
    if (mode == "exact")
      md = Mode::Exact;
    else if (mode == "numeric")
      md = Mode::Numeric;
    else
      fail(ErrorCode::InvalidParams, "mode must be exact or numeric");
    return WeightParams::make(QField::make(rational_from_string(q)), alphas(),
                              rational_from_string(beta), md);
  }

  MultiIndex index(long r) const {
    if (n_str.empty()) return MultiIndex::zeros(r);
    std::vector<long> e;
    for (const std::string& part : split(n_str, ',')) {
      long v = parse_long(part);
      if (v < 0) fail(ErrorCode::InvalidParams, "multi-index entries must be >= 0");
      e.push_back(v);
    }
    if (static_cast<long>(e.size()) != r)
      fail(ErrorCode::InvalidParams, "multi-index has " + std::to_string(e.size()) +
                                         " entries for " + std::to_string(r) + " weights");
    return MultiIndex(std::move(e));
  }

  long direction(long r) const {  // --k, 1-based on the surface
    if (k < 1 || k > r)
      fail(ErrorCode::InvalidParams, "k must be between 1 and " + std::to_string(r));
    return k - 1;
  }

  std::vector<long> m_values() const {
    std::vector<long> v;
    size_t dots = m_range.find("..");
    if (dots != std::string::npos) {
      long lo = parse_long(m_range.substr(0, dots));
      long hi = parse_long(m_range.substr(dots + 2));
      for (long m = lo; m <= hi; ++m) v.push_back(m);
    } else {
      for (const std::string& part : split(m_range, ',')) v.push_back(parse_long(part));
    }
    return v;
  }

  bool csv() const {
    if (out != "json" && out != "csv")
      fail(ErrorCode::InvalidParams, "out must be json or csv");
    return out == "csv";
  }
};

std::string real_str(const Real& v) { return v.str(30, std::ios_base::scientific); }

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_gen(const Session& cfg) {
  WeightParams w = cfg.weights();
  MultiIndex n = cfg.index(w.r());
  MopPolynomial m;
  if (cfg.method == "oracle") {
    m = solve_orthogonality(w, n);
  } else if (cfg.method == "rodrigues") {
    m = rodrigues_construct(w, n);
  } else if (cfg.method == "recurrence") {
    FamilyCache cache(w);
    cache.ensure(MultiIndex::zeros(w.r()));
    for (const MultiIndex& t : indices_up_to(w.r(), n.total())) {
      if (t.total() == 0) continue;
      bool below = true;
      for (long j = 0; j < w.r(); ++j) below = below && t[j] <= n[j];
      if (!below) continue;
      long step = 0;
      while (t[step] == 0) ++step;
      recurrence_step(w, t.bump(step, -1), step, cache);
    }
    m = cache.get(n);
  } else {
    fail(ErrorCode::InvalidParams, "method must be oracle, rodrigues or recurrence");
  }
  std::cout << mop_to_json(m).dump(2) << "\n";
  return 0;
}

int cmd_verify(const Session& cfg) {
  VerifyReport report = run_suite(cfg.weights(), cfg.suite, cfg.max_order);
  std::cout << report_to_json(report).dump(2) << "\n";
  return report.hard_failure() ? 2 : 0;
}

int cmd_recurrence(const Session& cfg) {
  WeightParams w = cfg.weights();
  MultiIndex n = cfg.index(w.r());
  long k = cfg.direction(w.r());
  FamilyCache cache(w);
  RecurrenceOracle oracle = recurrence_coeffs_oracle(w, n, k, cache);
  RecurrenceFormula formula = recurrence_coeffs_formula(w, n, k);
  QScalar c_norm = formula.c * normalization_K(w, n) *
                   normalization_K(w, n.bump(k, 1)).inverse();

  if (cfg.csv()) {
    std::string outp = "coeff,oracle,formula,match\n";
    outp += "b," + oracle.b.str() + "," + formula.b.str() + "," +
            (oracle.b == formula.b ? "true" : "false") + "\n";
    outp += "c_normalized,1," + c_norm.str() + "," +
            (c_norm == QScalar::from_int(1) ? "true" : "false") + "\n";
    for (long i = 0; i < w.r(); ++i) {
      const auto ui = static_cast<size_t>(i);
      outp += "d" + std::to_string(i + 1) + "," + oracle.d[ui].str() + "," +
              formula.d[ui].str() + "," +
              (oracle.d[ui] == formula.d[ui] ? "true" : "false") + "\n";
    }
    std::cout << outp;
    return 0;
  }
  OrderedJson d = OrderedJson::array();
  for (long i = 0; i < w.r(); ++i) {
    const auto ui = static_cast<size_t>(i);
    d.push_back(OrderedJson{{"i", i + 1},
                            {"oracle", qscalar_to_json(oracle.d[ui])},
                            {"formula", qscalar_to_json(formula.d[ui])},
                            {"match", oracle.d[ui] == formula.d[ui]}});
  }
  OrderedJson j{{"n", n.entries()},
                {"k", cfg.k},
                {"b",
                 OrderedJson{{"oracle", qscalar_to_json(oracle.b)},
                             {"formula", qscalar_to_json(formula.b)},
                             {"match", oracle.b == formula.b}}},
                {"c",
                 OrderedJson{{"formula", qscalar_to_json(formula.c)},
                             {"normalized", qscalar_to_json(c_norm)},
                             {"is_one", c_norm == QScalar::from_int(1)}}},
                {"d", std::move(d)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_moments(const Session& cfg) {
  WeightParams w = cfg.weights();
  if (cfg.i < 0 || cfg.i > w.r())
    fail(ErrorCode::InvalidParams, "i must be 0 (all measures) or between 1 and " +
                                       std::to_string(w.r()));
  if (cfg.max_order < 0) fail(ErrorCode::InvalidParams, "max order must be >= 0");
  const Rational tol = rational_from_string(cfg.tol);
  const bool exact = w.mode == Mode::Exact;

  std::string csv = "i,k,exact_a,exact_b,numeric\n";
  OrderedJson rows = OrderedJson::array();
  for (long i = 0; i < w.r(); ++i) {
    if (cfg.i != 0 && i != cfg.i - 1) continue;
    for (long k = 0; k <= cfg.max_order; ++k) {
      std::string numeric;
      OrderedJson row{{"i", i + 1}, {"k", k}};
      if (exact) {
        QScalar mu = factorial_moment(w, i, k);
        numeric = real_str(to_numeric(mu, cfg.precision).value);
        csv += std::to_string(i + 1) + "," + std::to_string(k) + "," + mu.a().str() +
               "," + mu.b().str() + "," + numeric + "\n";
        row["exact"] = qscalar_to_json(mu);
      } else {
        TruncatedMoment tm = truncated_moment(w, i, k, tol, cfg.precision);
        numeric = real_str(tm.value.value);
        csv += std::to_string(i + 1) + "," + std::to_string(k) + ",,," + numeric + "\n";
        row["tail_bound"] = real_str(tm.tail_bound.value);
      }
      row["numeric"] = numeric;
      rows.push_back(std::move(row));
    }
  }
  if (cfg.csv())
    std::cout << csv;
  else
    std::cout << rows.dump(2) << "\n";
  return 0;
}

int cmd_zeros(const Session& cfg) {
  WeightParams w = cfg.weights();
  MultiIndex n = cfg.index(w.r());
  MopPolynomial m = solve_orthogonality(w, n);
  std::vector<NumScalar> zeros = find_zeros(m, cfg.precision);

  if (cfg.csv()) {
    std::string outp = "j,zero\n";
    for (size_t j = 0; j < zeros.size(); ++j)
      outp += std::to_string(j + 1) + "," + real_str(zeros[j].value) + "\n";
    std::cout << outp;
    return 0;
  }
  OrderedJson zs = OrderedJson::array();
  for (const NumScalar& z : zeros) zs.push_back(real_str(z.value));
  OrderedJson inter = OrderedJson::array();
  for (long k = 0; k < w.r(); ++k) {
    MultiIndex up = n.bump(k, 1);
    std::vector<NumScalar> zu = find_zeros(solve_orthogonality(w, up), cfg.precision);
    inter.push_back(OrderedJson{{"with", up.entries()},
                                {"interlaced", zeros_interlace(zeros, zu)}});
  }
  OrderedJson j{{"n", n.entries()},
                {"precision", cfg.precision},
                {"count", static_cast<long>(zeros.size())},
                {"hull", (Rational(1) / (1 - w.fld->q)).str()},
                {"zeros", std::move(zs)},
                {"interlacing", std::move(inter)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_limit(const Session& cfg) {
  ClassicalParams cw = ClassicalParams::make(cfg.alphas(), rational_from_string(cfg.beta));
  MultiIndex n = cfg.index(cw.r());
  LimitStudy t = limit_study(cw, n, cfg.direction(cw.r()), cfg.m_values(), cfg.precision);
  if (cfg.csv()) {
    std::cout << limit_study_csv(t);
    return 0;
  }
  OrderedJson rows = OrderedJson::array();
  for (const LimitRow& r : t.rows) {
    OrderedJson row{{"m", r.m},
                    {"q", r.q.str()},
                    {"coeff_name", r.coeff_name},
                    {"q_value", real_str(r.q_value.value)},
                    {"classical_value", r.classical_value.str()},
                    {"abs_error", real_str(r.abs_error.value)}};
    if (r.has_ratio)
      row["ratio"] = real_str(r.ratio.value);
    else
      row["ratio"] = nullptr;
    rows.push_back(std::move(row));
  }
  OrderedJson j{{"rows", std::move(rows)}, {"monotone", t.monotone}, {"band_ok", t.band_ok}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact constructor and verifier for q-lattice multiple orthogonal polynomials"};
  app.require_subcommand(1);
  Session cfg;
  int rc = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "base q, rational in (0,1)")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "comma-separated weight parameters")
        ->capture_default_str();
    sub->add_option("--beta", cfg.beta, "shared beta parameter")->capture_default_str();
    sub->add_option("--mode", cfg.mode, "exact|numeric")->capture_default_str();
    sub->add_option("--precision", cfg.precision, "working precision in bits")
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "json|csv")->capture_default_str();
    return sub;
  };

  CLI::App* gen = add_common(app.add_subcommand("gen", "construct one family member"));
  gen->add_option("--n", cfg.n_str, "multi-index, comma-separated");
  gen->add_option("--method", cfg.method, "oracle|rodrigues|recurrence")
      ->capture_default_str();
  gen->callback([&] { rc = cmd_gen(cfg); });

  CLI::App* verify = add_common(app.add_subcommand("verify", "run a verification suite"));
  verify->add_option("--suite", cfg.suite,
                     "orthogonality|raising|lowering|diffeq|recurrence|kratio|lemma51|all")
      ->capture_default_str();
  verify->add_option("--max-order", cfg.max_order, "largest |n| to sweep")
      ->capture_default_str();
  verify->callback([&] { rc = cmd_verify(cfg); });

  CLI::App* rec =
      add_common(app.add_subcommand("recurrence", "oracle vs printed coefficients"));
  rec->add_option("--n", cfg.n_str, "multi-index, comma-separated");
  rec->add_option("--k", cfg.k, "step direction, 1-based")->capture_default_str();
  rec->callback([&] { rc = cmd_recurrence(cfg); });

  CLI::App* mom = add_common(app.add_subcommand("moments", "factorial moment table"));
  mom->add_option("--i", cfg.i, "measure, 1-based; 0 for all")->capture_default_str();
  mom->add_option("--max-order", cfg.max_order, "largest moment order")
      ->capture_default_str();
  mom->add_option("--tol", cfg.tol, "truncation tolerance (numeric mode)")
      ->capture_default_str();
  mom->callback([&] { rc = cmd_moments(cfg); });

  CLI::App* zer = add_common(app.add_subcommand("zeros", "certified zeros of one member"));
  zer->add_option("--n", cfg.n_str, "multi-index, comma-separated");
  zer->callback([&] { rc = cmd_zeros(cfg); });

  CLI::App* lim =
      add_common(app.add_subcommand("limit", "q -> 1 recurrence coefficient study"));
  lim->add_option("--n", cfg.n_str, "multi-index, comma-separated");
  lim->add_option("--k", cfg.k, "step direction, 1-based")->capture_default_str();
  lim->add_option("--m-range", cfg.m_range, "q_m = 1 - 2^-m, e.g. 4..10 or 4,6,8")
      ->capture_default_str();
  lim->callback([&] { rc = cmd_limit(cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
