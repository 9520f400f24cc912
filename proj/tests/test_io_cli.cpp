#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "qmeix/json_io.hpp"
#include "qmeix/mop_core.hpp"

using namespace qmeix;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

// QMEIX_CLI_PATH is injected by the build; stderr is dropped so only the
// machine-readable stream is captured.
CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(QMEIX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t nread = 0;
  while ((nread = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, nread);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Rational rat(long num, long den) { return Rational(num) / den; }

WeightParams base_params() {
  return WeightParams::make(QField::make(rat(1, 4)), {rat(1, 3)}, 1, Mode::Exact);
}

}  // namespace

TEST_CASE("strict rational parsing") {
  CHECK(rational_from_string("3") == 3);
  CHECK(rational_from_string("-5/7") == rat(-5, 7));
  CHECK(rational_from_string("4/6") == rat(2, 3));  // reduced on construction
  CHECK(rational_from_string("007") == 7);
  for (const char* bad : {"", "0.5", "1/0", "1//2", "-", "+3", "1/-2", "abc", "1 /2", "/3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(rational_from_string(bad), Error);
  }
}

TEST_CASE("scalar and polynomial json round trips") {
  // q = 1/3 keeps sqrt(q) irrational, so both components survive
  FieldPtr f3 = QField::make(rat(1, 3));
  QScalar x(rat(2, 3), rat(-1, 7), f3);
  OrderedJson j = qscalar_to_json(x);
  CHECK(j["a"] == "2/3");
  CHECK(j["b"] == "-1/7");
  CHECK(qscalar_from_json(j, f3) == x);

  // at q = 1/4 the root is rational and the representation canonicalizes
  WeightParams w = base_params();
  OrderedJson jc = qscalar_to_json(QScalar(rat(2, 3), rat(-1, 7), w.fld));
  CHECK(jc["a"] == "25/42");  // 2/3 - (1/7)*(1/2)
  CHECK(jc["b"] == "0");

  LatticePolynomial p({QScalar(rat(1, 2), 0, w.fld), QScalar(0, rat(3, 5), w.fld),
                       QScalar::from_int(1)},
                      w.fld);
  OrderedJson pj = polynomial_to_json(p);
  CHECK(pj["basis"] == "monomial_x");
  CHECK(pj["coeffs"].size() == 3);
  LatticePolynomial back = polynomial_from_json(pj, w.fld);
  REQUIRE(back.degree() == p.degree());
  for (long d = 0; d <= p.degree(); ++d) CHECK(back.coeff(d) == p.coeff(d));

  pj["basis"] = "chebyshev";
  CHECK_THROWS_AS(polynomial_from_json(pj, w.fld), Error);
}

TEST_CASE("family member json round trip and cross checks") {
  WeightParams w = base_params();
  MopPolynomial m = solve_orthogonality(w, MultiIndex({2}));
  OrderedJson j = mop_to_json(m);
  CHECK(j["n"] == OrderedJson::array({2}));
  CHECK(j["method"] == "oracle");
  CHECK(j["monic"] == true);

  MopPolynomial back = mop_from_json(j, w);
  CHECK(back.index == m.index);
  CHECK(back.method == m.method);
  REQUIRE(back.poly.degree() == 2);
  for (long d = 0; d <= 2; ++d) CHECK(back.poly.coeff(d) == m.poly.coeff(d));

  OrderedJson tampered = j;
  tampered["monic"] = false;
  CHECK_THROWS_AS(mop_from_json(tampered, w), Error);

  tampered = j;
  tampered["coeffs"].erase(2);  // degree no longer matches the index
  CHECK_THROWS_AS(mop_from_json(tampered, w), Error);

  tampered = j;
  tampered["n"] = OrderedJson::array({1, 1});
  CHECK_THROWS_AS(mop_from_json(tampered, w), Error);
}

TEST_CASE("verification report schema") {
  VerifyReport r = run_suite(base_params(), "kratio", 2);
  OrderedJson j = report_to_json(r);
  CHECK(j["suite"] == "kratio");
  CHECK(j["hard_failure"] == false);
  CHECK(j["counts"]["exact-pass"].get<long>() == static_cast<long>(r.entries.size()));
  CHECK(j["counts"]["mismatch"] == 0);
  CHECK(j["counts"]["mismatch-documented"] == 0);
  REQUIRE(!j["entries"].empty());
  const OrderedJson& e = j["entries"][0];
  CHECK(e.contains("identity"));
  CHECK(e.contains("params"));
  CHECK(e.contains("n"));
  CHECK(e["status"] == "exact-pass");
  CHECK(e["residual"] == "0");
}

TEST_CASE("cli gen reproduces the degree-one member") {
  CliResult r = run_cli("gen --q 1/4 --alpha 1/3 --beta 1 --n 1 --method oracle");
  REQUIRE(r.exit_code == 0);
  OrderedJson j = OrderedJson::parse(r.out);
  CHECK(j["n"] == OrderedJson::array({1}));
  CHECK(j["method"] == "oracle");
  CHECK(j["monic"] == true);
  REQUIRE(j["coeffs"].size() == 2);
  CHECK(j["coeffs"][0]["a"] == "-4/47");
  CHECK(j["coeffs"][0]["b"] == "0");
  CHECK(j["coeffs"][1]["a"] == "1");

  CliResult zero = run_cli("gen --q 1/4 --alpha 1/3 --beta 1 --n 0");
  REQUIRE(zero.exit_code == 0);
  OrderedJson jz = OrderedJson::parse(zero.out);
  REQUIRE(jz["coeffs"].size() == 1);
  CHECK(jz["coeffs"][0]["a"] == "1");
}

TEST_CASE("cli construction methods agree byte for byte") {
  const std::string tail = " --q 1/4 --alpha 1/3,1/5 --beta 2 --n 2,1";
  CliResult oracle = run_cli("gen --method oracle" + tail);
  CliResult rodrigues = run_cli("gen --method rodrigues" + tail);
  CliResult recurrence = run_cli("gen --method recurrence" + tail);
  REQUIRE(oracle.exit_code == 0);
  REQUIRE(rodrigues.exit_code == 0);
  REQUIRE(recurrence.exit_code == 0);
  // method tag differs, the coefficient payload must not
  OrderedJson jo = OrderedJson::parse(oracle.out);
  OrderedJson jr = OrderedJson::parse(rodrigues.out);
  OrderedJson jc = OrderedJson::parse(recurrence.out);
  CHECK(jr["method"] == "rodrigues");
  CHECK(jc["method"] == "recurrence");
  CHECK(jo["coeffs"] == jr["coeffs"]);
  CHECK(jo["coeffs"] == jc["coeffs"]);
}

TEST_CASE("cli output is deterministic across runs") {
  const std::string cmd = "verify --suite recurrence --max-order 2";
  CliResult a = run_cli(cmd);
  CliResult b = run_cli(cmd);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());

  CliResult za = run_cli("zeros --q 1/4 --alpha 1/3 --beta 1 --n 3");
  CliResult zb = run_cli("zeros --q 1/4 --alpha 1/3 --beta 1 --n 3");
  CHECK(za.out == zb.out);
}

TEST_CASE("cli exit codes separate validation from verification") {
  CHECK(run_cli("gen --q 0.25").exit_code == 1);
  CHECK(run_cli("gen --q 1/4 --alpha 1/3 --beta 3/2").exit_code == 1);
  CHECK(run_cli("gen --q 3/2").exit_code == 1);
  CHECK(run_cli("gen --alpha 1/3,1/5 --n 1").exit_code == 1);
  CHECK(run_cli("verify --suite nope").exit_code == 1);
  CHECK(run_cli("limit --m-range 50..52 --n 1").exit_code == 1);

  // at two weights the stated down-shift identity genuinely fails; the
  // verifier must say so with a hard status
  CliResult low = run_cli("verify --suite lowering --alpha 1/17,1/25 --max-order 2");
  CHECK(low.exit_code == 2);
  OrderedJson j = OrderedJson::parse(low.out);
  CHECK(j["hard_failure"] == true);
  CHECK(j["counts"]["mismatch"].get<long>() >= 1);

  // same suite with one weight is exact everywhere
  CHECK(run_cli("verify --suite lowering --max-order 3").exit_code == 0);
  CHECK(run_cli("verify --suite kratio").exit_code == 0);
}

TEST_CASE("cli recurrence flags the printed b value") {
  CliResult r = run_cli("recurrence --q 1/4 --alpha 1/3 --beta 1 --n 0 --k 1");
  REQUIRE(r.exit_code == 0);
  OrderedJson j = OrderedJson::parse(r.out);
  CHECK(j["b"]["oracle"]["a"] == "4/47");
  CHECK(j["b"]["formula"]["a"] == "-53/1034");
  CHECK(j["b"]["match"] == false);
  CHECK(j["c"]["is_one"] == true);
  CHECK(j["d"][0]["match"] == true);

  CliResult csv = run_cli("recurrence --q 1/4 --alpha 1/3 --beta 1 --n 0 --k 1 --out csv");
  CHECK(csv.out.rfind("coeff,oracle,formula,match\n", 0) == 0);
  CHECK(csv.out.find("c_normalized,1,1,true") != std::string::npos);
}

TEST_CASE("cli moments table layout") {
  CliResult r = run_cli("moments --alpha 1/3 --beta 1 --max-order 2 --out csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("i,k,exact_a,exact_b,numeric\n", 0) == 0);
  CHECK(r.out.find("1,0,24/11,0,") != std::string::npos);  // q-mass at q=1/4, a=1/3, b=1

  CliResult num = run_cli(
      "moments --alpha 1/3 --beta 3/2 --mode numeric --max-order 1 --tol 1/1000000000 --out csv");
  REQUIRE(num.exit_code == 0);
  CHECK(num.out.find("1,0,,,") != std::string::npos);  // no exact columns in numeric mode
  CHECK(run_cli("moments --i 3 --out csv").exit_code == 1);
}

TEST_CASE("cli zeros reports count hull and interlacing") {
  CliResult r = run_cli("zeros --q 1/4 --alpha 1/3 --beta 1 --n 2");
  REQUIRE(r.exit_code == 0);
  OrderedJson j = OrderedJson::parse(r.out);
  CHECK(j["count"] == 2);
  CHECK(j["hull"] == "4/3");
  CHECK(j["zeros"].size() == 2);
  REQUIRE(j["interlacing"].size() == 1);
  CHECK(j["interlacing"][0]["with"] == OrderedJson::array({3}));
  CHECK(j["interlacing"][0]["interlaced"] == true);
}

TEST_CASE("cli limit study emits the shared csv layout") {
  CliResult r = run_cli("limit --alpha 1/3 --beta 2 --n 1 --k 1 --m-range 4..6 --out csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("m,q,coeff_name,q_value,classical_value,abs_error,ratio\n", 0) == 0);
  CHECK(r.out.find("4,15/16,b,") != std::string::npos);
  CHECK(r.out.find(",3/2,") != std::string::npos);  // classical d1 target

  CliResult json = run_cli("limit --alpha 1/3 --beta 2 --n 1 --k 1 --m-range 4..8");
  OrderedJson j = OrderedJson::parse(json.out);
  CHECK(j["monotone"] == true);
  CHECK(j["rows"].size() == 10);
  CHECK(j["rows"][0]["ratio"].is_null());
}
