#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "qmeix/weights.hpp"

using namespace qmeix;

namespace {

Rational rat(long n, long d) { return Rational(n) / Rational(d); }

FieldPtr f4() { static FieldPtr f = QField::make(rat(1, 4)); return f; }
FieldPtr f3() { static FieldPtr f = QField::make(rat(1, 3)); return f; }

WeightParams params14(std::vector<Rational> alphas, long beta) {
  return WeightParams::make(f4(), std::move(alphas), Rational(beta));
}

Rational tol_pow10(unsigned digits) {
  return Rational(1) / Rational(pow(Integer(10), digits));
}

// exact determinant by Gaussian elimination over Q(sqrt(q))
QScalar det(std::vector<std::vector<QScalar>> m) {
  std::size_t n = m.size();
  QScalar d = QScalar::from_int(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return QScalar();
    if (piv != col) {
      std::swap(m[piv], m[col]);
      d = -d;
    }
    d *= m[col][col];
    QScalar inv = m[col][col].inverse();
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m[row][col].is_zero()) continue;
      QScalar f = m[row][col] * inv;
      for (std::size_t c2 = col; c2 < n; ++c2) m[row][c2] -= f * m[col][c2];
    }
  }
  return d;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params14({rat(1, 3), rat(1, 5)}, 2));
  CHECK_NOTHROW(WeightParams::make(f3(), {rat(1, 3)}, Rational(1)));

  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code;
    }
    return ErrorCode::Internal;
  };

  // alpha range
  CHECK(code([] { params14({Rational(1)}, 1); }) == ErrorCode::InvalidParams);
  CHECK(code([] { params14({Rational(0)}, 1); }) == ErrorCode::InvalidParams);
  CHECK(code([] { params14({rat(-1, 3)}, 1); }) == ErrorCode::InvalidParams);
  // admissibility: equal alphas (k = 0) and ratios hitting q^{\pm k}
  CHECK(code([] { params14({rat(1, 3), rat(1, 3)}, 1); }) == ErrorCode::InvalidParams);
  CHECK(code([] { params14({rat(1, 3), rat(1, 12)}, 1); }) == ErrorCode::InvalidParams);   // ratio 4 = q^{-1}
  CHECK(code([] { params14({rat(1, 3), rat(1, 48)}, 1); }) == ErrorCode::InvalidParams);   // ratio 16 = q^{-2}
  CHECK(code([] { params14({rat(1, 48), rat(1, 3)}, 1); }) == ErrorCode::InvalidParams);   // ratio q^2
  // beta
  CHECK(code([] { params14({rat(1, 3)}, 0); }) == ErrorCode::InvalidParams);
  CHECK(code([] { params14({rat(1, 3)}, -2); }) == ErrorCode::InvalidParams);
  CHECK(code([] { return WeightParams::make(f4(), {rat(1, 3)}, rat(3, 2)); }) ==
        ErrorCode::NonIntegerBeta);
  // fractional beta is fine in numeric mode, but exact operations reject it
  WeightParams wn = WeightParams::make(f4(), {rat(1, 3)}, rat(3, 2), Mode::Numeric);
  CHECK(code([&] { return weight_density(wn, 0, 1); }) == ErrorCode::NonIntegerBeta);
  CHECK(code([&] { return factorial_moment(wn, 0, 0); }) == ErrorCode::NonIntegerBeta);
}

TEST_CASE("weight density values") {
  WeightParams w = params14({rat(1, 3), rat(1, 5)}, 2);
  CHECK(weight_density(w, 0, 0) == QScalar::from_int(1));
  CHECK(weight_density(w, 1, 0) == QScalar::from_int(1));
  // q=1/4, alpha=1/3, beta=2, s=1: (1-q^2)/(1-q) * alpha = 5/12
  CHECK(weight_density(w, 0, 1) == QScalar(rat(5, 12), f4()));

  // beta = 1: the Pochhammer ratio cancels and the density is alpha^s
  WeightParams w1 = params14({rat(1, 3)}, 1);
  Rational as(1);
  for (long s = 0; s <= 4; ++s) {
    CHECK(weight_density(w1, 0, s) == QScalar(as, f4()));
    as /= 3;
  }

  for (long s = 0; s <= 8; ++s) CHECK(weight_density(w, 0, s).sign() == 1);

  CHECK_THROWS_AS(weight_density(w, 2, 0), Error);
  CHECK_THROWS_AS(weight_density(w, 0, -1), Error);
}

TEST_CASE("measure mass and its term ratio") {
  // mass(0) = q^{-1/2}: 2 at q=1/4, 3*sqrt(1/3) at q=1/3
  WeightParams w = params14({rat(1, 3)}, 2);
  CHECK(measure_mass(w, 0, 0) == QScalar::from_int(2));

  WeightParams w3 = WeightParams::make(f3(), {rat(1, 3)}, Rational(2));
  CHECK(measure_mass(w3, 0, 0) == QScalar(Rational(0), Rational(3), f3()));

  // mass(s+1)/mass(s) = alpha q (1 - q^{beta+s})/(1 - q^{s+1})
  for (const WeightParams& wp : {w, w3}) {
    const Rational& q = wp.fld->q;
    for (long s = 0; s <= 5; ++s) {
      QScalar lhs = measure_mass(wp, 0, s + 1);
      Rational ratio = wp.alphas[0] * q * (1 - wp.fld->q_pow(2 + s)) / (1 - wp.fld->q_pow(s + 1));
      CHECK(lhs == measure_mass(wp, 0, s) * QScalar(ratio, wp.fld));
    }
  }
}

TEST_CASE("factorial moments in closed form") {
  // q=1/4, alpha=1/3, beta=1: mu_0 = 24/11, mu_1 = 96/517, mu_2 = 1920/98747
  WeightParams w1 = params14({rat(1, 3)}, 1);
  CHECK(factorial_moment(w1, 0, 0) == QScalar(rat(24, 11), f4()));
  CHECK(factorial_moment(w1, 0, 1) == QScalar(rat(96, 517), f4()));
  CHECK(factorial_moment(w1, 0, 2) == QScalar(rat(1920, 98747), f4()));

  // k = 0 general: q^{-1/2}/(alpha q; q)_beta; beta=2 gives 2/((11/12)(47/48))
  WeightParams w2 = params14({rat(1, 3)}, 2);
  CHECK(factorial_moment(w2, 0, 0) == QScalar(rat(1152, 517), f4()));

  // positivity across a small parameter grid, k <= 12
  for (const Rational& q : {rat(1, 4), rat(1, 3), rat(2, 5)}) {
    auto f = QField::make(q);
    for (long beta = 1; beta <= 3; ++beta) {
      WeightParams w = WeightParams::make(f, {rat(1, 3), rat(1, 5)}, Rational(beta));
      for (long i = 0; i < 2; ++i)
        for (long k = 0; k <= 12; ++k) CHECK(factorial_moment(w, i, k).sign() == 1);
    }
  }
}

TEST_CASE("truncated sum agrees with the closed form") {
  WeightParams w1 = params14({rat(1, 3)}, 1);

  SUBCASE("geometric series case to 1e-30") {
    TruncatedMoment t = truncated_moment(w1, 0, 0, tol_pow10(30));
    PrecisionGuard g(320);
    Real ref = Real(to_numeric(factorial_moment(w1, 0, 0), 320).value);
    CHECK(abs(Real(t.value.value) - ref) <= Real(rational_to_real(tol_pow10(30), 64)));
    CHECK(Real(t.tail_bound.value) < Real(rational_to_real(tol_pow10(30), 64)));
  }

  SUBCASE("refinement consistency") {
    TruncatedMoment a = truncated_moment(w1, 0, 1, tol_pow10(10));
    TruncatedMoment b = truncated_moment(w1, 0, 1, tol_pow10(20));
    PrecisionGuard g(256);
    CHECK(abs(Real(a.value.value) - Real(b.value.value)) <
          Real(rational_to_real(tol_pow10(10), 64)));
  }

  SUBCASE("tolerance 1e-40 at 256 bits across parameters") {
    WeightParams w = params14({rat(1, 3), rat(1, 5)}, 2);
    Rational tol = tol_pow10(40);
    for (long i = 0; i < 2; ++i)
      for (long k : {0L, 1L, 3L}) {
        TruncatedMoment t = truncated_moment(w, i, k, tol, 256);
        PrecisionGuard g(320);
        Real ref = Real(to_numeric(factorial_moment(w, i, k), 320).value);
        CHECK(abs(Real(t.value.value) - ref) <= Real(rational_to_real(tol, 64)));
      }
  }

  SUBCASE("terms below s = k vanish") {
    TruncatedMoment t = truncated_moment(w1, 0, 5, tol_pow10(25));
    CHECK(t.last_s >= 5);
    PrecisionGuard g(320);
    Real ref = Real(to_numeric(factorial_moment(w1, 0, 5), 320).value);
    CHECK(abs(Real(t.value.value) - ref) <= Real(rational_to_real(tol_pow10(25), 64)));
  }

  SUBCASE("numeric-mode fractional beta") {
    WeightParams wn = WeightParams::make(f4(), {rat(1, 3)}, rat(3, 2), Mode::Numeric);
    TruncatedMoment t = truncated_moment(wn, 0, 0, tol_pow10(20));
    CHECK(t.value.value > 0);
    TruncatedMoment t2 = truncated_moment(wn, 0, 0, tol_pow10(30));
    PrecisionGuard g(256);
    CHECK(abs(Real(t.value.value) - Real(t2.value.value)) <
          Real(rational_to_real(tol_pow10(20), 64)));
  }
}

TEST_CASE("mixed moments") {
  WeightParams w = params14({rat(1, 3), rat(1, 5)}, 2);

  for (long i = 0; i < 2; ++i)
    for (long k = 0; k <= 4; ++k)
      CHECK(mixed_moment(w, i, 0, k) == factorial_moment(w, i, k));

  // X^2 = q [s]^{(2)} + [s]^{(1)}: j=k=1 gives q mu_2 + mu_1
  for (long i = 0; i < 2; ++i) {
    QScalar expect = QScalar(rat(1, 4), f4()) * factorial_moment(w, i, 2) +
                     factorial_moment(w, i, 1);
    CHECK(mixed_moment(w, i, 1, 1) == expect);
  }

  // X [s]^{(k)} = q^k [s]^{(k+1)} + x(k) [s]^{(k)}
  for (long i = 0; i < 2; ++i)
    for (long k = 0; k <= 4; ++k) {
      QScalar expect = QScalar(f4()->q_pow(k), f4()) * factorial_moment(w, i, k + 1) +
                       QScalar(lattice_x(*f4(), k), f4()) * factorial_moment(w, i, k);
      CHECK(mixed_moment(w, i, 1, k) == expect);
    }

  std::mt19937_64 gen{0x5eedbeef};
  std::uniform_int_distribution<long> jk(0, 5);
  for (int it = 0; it < 8; ++it) {
    long j = jk(gen), k = jk(gen);
    CHECK(mixed_moment(w, 0, j, k) == mixed_moment(w, 0, k, j));
  }
}

TEST_CASE("orthogonality matrices from mixed moments are nonsingular") {
  WeightParams w = params14({rat(1, 3), rat(1, 5)}, 2);
  // rows: t = 0..n_i-1 per measure; columns: factorial-basis coefficients
  const std::vector<std::vector<long>> indices = {{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 1}};
  for (const auto& n : indices) {
    long size = n[0] + n[1];
    std::vector<std::vector<QScalar>> m;
    for (long i = 0; i < 2; ++i)
      for (long t = 0; t < n[static_cast<std::size_t>(i)]; ++t) {
        std::vector<QScalar> row;
        for (long col = 0; col < size; ++col) row.push_back(mixed_moment(w, i, t, col));
        m.push_back(std::move(row));
      }
    CHECK(!det(std::move(m)).is_zero());
  }
}

TEST_CASE("moment table caching") {
  WeightParams w = params14({rat(1, 3), rat(1, 5)}, 2);
  MomentTable table(w, 8);
  CHECK(table.k_max() == 8);
  for (long i = 0; i < 2; ++i)
    for (long k = 0; k <= 8; ++k) CHECK(table.moment(i, k) == factorial_moment(w, i, k));
  CHECK(table.mixed(0, 1, 1) == mixed_moment(w, 0, 1, 1));
  CHECK(table.mixed(1, 3, 4) == mixed_moment(w, 1, 3, 4));
  CHECK_THROWS_AS(table.moment(0, 9), Error);
  CHECK_THROWS_AS(table.mixed(0, 5, 4), Error);
}
