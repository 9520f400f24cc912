#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "qmeix/classical.hpp"

using namespace qmeix;

// Expected values frozen from an independent exact implementation of the
// classical (linear-lattice) constructions over arbitrary-precision rationals.

namespace {

Rational rat(long n, long d) { return Rational(n) / Rational(d); }

ClassicalParams cp1(long beta = 1) { return ClassicalParams::make({rat(1, 3)}, Rational(beta)); }
ClassicalParams cp2(long beta = 2) {
  return ClassicalParams::make({rat(1, 3), rat(1, 5)}, Rational(beta));
}

MultiIndex mi(std::vector<long> e) { return MultiIndex(std::move(e)); }

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code;
  }
  return ErrorCode::Internal;
}

void check_poly(const XPolynomial& p, const std::vector<Rational>& coeffs) {
  REQUIRE(p.degree() == static_cast<long>(coeffs.size()) - 1);
  for (size_t k = 0; k < coeffs.size(); ++k) CHECK(p.coeff(static_cast<long>(k)) == coeffs[k]);
}

// sum_x (x)_k (beta)_x alpha^x / x!  =  (1-alpha)^{-beta} (beta)_k (alpha/(1-alpha))^k;
// closed form of the falling-factorial moment, independent of the truncated sum
Rational falling_moment(const Rational& alpha, const Rational& beta, long k) {
  Rational v = 1;
  Rational base = 1 - alpha;
  // (1-alpha)^{-beta} only enters homogeneous sums as a common factor; keep it
  // so nonzero sums can be pinned too (beta integer in these tests)
  Integer bi = boost::multiprecision::numerator(beta);
  for (Integer t = 0; t < bi; ++t) v /= base;
  for (long t = 0; t < k; ++t) v *= (beta + t) * alpha / base;
  return v;
}

// exact orthogonality sums of p against measure i for test degrees < n_i
bool orthogonal_exactly(const ClassicalParams& w, const MultiIndex& n, const XPolynomial& p) {
  for (long i = 0; i < w.r(); ++i) {
    for (long t = 0; t < n[i]; ++t) {
      std::vector<Rational> c = to_falling_basis(p * falling_factorial_poly(t));
      Rational acc = 0;
      for (size_t k = 0; k < c.size(); ++k)
        acc += c[k] * falling_moment(w.alphas[static_cast<size_t>(i)], w.beta,
                                     static_cast<long>(k));
      if (acc != 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("dense polynomial arithmetic over Q") {
  XPolynomial p({rat(1, 2), Rational(-3), Rational(1)});  // x^2 - 3x + 1/2
  CHECK(p.degree() == 2);
  CHECK(p.is_monic());
  CHECK(p(Rational(2)) == rat(-3, 2));
  CHECK((-p).coeff(1) == Rational(3));
  CHECK((p + p).leading_coeff() == Rational(2));
  CHECK((p - p).is_zero());
  CHECK((p - p).degree() == -1);

  XPolynomial x = XPolynomial::monomial(1, Rational(1));
  check_poly(x * x - x.scaled(Rational(3)) + XPolynomial::constant(rat(1, 2)),
             {rat(1, 2), Rational(-3), Rational(1)});

  // p(x+h) agrees pointwise
  XPolynomial sh = p.shifted(2);
  for (long v = -3; v <= 3; ++v) CHECK(sh(Rational(v)) == p(Rational(v + 2)));
  check_poly(p.shifted(1) - p, {Rational(-2), Rational(2)});  // forward difference
}

TEST_CASE("falling-factorial basis round trip") {
  check_poly(falling_factorial_poly(0), {Rational(1)});
  check_poly(falling_factorial_poly(1), {Rational(0), Rational(1)});
  check_poly(falling_factorial_poly(3), {Rational(0), Rational(2), Rational(-3), Rational(1)});

  XPolynomial p({Rational(5), rat(-7, 3), Rational(0), Rational(2)});
  std::vector<Rational> c = to_falling_basis(p);
  XPolynomial back;
  for (size_t k = 0; k < c.size(); ++k)
    back += falling_factorial_poly(static_cast<long>(k)).scaled(c[k]);
  CHECK(back == p);
  // (x)_k vanishes at 0..k-1 and equals k! at k
  CHECK(falling_factorial_poly(4)(Rational(3)) == Rational(0));
  CHECK(falling_factorial_poly(4)(Rational(4)) == Rational(24));
}

TEST_CASE("parameter validation") {
  CHECK(code_of([] { ClassicalParams::make({}, Rational(1)); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { ClassicalParams::make({Rational(1)}, Rational(1)); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([] { ClassicalParams::make({rat(1, 3), rat(1, 3)}, Rational(1)); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([] { ClassicalParams::make({rat(1, 3)}, Rational(0)); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([] { cp1().beta_int(); }) != ErrorCode::NonIntegerBeta);
  CHECK(code_of([] {
          ClassicalParams::make({rat(1, 3)}, rat(3, 2)).beta_int();
        }) == ErrorCode::NonIntegerBeta);
}

TEST_CASE("recurrence coefficients: closed form pins") {
  // r=1, alpha=1/3, beta=1: b(m) = 1/2 + 2m, d(m) = 3 m^2 / 4
  ClassicalParams w = cp1();
  CHECK(classical_recurrence_coeffs(w, mi({0}), 0).b == rat(1, 2));
  CHECK(classical_recurrence_coeffs(w, mi({2}), 0).b == rat(9, 2));
  CHECK(classical_recurrence_coeffs(w, mi({2}), 0).d[0] == Rational(3));
  CHECK(classical_recurrence_coeffs(w, mi({0}), 0).d[0] == Rational(0));

  // alpha=1/2, beta=1, n=(1): b = 2*(1/2)/(1/2) + 1/(1/2) = 4
  ClassicalParams wh = ClassicalParams::make({rat(1, 2)}, Rational(1));
  CHECK(classical_recurrence_coeffs(wh, mi({1}), 0).b == Rational(4));

  // r=2, alpha=(1/3,1/5), beta=2 around n=(1,1)
  ClassicalRecurrence rc = classical_recurrence_coeffs(cp2(), mi({1, 1}), 0);
  CHECK(rc.b == rat(19, 4));
  CHECK(rc.d[0] == rat(9, 4));
  CHECK(rc.d[1] == rat(15, 16));

  CHECK(code_of([&] { classical_recurrence_coeffs(w, mi({1, 1}), 0); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([&] { classical_recurrence_coeffs(w, mi({1}), 1); }) == ErrorCode::InvalidParams);
}

TEST_CASE("single-weight family: frozen members") {
  ClassicalParams w = cp1();
  check_poly(classical_construct(w, mi({0})), {Rational(1)});
  check_poly(classical_construct(w, mi({1})), {rat(-1, 2), Rational(1)});
  check_poly(classical_construct(w, mi({2})), {rat(1, 2), Rational(-3), Rational(1)});
  check_poly(classical_construct(w, mi({3})),
             {rat(-3, 4), Rational(11), rat(-15, 2), Rational(1)});
  check_poly(classical_construct(w, mi({4})),
             {rat(3, 2), Rational(-52), Rational(53), Rational(-14), Rational(1)});

  // degree-one member is x - beta*alpha/(1-alpha), the Pascal mean
  for (long beta = 1; beta <= 3; ++beta) {
    ClassicalParams wb = cp1(beta);
    check_poly(classical_construct(wb, mi({1})),
               {-Rational(beta) * rat(1, 3) / rat(2, 3), Rational(1)});
  }
}

TEST_CASE("two-weight family: frozen members and symmetry") {
  ClassicalParams w = cp2();
  check_poly(classical_construct(w, mi({1, 0})), {Rational(-1), Rational(1)});
  check_poly(classical_construct(w, mi({0, 1})), {rat(-1, 2), Rational(1)});
  check_poly(classical_construct(w, mi({1, 1})), {rat(3, 4), rat(-13, 4), Rational(1)});
  check_poly(classical_construct(w, mi({2, 1})),
             {rat(-3, 2), Rational(13), Rational(-8), Rational(1)});
  check_poly(classical_construct(w, mi({2, 2})),
             {rat(15, 8), rat(-97, 2), rat(199, 4), rat(-27, 2), Rational(1)});

  // swapping the weights and the index yields the same polynomial
  ClassicalParams ws = ClassicalParams::make({rat(1, 5), rat(1, 3)}, Rational(2));
  CHECK(classical_construct(ws, mi({1, 2})) == classical_construct(w, mi({2, 1})));
}

TEST_CASE("exact orthogonality through falling-factorial moments") {
  ClassicalParams w1 = cp1(2), w2 = cp2();
  for (const MultiIndex& n : indices_up_to(1, 4))
    CHECK(orthogonal_exactly(w1, n, classical_construct(w1, n)));
  for (const MultiIndex& n : indices_up_to(2, 4))
    CHECK(orthogonal_exactly(w2, n, classical_construct(w2, n)));
}

TEST_CASE("Rodrigues grid evaluation matches the recurrence build") {
  ClassicalParams w1 = ClassicalParams::make({rat(1, 2)}, Rational(3));
  for (const MultiIndex& n : indices_up_to(1, 4))
    CHECK(classical_rodrigues(w1, n) == classical_construct(w1, n));

  ClassicalParams w2 = cp2();
  for (const MultiIndex& n : indices_up_to(2, 4))
    CHECK(classical_rodrigues(w2, n) == classical_construct(w2, n));

  ClassicalParams w3 = ClassicalParams::make({rat(1, 3), rat(1, 5), rat(1, 7)}, Rational(3));
  for (const MultiIndex& n : indices_up_to(3, 2))
    CHECK(classical_rodrigues(w3, n) == classical_construct(w3, n));

  CHECK(code_of([] {
          classical_rodrigues(ClassicalParams::make({rat(1, 3)}, rat(3, 2)), MultiIndex({1}));
        }) == ErrorCode::NonIntegerBeta);
}

TEST_CASE("raising lowers beta and bumps one index entry") {
  // R M_n^{alpha,beta} = -M_{n+e_i}^{alpha,beta-1}
  for (long beta = 2; beta <= 4; ++beta) {
    ClassicalParams w = cp2(beta);
    ClassicalParams wt = cp2(beta - 1);
    for (const MultiIndex& n : indices_up_to(2, 3)) {
      for (long i = 0; i < 2; ++i) {
        XPolynomial lhs = classical_raising_apply(w, i, classical_construct(w, n));
        CHECK(lhs == -classical_construct(wt, n.bump(i, 1)));
        CHECK(lhs.degree() == n.total() + 1);
      }
    }
  }

  // R(1) at alpha=1/3, beta=2
  check_poly(classical_raising_apply(cp1(2), 0, XPolynomial::constant(Rational(1))),
             {rat(1, 2), Rational(-1)});

  CHECK(code_of([] {
          classical_raising_apply(cp1(1), 0, XPolynomial::constant(Rational(1)));
        }) == ErrorCode::BetaUnderflow);
  CHECK(code_of([] {
          classical_raising_apply(cp1(2), 1, XPolynomial::constant(Rational(1)));
        }) == ErrorCode::InvalidParams);
}

TEST_CASE("forward difference expands over the beta+1 family with coefficients n_i") {
  // On the linear lattice the down-shift identity holds for every r; the
  // q-lattice analogue breaks at r >= 2 (see the q-side tests), which makes
  // this exactness the key classical contrast.
  for (long r = 1; r <= 2; ++r) {
    ClassicalParams w = r == 1 ? cp1(2) : cp2();
    ClassicalParams wu = r == 1 ? cp1(3) : cp2(3);
    for (const MultiIndex& n : indices_up_to(r, 4)) {
      if (n.total() == 0) continue;
      XPolynomial p = classical_construct(w, n);
      XPolynomial diff = p.shifted(1) - p;
      XPolynomial sum;
      for (long i = 0; i < r; ++i)
        if (n[i] > 0)
          sum += classical_construct(wu, n.bump(i, -1)).scaled(Rational(n[i]));
      CHECK(diff == sum);
    }
  }
}

TEST_CASE("difference-equation residual vanishes identically") {
  for (long beta = 2; beta <= 4; beta += 2) {
    ClassicalParams w = cp1(beta);
    for (const MultiIndex& n : indices_up_to(1, 3))
      CHECK(classical_diffeq_residual(w, n).is_zero());
  }
  // r = 2: the chain convention recovers the full identity on the linear lattice
  ClassicalParams w2 = cp2(4);
  for (std::vector<long> e : {std::vector<long>{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}})
    CHECK(classical_diffeq_residual(w2, mi(e)).is_zero());

  CHECK(code_of([] { classical_diffeq_residual(cp2(2), MultiIndex({1, 1})); }) ==
        ErrorCode::BetaUnderflow);
}

TEST_CASE("truncated-sum moment oracle with certified tail") {
  ClassicalParams w = cp2();
  Rational tol = Rational(1) / Integer("10000000000000000000000000");  // 1e-25

  // total mass of measure 0: (1-1/3)^{-2} = 9/4
  ClassicalResidual mass =
      classical_orthogonality_residual(w, XPolynomial::constant(Rational(1)), 0, 0, tol);
  CHECK(mass.tail_bound.value < rational_to_real(tol, 64));
  Real err = mass.value.value - rational_to_real(rat(9, 4), 256);
  CHECK(abs(err) < rational_to_real(tol, 64));

  // orthogonality sums of M_(1,1) against both measures are below tolerance
  XPolynomial p = classical_construct(w, mi({1, 1}));
  for (long i = 0; i < 2; ++i) {
    ClassicalResidual res = classical_orthogonality_residual(w, p, i, 0, tol);
    CHECK(abs(res.value.value) < rational_to_real(tol * 2, 64));
    CHECK(res.tail_bound.value < rational_to_real(tol, 64));
    CHECK(res.last_x > 10);
  }

  // one step past the orthogonality range the sum is visibly nonzero
  ClassicalResidual over = classical_orthogonality_residual(w, p, 0, 1, tol);
  CHECK(abs(over.value.value) > rational_to_real(rat(1, 100), 64));

  // the certified truncation agrees with the closed-form moment it bounds;
  // (-x)_1 = -(x)_1, so the falling-factorial closed form carries a sign flip
  std::vector<Rational> c = to_falling_basis(p * falling_factorial_poly(1));
  Rational closed = 0;
  for (size_t k = 0; k < c.size(); ++k)
    closed += c[k] * falling_moment(w.alphas[0], w.beta, static_cast<long>(k));
  CHECK(abs(over.value.value + rational_to_real(closed, 256)) < rational_to_real(tol * 2, 64));

  CHECK(code_of([&] { classical_orthogonality_residual(w, p, 2, 0, tol); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([&] { classical_orthogonality_residual(w, p, 0, 0, Rational(0)); }) ==
        ErrorCode::InvalidParams);
}
