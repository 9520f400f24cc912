#pragma once

// The q-Pascal weight system and its exact moments.
//
// Each of the r measures places mass
//
//     omega_i(s) = upsilon^{alpha_i,beta}(s) * q^{s-1/2},
//     upsilon^{alpha,beta}(s) = (q^beta; q)_s / (q; q)_s * alpha^s,
//
// at the lattice point x(s), s = 0, 1, 2, ...  With beta a positive integer
// everything stays inside Q(sqrt(q)): the factorial moments
//
//     mu_{i,k} = sum_{s>=0} [s]^{(k)} omega_i(s)
//              = alpha_i^k q^{k-1/2} (q^beta;q)_k (1-q)^{-k} / (alpha_i q; q)_{beta+k}
//
// collapse to finite Pochhammer ratios (q-binomial theorem), and mixed moments
// follow by expanding products of factorial-basis elements.  A brute-force
// truncated sum with a certified geometric tail bound serves as an independent
// numeric oracle and as the only moment path for non-integer beta.

#include <vector>

#include "qmeix/lattice.hpp"

namespace qmeix {

enum class Mode { Exact, Numeric };

// Parameters (q; alpha_1..alpha_r; beta) shared by the r measures.  Validation
// enforces 0 < q < 1, 0 < alpha_i < 1, beta > 0, and the admissibility
// condition alpha_i/alpha_j != q^k for i != j (checked for |k| <= 64), which
// keeps every denominator met by the construction pipeline nonzero.
struct WeightParams {
  FieldPtr fld;
  std::vector<Rational> alphas;
  Rational beta;
  Mode mode = Mode::Exact;

  // Validates and returns the parameter pack.  Exact mode additionally
  // requires beta to be a positive integer (NonIntegerBeta otherwise).
  static WeightParams make(FieldPtr fld, std::vector<Rational> alphas,
                           const Rational& beta, Mode mode = Mode::Exact);

  long r() const { return static_cast<long>(alphas.size()); }

  // beta as a machine integer; every exact-mode computation goes through this
  // accessor, so a numeric-mode pack with fractional beta is rejected at the
  // first exact call rather than at construction.
  long beta_int() const;
};

// upsilon^{alpha_i,beta}(s): exact, rational, strictly positive.  Measure
// indices i are 0-based throughout.
QScalar weight_density(const WeightParams& w, long i, long s);

// omega_i(s) = weight_density(i, s) * q^{s-1/2}, exact in Q(sqrt(q)).
QScalar measure_mass(const WeightParams& w, long i, long s);

// mu_{i,k} in closed form (see header comment); strictly positive.
QScalar factorial_moment(const WeightParams& w, long i, long k);

struct TruncatedMoment {
  NumScalar value;       // partial sum over s = k..last_s
  NumScalar tail_bound;  // certified bound on the discarded tail (< tol)
  long last_s = 0;
};

// Partial sum of the moment series, truncated once the geometric tail bound
//
//     C * (alpha q)^{S+1} / (1 - alpha q) < tol,
//     C = (1-q)^{-k} q^{-1/2} / [ (q;q)_N (1 - q^{N+1}/(1-q)) ]
//
// holds, using [s]^{(k)} <= (1-q)^{-k}, (q^beta;q)_s <= 1 and a finite lower
// bound for (q;q)_infinity.  Works for any real beta > 0.
TruncatedMoment truncated_moment(const WeightParams& w, long i, long k,
                                 const Rational& tol, unsigned bits = 256);

// sum_s [s]^{(j)} [s]^{(k)} omega_i(s): the product is expanded in the
// factorial basis (multiply in the monomial basis, convert back) and the
// expansion is summed against closed-form factorial moments.
QScalar mixed_moment(const WeightParams& w, long i, long j, long k);

// Immutable snapshot of the factorial moments mu_{i,k}, k = 0..k_max, for all
// measures; positivity is asserted at construction.
class MomentTable {
public:
  MomentTable(WeightParams w, long k_max);

  const WeightParams& params() const { return w_; }
  long k_max() const { return k_max_; }

  const QScalar& moment(long i, long k) const;  // CacheMiss beyond k_max
  QScalar mixed(long i, long j, long k) const;  // needs j + k <= k_max

private:
  WeightParams w_;
  long k_max_;
  std::vector<std::vector<QScalar>> mu_;  // [measure][k]
};

}  // namespace qmeix
