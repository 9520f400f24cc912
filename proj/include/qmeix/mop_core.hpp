#pragma once

// The monic multiple orthogonal polynomials M_n attached to the q-Pascal
// weight system, constructed by three independent routes:
//
//   * solve_orthogonality — the ground truth: the |n| orthogonality conditions
//     written in the factorial basis form a square exact linear system;
//   * rodrigues_construct — iterated backward differences applied to a weight
//     ratio on an explicit grid, then Newton interpolation back to a
//     polynomial with a degree-certificate node;
//   * recurrence_step — the (r+2)-term nearest-neighbor recurrence, stepping
//     with coefficients projected from the oracle family (or, on request,
//     with the literal closed-form coefficients for comparison).
//
// On top of the constructions sit the operator identities: the r raising
// operators, the lowering expansion of Delta M_n, the normalization constant
// K, the (r+1)-order difference equation, and the grid product-rule identity
// used by the recurrence proof.  Closed-form coefficient formulas are
// transcribed verbatim in closed_forms.cpp and always compared against
// oracle-derived values, never trusted alone.

#include <map>
#include <mutex>
#include <vector>

#include "qmeix/weights.hpp"

namespace qmeix {

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

// n = (n_1, ..., n_r), all entries >= 0.  Orders r up to a few and |n| up to
// a few dozen are the practical regime; nothing here imposes hard limits.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<long> entries);
  static MultiIndex zeros(long r);

  long r() const { return static_cast<long>(e_.size()); }
  long total() const;          // |n|
  long operator[](long i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<long>& entries() const { return e_; }

  // n_0 + ... + n_{i-1} (empty sum for i = 0) and n_i + ... + n_{r-1}.
  long partial_below(long i) const;
  long partial_from(long i) const;

  // n with entry i changed by delta; entries must stay >= 0.
  MultiIndex bump(long i, long delta) const;

  std::string str() const;  // "(n1,...,nr)"

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e_ < b.e_; }

private:
  std::vector<long> e_;
};

// All indices of the given order with |n| <= max_total, in |n|-then-lex order;
// handy for sweeps.
std::vector<MultiIndex> indices_up_to(long r, long max_total);

// ---------------------------------------------------------------------------
// family members and caching
// ---------------------------------------------------------------------------

enum class Method { Oracle, Rodrigues, Recurrence };

const char* method_name(Method m);

struct MopPolynomial {
  LatticePolynomial poly;  // monic, degree |n|
  MultiIndex index;
  WeightParams params;
  Method method = Method::Oracle;
};

// Parameter moves used by the operator identities: each alpha_i may pick up a
// factor q^{e_i} (e_i in {-1, 0, +1}) and beta shifts by an integer.  apply()
// re-validates and reports the precise reason a move leaves the admissible
// set.
struct ParamTransform {
  std::vector<int> alpha_q_exponents;
  long beta_shift = 0;

  static ParamTransform alpha_step(long r, long i, int exponent, long beta_shift);

  // Errors: TransformInadmissible (some alpha_i q^{e_i} outside (0,1)),
  // BetaUnderflow (beta + shift < 1 in exact mode).
  WeightParams apply(const WeightParams& w) const;
};

// Thread-safe map from MultiIndex to constructed member for one parameter
// pack.  Insertion is idempotent: re-inserting an index is accepted when the
// polynomial agrees coefficientwise and is an Internal error otherwise.
class FamilyCache {
public:
  explicit FamilyCache(WeightParams w) : w_(std::move(w)) {}

  const WeightParams& params() const { return w_; }

  const MopPolynomial& get(const MultiIndex& n) const;   // CacheMiss if absent
  const MopPolynomial* find(const MultiIndex& n) const;  // nullptr if absent
  const MopPolynomial& insert(MopPolynomial m);

  // get, constructing via solve_orthogonality on a miss.
  const MopPolynomial& ensure(const MultiIndex& n);

private:
  WeightParams w_;
  mutable std::mutex mu_;
  std::map<MultiIndex, MopPolynomial> members_;
};

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

// Unique monic polynomial of degree |n| with sum_s M(x(s)) [s]^{(k)} omega_i(s)
// = 0 for every measure i and 0 <= k < n_i, solved exactly in the factorial
// basis.  SingularSystem cannot occur for admissible parameters (AT system).
MopPolynomial solve_orthogonality(const WeightParams& w, const MultiIndex& n);

// The closed-form normalization constant K_n making the Rodrigues output
// monic; never zero.
QScalar normalization_K(const WeightParams& w, const MultiIndex& n);

// Rodrigues construction on the grid window [-1, 2|n| + 2]: starts from
// g(s) = (q^{beta+|n|}; q)_s / (q; q)_s (zero below s = 0), applies the r
// operators alpha_i^{-s} Nabla^{n_i} (alpha_i q^{n_i})^s right-to-left,
// multiplies by (q; q)_s / (q^beta; q)_s and K_n, and interpolates the nodes
// s = 0..|n|.  The value at s = |n|+1 is the degree certificate.
MopPolynomial rodrigues_construct(const WeightParams& w, const MultiIndex& n);

// ---------------------------------------------------------------------------
// raising / lowering
// ---------------------------------------------------------------------------

// The first-order raising operator attached to measure i, instantiated for
// operands of degree big_n (= |n| of the family member it acts on):
//
//   D p = q^{N+1/2}/(1 - a q^{N+beta-1}) *
//         { [a q^{beta-1} (X - x(1-beta)) - X] p + X (p - p(s-1)) },  a = alpha_i.
//
// Raises degree by exactly one and sends M_n to -q^{1/2} M_{n+e_i} at the
// transformed parameters (alpha_i -> alpha_i/q, beta -> beta-1); the
// transform's admissibility is enforced up front so the identity's right side
// always exists.
LatticePolynomial raising_apply(const WeightParams& w, long i, long big_n,
                                const LatticePolynomial& p);

struct LoweringTerm {
  long i;
  QScalar coeff;          // q^{|n|-n_i+1/2} (1-a_i q^{n_i+beta})/(1-a_i q^{|n|+beta}) [n_i]_q
  MopPolynomial member;   // M_{n-e_i} at (alpha_i -> q alpha_i, beta+1)
};

struct LoweringExpansion {
  std::vector<LoweringTerm> terms;  // components with n_i > 0 only
  LatticePolynomial residual;       // Delta p  -  sum of coeff * member
};

// Expands Delta M_n over the r "down" members with the stated closed-form
// coefficients.  The expansion is exact (residual identically zero) for r = 1
// and whenever a single component of n is positive; for r >= 2 with two or
// more positive components the stated coefficients fail — already their sum
// differs from the forced leading coefficient q^{1/2}[|n|]_q — so the
// residual is a nonzero polynomial of degree < |n|.  With require_zero the
// nonzero case throws NonzeroResidual; otherwise the residual is returned for
// reporting.
LoweringExpansion lowering_expand(const WeightParams& w, const MultiIndex& n,
                                  const LatticePolynomial& p,
                                  bool require_zero = true);

// ---------------------------------------------------------------------------
// nearest-neighbor recurrence
// ---------------------------------------------------------------------------

// Literal transcriptions of the printed recurrence coefficients (see
// closed_forms.cpp): x M~_n = c M~_{n+e_k} + b M~_n + sum_i d[i] M~_{n-e_i}.
struct RecurrenceFormula {
  QScalar b;
  QScalar c;
  std::vector<QScalar> d;
};

RecurrenceFormula recurrence_coeffs_formula(const WeightParams& w,
                                            const MultiIndex& n, long k);

// Ground-truth monic coefficients: the expansion
//   X M_n - M_{n+e_k} = b M_n + sum_i d[i] M_{n-e_i}
// solved exactly as an overdetermined system (members taken from the cache
// when present, rebuilt by solve_orthogonality otherwise).  A nonzero
// residual would contradict the nearest-neighbor recurrence and raises
// InconsistentSystem.  d[i] = 0 whenever n_i = 0.
struct RecurrenceOracle {
  QScalar b;
  std::vector<QScalar> d;
};

RecurrenceOracle recurrence_coeffs_oracle(const WeightParams& w,
                                          const MultiIndex& n, long k,
                                          const FamilyCache& cache);

// One recurrence step: builds M_{n+e_k} from the cached M_n and M_{n-e_i}
// (CacheMiss if any needed member is absent) and inserts it into the cache.
// The oracle path uses recurrence_coeffs_oracle and is exact by construction.
// The formula path (use_formula) converts the printed coefficients to monic
// normalization via K-ratios — down coefficients d[i] K_n / K_{n-e_i}, then
// division by c K_n / K_{n+e_k} (identically 1; checked) — and compares the
// result against the oracle member, throwing CoefficientMismatch on any
// disagreement rather than repairing it.
MopPolynomial recurrence_step(const WeightParams& w, const MultiIndex& n,
                              long k, FamilyCache& cache,
                              bool use_formula = false);

// ---------------------------------------------------------------------------
// difference equation and the product-rule identity
// ---------------------------------------------------------------------------

// Residual of the (r+1)-order difference equation
//
//   (prod_i D^{alpha_i, .}) Delta M_n  =
//     - sum_{i: n_i>0} q^{|n|-n_i+1} (1-a_i q^{n_i+beta})/(1-a_i q^{|n|+beta})
//       [n_i]_q (prod_{j != i} D^{alpha_j, .}) M_n,
//
// with every raising operator carrying the (alpha-vector, beta, N) tags of
// the family member it acts on, threaded along the composition chain exactly
// as in the raising identity.  Requires beta >= r+1 so all beta shifts stay
// exact.  The residual is returned, not asserted: it is identically zero for
// r = 1 and generally nonzero for r >= 2, where the chain reading of the
// printed operator product is recorded as a finding.
LatticePolynomial difference_equation_residual(const WeightParams& w,
                                               const MultiIndex& n);

// Pointwise residual of the product-rule identity behind the recurrence:
// with  M f = alpha^{-s} Nabla^m (alpha q^m)^s f,
//
//   M(x f) = q^{1/2-m} x(m) alpha^{-s} Nabla^{m-1} (alpha q^m)^s f
//            + (x(s) - x(m)) q^{-m} M f,
//
// for the measure-i operator with m = n_i.  Exact for every grid function;
// the residual window is what survives m backward differences of f.
GridFunction lemma51_identity_check(const WeightParams& w, long n_i, long i,
                                    const GridFunction& f);

}  // namespace qmeix
