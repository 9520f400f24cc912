#pragma once

// Named verification suites over a parameter pack: each suite walks the
// multi-indices up to a requested order and checks one operator identity,
// emitting a structured entry per case.  Known closed-form discrepancies are
// reported with their own status so they stay visible without failing runs;
// identities that must hold exactly and do not are hard mismatches.

#include <string>
#include <vector>

#include "qmeix/mop_core.hpp"

namespace qmeix {

enum class VerifyStatus { ExactPass, Mismatch, MismatchDocumented };

// "exact-pass" | "mismatch" | "mismatch-documented"
const char* verify_status_name(VerifyStatus s);

struct VerifyEntry {
  std::string identity;
  std::string params;
  MultiIndex n;
  VerifyStatus status = VerifyStatus::ExactPass;
  std::string residual;  // "0" when the identity holds exactly
  std::string detail;    // context for non-pass entries
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyEntry> entries;

  long count(VerifyStatus s) const;
  // true iff some entry is a hard mismatch (documented ones do not count)
  bool hard_failure() const { return count(VerifyStatus::Mismatch) > 0; }
};

// orthogonality raising lowering diffeq recurrence kratio lemma51 all
const std::vector<std::string>& suite_names();

// Runs one suite (or "all") for every |n| <= max_order at the given
// parameters.  Parameter combinations a suite cannot accept (raising needs
// alpha_i < q and beta >= 2, the difference equation needs beta >= r+1)
// throw the usual validation errors instead of producing entries.
VerifyReport run_suite(const WeightParams& w, const std::string& suite, long max_order);

}  // namespace qmeix
