// Named identity checks, the randomized sweep driver, and its JSON / CSV
// report writers.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsix/identities.hpp"
#include "qsix/sampler.hpp"

namespace qsix {

inline constexpr const char* kReportSchema = "qsix-report/1";

struct IdentityInfo {
  std::string name;
  SampleKind kind;
  std::string summary;
};

// Every identity the sweep and check commands accept, in a fixed order.
const std::vector<IdentityInfo>& identities();
const IdentityInfo* find_identity(std::string_view name);

// Sampler constraints used by default when sweeping `name`.
SampleConstraints default_constraints(std::string_view name);

// A draw-level check. Identities with an inner index (recurrence over N,
// udiff / vdiff over n, Q constancy over its parts) report the worst case,
// with the index recorded in the note. `tol` replaces every per-check
// default when present.
struct CheckOptions {
  std::optional<Tolerance> tol;
  TruncationPolicy policy;
  long n_min = 0, n_max = 8;  // recurrence / kn-printed: N = n_min..n_max
  long n_lo = -5, n_hi = 5;  // udiff / vdiff window
  long steps = 4;            // q-constancy: C, Cq, ..., Cq^steps
  long iterations = 6;       // t-iteration
  KnDecayOptions decay;
};

ResidualReport run_check(std::string_view name, const ParamTuple& params,
                         const CheckOptions& opts = {});

struct DrawResult {
  std::size_t draw_index = 0;
  ParamTuple params;
  std::optional<ResidualReport> report;
  // Set when the check threw.
  std::string error_kind;
  std::string error_message;
  std::string error_factor;

  bool errored() const { return !report.has_value(); }
};

struct SweepSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t errored = 0;
  Real max_rel_err = 0;
};

struct SweepOptions {
  std::string identity;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::optional<SampleConstraints> constraints;
  CheckOptions check;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct SweepReport {
  std::string identity;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  SampleConstraints constraints;
  CheckOptions check;
  std::vector<DrawResult> results;  // ordered by draw_index
  SweepSummary summary;

  bool all_passed() const { return summary.passed == summary.total; }
};

SweepReport run_sweep(const SweepOptions& opts);

std::string to_json(const SweepReport& r);
std::string to_csv(const SweepReport& r);

}  // namespace qsix
