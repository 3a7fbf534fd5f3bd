// Deterministic parameter generation for identity sweeps.
//
// Every uniform deviate is a pure function of (seed, item, attempt, slot)
// through SplitMix64, so draws can be produced in any order or in parallel
// and still match a serial run bit for bit.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qsix/identities.hpp"
#include "qsix/series.hpp"

namespace qsix {

enum class SampleKind {
  trunc,        // TruncParams for the recurrence machinery
  kn_decay,     // TruncParams with |Cq^3| >= cap "cq3_min"
  bailey_a,     // BaileyParams with |a^2 q/(bcde)| <= cap "bailey_argument"
  t_params,     // TParams with |C/q^3| <= cap "t_argument"
  weierstrass,  // (q, b, c, x, z)
  abel,         // random sequence pairs
};

const char* to_string(SampleKind k);

struct Range {
  Real lo = 0;
  Real hi = 0;
};

struct SampleConstraints {
  Range q_modulus{Real(0.2), Real(0.8)};
  Range param_modulus{Real(0.1), Real(3.0)};
  // Every denominator factor 1 - m q^k, |k| <= lattice_window, stays at
  // least this far from zero.
  Real pole_margin = Real(0.05);
  long lattice_window = 12;
  // Recognized keys:
  //   t_argument        max |C/q^3| for t_params (0.8)
  //   bailey_argument   max |a^2 q/(bcde)| for bailey_a (0.9)
  //   cq3_min           min |Cq^3| for kn_decay (1.5)
  //   series_rel_err    max est_error/|value| of the bilateral series, at C,
  //                     Cq, ..., Cq^series_shifts for t_params (1e-10, 5)
  //   cancellation_max  max (largest term)/|lhs| for weierstrass (10)
  //   theta_cancellation_max  the same for the theta form, if present
  //   abel_max_len      upper bound on M and N for abel (20)
  std::map<std::string, Real> convergence_caps;
  std::size_t max_rejections = 10000;
  bool x_equals_q = false;  // t_params only: pin X = q

  void validate() const;
  Real cap(const std::string& key, Real fallback) const;
};

struct WeierstrassParams {
  Complex q, b, c, x, z;
};

using ParamTuple = std::variant<TruncParams, BaileyParams, TParams, WeierstrassParams, AbelInput>;

// Counter-based generator. uniform() is in [0, 1) with 53 random bits.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t item, std::uint64_t attempt);
  Real uniform();
  std::uint64_t next_u64();

 private:
  std::uint64_t key_;
  std::uint64_t slot_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

std::vector<ParamTuple> sample(SampleKind kind, const SampleConstraints& constraints,
                               std::uint64_t seed, std::size_t count);

// Independent re-check of every constraint the sampler enforces.
bool satisfies(SampleKind kind, const ParamTuple& t, const SampleConstraints& constraints);

// Smallest |1 - m q^k| over the monomials the kind's identities divide by.
Real pole_distance(SampleKind kind, const ParamTuple& t, const SampleConstraints& constraints);

// max(|first term|, |second term|) / |lhs| for the nabla four-term identity.
Real weierstrass_cancellation(const WeierstrassParams& w);
// The same ratio for the theta-function form at base w.q.
Real theta_cancellation(const WeierstrassParams& w);

}  // namespace qsix
