// Residual checkers. Each evaluates both sides of one identity
// independently and reports the discrepancy; none of them assumes the
// identity holds.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsix/qcore.hpp"
#include "qsix/series.hpp"

namespace qsix {

// pass <=> abs_err <= atol + rtol * max(|lhs|, |rhs|)
struct Tolerance {
  Real atol = Real(1e-12);
  Real rtol = Real(1e-13);
};

struct ResidualReport {
  Complex lhs{};
  Complex rhs{};
  Real abs_err = 0;
  Real rel_err = 0;  // abs_err / max(|lhs|, |rhs|, 1e-300)
  bool pass = false;
  std::string note;

  static ResidualReport compare(Complex lhs, Complex rhs, Tolerance tol, std::string note = {});
};

// ------------------------------------------------------------------------
// Summation by parts.

// U is given on [-M, N+1] and V on [-M, N].
struct AbelInput {
  long M = 0;
  long N = 0;
  std::vector<Complex> U;
  std::vector<Complex> V;

  void validate() const;
  Complex u(long n) const { return U[static_cast<std::size_t>(n + M)]; }
  Complex v(long n) const { return V[static_cast<std::size_t>(n + M)]; }
};

// sum_{n=-M}^{N} V_n (U_n - U_{n+1})
//   = V_{-M} U_{-M} - V_N U_{N+1} + sum_{n=-M+1}^{N} U_n (V_n - V_{n-1})
ResidualReport check_abel(const AbelInput& in, Tolerance tol = {Real(1e-12), Real(1e-13)});

// ------------------------------------------------------------------------
// The four-term nabla identity and its theta-function counterpart:
//   f(cx, x/c, bz, z/b) - f(bx, x/b, cz, z/c) = (z/c) f(bc, c/b, xz, x/z)
// with f = nabla (use_theta = false) or f = theta(.; q).
// Default rtol is 1e-14 for nabla and 1e-10 for theta.
ResidualReport check_weierstrass(Complex b, Complex c, Complex x, Complex z, const QContext& ctx,
                                 bool use_theta, std::optional<Tolerance> tol = std::nullopt);

// ------------------------------------------------------------------------
// Truncated recurrence machinery.
//
//   U_n = (Bq, Dq, Eq, BDE/(A^2 q); q)_n / (BD/A, BE/A, DE/A, Aq^2; q)_n
//   V_n = (Aq^2, BCDEq/A^2; q)_{n+1} / (A/(Cq), BDE/(A^2 q^2); q)_{n+1} (Cq^3)^{-n}

Complex compute_U(long n, const TruncParams& p);
Complex compute_V(long n, const TruncParams& p);

// U_n - U_{n+1} without the cancellation of a direct subtraction.
Complex U_step_difference(long n, const TruncParams& p);

// U_n - U_{n+1} against its closed product form.
ResidualReport check_U_difference(long n, const TruncParams& p,
                                  Tolerance tol = {Real(1e-12), Real(1e-12)});
// V_n - V_{n-1} against its closed product form.
ResidualReport check_V_difference(long n, const TruncParams& p,
                                  Tolerance tol = {Real(1e-12), Real(1e-12)});

struct KnParts {
  Complex k1{};  // V_{-N-1} U_{-N-1} * prefactor * (Cq^3)^N
  Complex k2{};  // V_N U_{N+1} * prefactor * (Cq^3)^N
  Complex k3{};  // the n = N+1 summand of S without its power of 1/(Cq^2)
  Complex total{};  // k1 - k2 + k3 q^{N-2} / C
};

// K_N assembled from the summation-by-parts boundary terms. Products that
// contain the same vanishing factor on both sides (for example U_{-M} and
// V_{-M} when Aq^2 lies on the q-lattice) are combined before evaluation.
KnParts compute_KN_parts(const TruncParams& p);
Complex compute_KN(const TruncParams& p);

// K_N as the three-term closed expression printed with the recurrence.
Complex compute_KN_printed(const TruncParams& p);

// (A^2 q/BDE) nabla(BDE/A, Cq^3, BD/A, BE/A, DE/A)
//             / nabla(BDEq/A, BCDEq/A^2, Aq/B, Aq/D, Aq/E)
Complex recurrence_coefficient(const TruncParams& p);

// S_{N+1}(A;C) = K_N/(Cq^3)^N + coefficient * S_N(Aq;Cq)
ResidualReport check_recurrence(const TruncParams& p, Tolerance tol = {Real(1e-12), Real(1e-9)});

// Assembled K_N against the printed form.
ResidualReport check_KN_printed(const TruncParams& p, Tolerance tol = {Real(1e-12), Real(1e-9)});

// lim_{N -> inf} K_N in theta-function form.
EvalResult kn_limit(const TruncParams& p, const TruncationPolicy& policy = {});
// The same limit as the difference of two infinite-product ratios.
EvalResult kn_limit_products(const TruncParams& p, const TruncationPolicy& policy = {});

struct KnDecayOptions {
  long n_max = 80;
  long decay_by = 60;  // index at which |K_N/(Cq^3)^N| must be below decay_tol
  Real decay_tol = Real(1e-6);
  Real limit_rtol = Real(1e-6);
};

struct KnDecayReport {
  std::vector<Real> magnitudes;  // |K_N / (Cq^3)^N|, N = 0..n_max
  bool eventually_decreasing = false;
  bool decay_pass = false;
  Complex kn_at_max{};
  Complex limit{};
  Real limit_rel_err = 0;
  bool limit_pass = false;

  bool pass() const { return decay_pass && limit_pass; }
};

// Requires |Cq^3| > 1 (DomainError otherwise): only there does K_N/(Cq^3)^N
// tend to zero, K_N itself tending to a generically nonzero limit.
KnDecayReport check_KN_decay(const TruncParams& p, KnDecayOptions opts = {},
                             const TruncationPolicy& policy = {});

// ------------------------------------------------------------------------
// Bilateral chain.

// T(X;C) = R(X;C) T(X;Cq) with
//   R = nabla(1/(BCDEXq), BCDEX^2 q, BC/q, CD/q, CE/q)
//     / nabla(1/(BCDEX^2), C/q^3, BCDX, BCEX, CDEX)
Complex T_recursion_factor(const TParams& p);
ResidualReport check_T_recursion(const TParams& p, Tolerance tol = {Real(1e-12), Real(1e-8)},
                                 const TruncationPolicy& policy = {});

// X = q, m steps:
//   T(q;C) = (BCDEq^3, BC/q, CD/q, CE/q; q)_m / (C/q^3, BCDq, BCEq, CDEq; q)_m T(q;Cq^m)
ResidualReport check_T_iteration(Complex B, Complex C, Complex D, Complex E, const QContext& ctx,
                                 long m, Tolerance tol = {Real(1e-12), Real(1e-7)});

struct QConstancyReport {
  std::vector<Complex> ratios;  // T(X;Cq^k) / F(Cq^k), k = 0..steps
  ResidualReport spread;        // the most distant pair of ratios
  ResidualReport closed_form;   // ratios[0] against q_factor(X, B, D, E)
  bool pass() const { return spread.pass && closed_form.pass; }
};

QConstancyReport check_Q_constancy(const TParams& p, long steps,
                                   Tolerance spread_tol = {Real(1e-12), Real(1e-8)},
                                   Tolerance closed_tol = {Real(1e-12), Real(1e-7)},
                                   const TruncationPolicy& policy = {});

// 6psi6 series against its product evaluation, in either parametrization.
ResidualReport check_bailey_a(const BaileyParams& p, Tolerance tol = {Real(1e-12), Real(1e-7)},
                              const TruncationPolicy& policy = {});
ResidualReport check_bailey_X(const TParams& p, Tolerance tol = {Real(1e-12), Real(1e-7)},
                              const TruncationPolicy& policy = {});

// 6phi5(BCDEq^2; Bq^2, Dq^2, Eq^2; q, C/q^3) against rogers_closed.
ResidualReport check_rogers(Complex B, Complex C, Complex D, Complex E, const QContext& ctx,
                            Tolerance tol = {Real(1e-12), Real(1e-8)});

// (B, C, D, E, X) = (bc/(aq^2), a^2 q^4/(bcde), bd/(aq^2), be/(aq^2), aq/b)
TParams map_remark1(const BaileyParams& p);

struct Remark1Report {
  ResidualReport argument;  // C/q^3 against a^2 q/(bcde)
  ResidualReport closed;    // bailey_closed_a against bailey_closed_X of the mapped point
  std::optional<ResidualReport> series;  // the two bilateral sums
  bool pass() const { return argument.pass && closed.pass && (!series || series->pass); }
};

Remark1Report check_remark1_equivalence(const BaileyParams& p,
                                        Tolerance closed_tol = {Real(1e-12), Real(1e-10)},
                                        bool with_series = true,
                                        Tolerance series_tol = {Real(1e-12), Real(1e-8)},
                                        const TruncationPolicy& policy = {});

}  // namespace qsix
