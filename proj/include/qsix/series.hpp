// Unilateral and bilateral basic hypergeometric series, the very-well-poised
// 6psi6 and 6phi5, the truncated sum S_N(A;C), the bilateral function
// T(X;C), and the infinite-product closed forms that accompany them.
#pragma once

#include <array>
#include <vector>

#include "qsix/qcore.hpp"

namespace qsix {

// r numerators; r-1 denominators for phi (the (q;q)_n factor is implicit),
// r denominators for psi.
struct SeriesSpec {
  std::vector<Complex> numerators;
  std::vector<Complex> denominators;
  Complex z{};
  bool bilateral = false;

  void validate() const;
};

// Parameters of S_N(A,B,C,D,E) and K_N(A;B,C,D,E).
struct TruncParams {
  Complex q, A, B, C, D, E;
  long N = 0;

  void validate() const;
  TruncParams with_N(long n) const;
  // (A, C) -> (Aq, Cq): the companion sum on the right of the recurrence.
  TruncParams shifted() const;
};

// Parameters of Bailey's 6psi6 in its classical form.
struct BaileyParams {
  Complex q, a, b, c, d, e;

  void validate() const;
  // a^2 q / (bcde), the series argument.
  Complex argument() const;
  bool convergent() const { return std::abs(argument()) < 1; }
};

// Parameters of T(X;C) = 6psi6(BCDEX^2; BCDEXq, BXq, DXq, EXq; q, C/q^3).
struct TParams {
  Complex q, X, B, C, D, E;

  void validate() const;
  Complex argument() const;  // C/q^3
  bool convergent() const { return std::abs(argument()) < 1; }
  TParams with_C(Complex c) const;
  Complex vwp_a() const;  // BCDEX^2
};

EvalResult eval_phi(const SeriesSpec& spec, const QContext& ctx);
EvalResult eval_psi(const SeriesSpec& spec, const QContext& ctx);

// 6psi6(a; b,c,d,e; q, z) with the kernel (1 - a q^{2n})/(1 - a) in place of
// the pair (q sqrt(a), -q sqrt(a)) over (sqrt(a), -sqrt(a)).
EvalResult vwp_psi6(Complex a, const std::array<Complex, 4>& bs, Complex z, const QContext& ctx);

// 6phi5(a; b,c,d; q, z), same kernel, unilateral.
EvalResult vwp_phi6(Complex a, const std::array<Complex, 3>& bs, Complex z, const QContext& ctx);

// The n-th summand of S_N(A;C) (independent of N).
Complex truncated_S_term(const TruncParams& p, long n);
// Exact finite sum over n = -N..N.
Complex truncated_S(const TruncParams& p);

EvalResult eval_T(const TParams& p, const TruncationPolicy& policy = {});

// (BCDEq^3, BC/q, CD/q, CE/q; q)_inf / (C/q^3, BCDq, BCEq, CDEq; q)_inf
EvalResult rogers_closed(Complex B, Complex C, Complex D, Complex E, const QContext& ctx);

// Bailey's nine-over-nine product.
EvalResult bailey_closed_a(const BaileyParams& p, const TruncationPolicy& policy = {});

// The same summation, written in the (X; B, C, D, E) parametrization.
EvalResult bailey_closed_X(const TParams& p, const TruncationPolicy& policy = {});

// Q(X;B,D,E) = (q, 1/Bq, 1/Dq, 1/Eq; q)_inf / (X, 1/BX, 1/DX, 1/EX; q)_inf
EvalResult q_factor(Complex X, Complex B, Complex D, Complex E, const QContext& ctx);

// F(C) = (BCDEX^2 q, q/(BCDEX^2), BC/q, CD/q, CE/q; q)_inf
//      / (1/(BCDEX), C/q^3, BCDX, BCEX, CDEX; q)_inf
EvalResult F_function(const TParams& p, const TruncationPolicy& policy = {});

}  // namespace qsix
