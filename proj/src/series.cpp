#include "qsix/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsix {

namespace {

// Factor perturbations below this are treated as the asymptotic regime in
// which the observed term ratio equals its limit to working precision.
constexpr Real kAsymptotic = Real(1e-12);
constexpr Real kDivergentRatio = 1 - Real(1e-9);
constexpr long kRecomputeEvery = 64;
constexpr Real kOverflow = Real(1e300);

// term_n = (numer;q)_n / (denom;q)_n * z^n * kernel_n, where kernel_n is
// (1 - a q^{2n}) / (1 - a) when a kernel is present and 1 otherwise.
struct TermModel {
  std::vector<Complex> numer;
  std::vector<Complex> denom;
  Complex z{};
  bool has_kernel = false;
  Complex kernel_a{};
};

struct SideSum {
  Complex sum{};
  Real tail_bound = 0;
  Real abs_sum = 0;
  std::size_t terms = 0;
  bool terminated = false;
};

Complex kernel_at(const TermModel& m, Complex q2n) {
  if (!m.has_kernel) return Complex{1};
  return (Real(1) - m.kernel_a * q2n) / (Real(1) - m.kernel_a);
}

Complex direct_pochhammer_part(const TermModel& m, Complex q, long n) {
  FactorProduct fp(q);
  for (const Complex& a : m.numer) fp.times_poch(a, n, "numerator");
  for (const Complex& b : m.denom) fp.over_poch(b, n, "denominator");
  fp.times_power(m.z, n);
  return fp.value();
}

bool in_asymptotic_regime(const TermModel& m, Complex qn, int dir) {
  auto small = [&](Complex x) { return x == Complex{0} || std::abs(x * qn) < kAsymptotic; };
  auto large = [&](Complex x) { return x == Complex{0} || std::abs(x * qn) > 1 / kAsymptotic; };
  auto all = [&](auto pred) {
    return std::all_of(m.numer.begin(), m.numer.end(), pred) &&
           std::all_of(m.denom.begin(), m.denom.end(), pred);
  };
  if (dir > 0) {
    return all(small) && (!m.has_kernel || small(m.kernel_a * qn));
  }
  return all(large) && (!m.has_kernel || large(m.kernel_a * qn));
}

// Sums one direction: n = 0, 1, 2, ... for dir > 0 and n = -1, -2, ... for
// dir < 0. The Pochhammer part is advanced by its one-step ratio and
// recomputed from scratch every kRecomputeEvery steps.
SideSum sum_side(const TermModel& m, const QContext& ctx, int dir) {
  const Complex q = ctx.q();
  const TruncationPolicy& policy = ctx.policy();

  SideSum out;
  Complex p{1};
  Complex qn{1};
  long n = 0;
  Real max_term = 0;
  if (dir > 0) {
    out.sum = kernel_at(m, Complex{1});
    out.abs_sum = std::abs(out.sum);
    max_term = out.abs_sum;
    out.terms = 1;
  }

  Complex prev_kernel = kernel_at(m, Complex{1});
  std::size_t quiet = 0;
  Real window_ratio = 0;

  for (std::size_t step = 1;; ++step) {
    if (step > policy.max_terms) {
      throw BudgetExceeded("series: max_terms reached before the tail criterion");
    }

    Complex ratio{1};
    if (dir > 0) {
      if (m.z == Complex{0}) {
        out.terminated = true;
        break;
      }
      bool zero = false;
      for (const Complex& a : m.numer) zero = zero || factor_vanishes(a * qn);
      if (zero) {
        out.terminated = true;
        break;
      }
      for (const Complex& b : m.denom) {
        if (factor_vanishes(b * qn)) {
          throw PoleError("denominator (b;q)_" + std::to_string(n + 1),
                          "b = " + std::to_string(b.real()) + "," + std::to_string(b.imag()));
        }
      }
      for (const Complex& a : m.numer) ratio *= Real(1) - a * qn;
      for (const Complex& b : m.denom) ratio /= Real(1) - b * qn;
      ratio *= m.z;
      qn *= q;
      ++n;
    } else {
      const Complex qn1 = qn / q;
      bool zero = false;
      for (const Complex& b : m.denom) zero = zero || factor_vanishes(b * qn1);
      if (zero) {
        out.terminated = true;
        break;
      }
      for (const Complex& a : m.numer) {
        if (factor_vanishes(a * qn1)) {
          throw PoleError("numerator (a;q)_" + std::to_string(n - 1),
                          "a = " + std::to_string(a.real()) + "," + std::to_string(a.imag()));
        }
      }
      if (m.z == Complex{0}) {
        throw NonConvergence("bilateral series: argument z = 0 makes negative-index terms diverge");
      }
      for (const Complex& b : m.denom) ratio *= Real(1) - b * qn1;
      for (const Complex& a : m.numer) ratio /= Real(1) - a * qn1;
      ratio /= m.z;
      qn = qn1;
      --n;
    }

    p *= ratio;
    if (static_cast<long>(step) % kRecomputeEvery == 0) p = direct_pochhammer_part(m, q, n);

    const Complex kernel = kernel_at(m, qn * qn);
    const Complex term = p * kernel;
    const Real mag = std::abs(term);
    if (!std::isfinite(mag) || mag > kOverflow) {
      throw NonConvergence("series: terms overflow the working precision");
    }
    out.sum += term;
    out.abs_sum += mag;
    ++out.terms;
    max_term = std::max(max_term, mag);

    Real rho = std::abs(ratio);
    if (prev_kernel != Complex{0}) rho *= std::abs(kernel) / std::abs(prev_kernel);
    prev_kernel = kernel;

    if (rho >= kDivergentRatio && in_asymptotic_regime(m, qn, dir)) {
      throw NonConvergence("series: terms do not decay (asymptotic term ratio " +
                           std::to_string(static_cast<double>(rho)) + ")");
    }

    const Real scale = std::max(std::abs(out.sum), max_term);
    if (rho < 1 && mag <= policy.tail_tol * scale) {
      window_ratio = quiet == 0 ? rho : std::max(window_ratio, rho);
      if (++quiet >= policy.stagnation_window) {
        out.tail_bound = mag * window_ratio / (1 - window_ratio);
        break;
      }
    } else {
      quiet = 0;
    }
  }
  return out;
}

EvalResult finish(const SideSum& pos, const SideSum* neg) {
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  EvalResult r;
  r.value = pos.sum;
  r.est_error = pos.tail_bound + 8 * eps * pos.abs_sum;
  r.terms_used = pos.terms;
  r.terminated = pos.terminated;
  if (neg) {
    r.value += neg->sum;
    r.est_error += neg->tail_bound + 8 * eps * neg->abs_sum;
    r.terms_used += neg->terms;
    r.terminated = pos.terminated || neg->terminated;
  }
  return r;
}

EvalResult sum_unilateral(const TermModel& m, const QContext& ctx) {
  return finish(sum_side(m, ctx, +1), nullptr);
}

EvalResult sum_bilateral(const TermModel& m, const QContext& ctx) {
  const SideSum pos = sum_side(m, ctx, +1);
  const SideSum neg = sum_side(m, ctx, -1);
  return finish(pos, &neg);
}

void require_nonzero(Complex v, const char* what) {
  if (v == Complex{0}) throw DomainError(std::string(what) + " must be nonzero");
}

}  // namespace

void SeriesSpec::validate() const {
  if (numerators.empty() && !bilateral) throw DomainError("phi series needs at least one numerator");
  if (bilateral) {
    if (numerators.size() != denominators.size()) {
      throw DomainError("psi series needs as many denominators as numerators");
    }
  } else if (denominators.size() + 1 != numerators.size()) {
    throw DomainError("phi series needs r numerators and r-1 denominators");
  }
  for (const Complex& v : numerators) {
    if (!is_finite(v)) throw DomainError("non-finite numerator parameter");
  }
  for (const Complex& v : denominators) {
    if (!is_finite(v)) throw DomainError("non-finite denominator parameter");
  }
  if (!is_finite(z)) throw DomainError("non-finite argument");
}

void TruncParams::validate() const {
  require_base(q);
  require_nonzero(A, "A");
  require_nonzero(B, "B");
  require_nonzero(C, "C");
  require_nonzero(D, "D");
  require_nonzero(E, "E");
  if (N < 0) throw DomainError("N must be >= 0");
}

TruncParams TruncParams::with_N(long n) const {
  TruncParams p = *this;
  p.N = n;
  return p;
}

TruncParams TruncParams::shifted() const {
  TruncParams p = *this;
  p.A = A * q;
  p.C = C * q;
  return p;
}

void BaileyParams::validate() const {
  require_base(q);
  require_nonzero(a, "a");
  require_nonzero(b, "b");
  require_nonzero(c, "c");
  require_nonzero(d, "d");
  require_nonzero(e, "e");
}

Complex BaileyParams::argument() const { return a * a * q / (b * c * d * e); }

void TParams::validate() const {
  require_base(q);
  require_nonzero(X, "X");
  require_nonzero(B, "B");
  require_nonzero(D, "D");
  require_nonzero(E, "E");
}

Complex TParams::argument() const { return C / (q * q * q); }

TParams TParams::with_C(Complex c) const {
  TParams p = *this;
  p.C = c;
  return p;
}

Complex TParams::vwp_a() const { return B * C * D * E * X * X; }

EvalResult eval_phi(const SeriesSpec& spec, const QContext& ctx) {
  if (spec.bilateral) throw DomainError("eval_phi: spec is bilateral");
  spec.validate();
  TermModel m{spec.numerators, spec.denominators, spec.z, false, {}};
  m.denom.push_back(ctx.q());
  return sum_unilateral(m, ctx);
}

EvalResult eval_psi(const SeriesSpec& spec, const QContext& ctx) {
  if (!spec.bilateral) throw DomainError("eval_psi: spec is unilateral");
  spec.validate();
  const TermModel m{spec.numerators, spec.denominators, spec.z, false, {}};
  return sum_bilateral(m, ctx);
}

EvalResult vwp_psi6(Complex a, const std::array<Complex, 4>& bs, Complex z, const QContext& ctx) {
  if (factor_vanishes(a)) throw PoleError("nabla(a)", "very-well-poised kernel needs a != 1");
  TermModel m;
  m.z = z;
  m.has_kernel = true;
  m.kernel_a = a;
  for (const Complex& b : bs) {
    require_nonzero(b, "very-well-poised parameter");
    m.numer.push_back(b);
    m.denom.push_back(a * ctx.q() / b);
  }
  return sum_bilateral(m, ctx);
}

EvalResult vwp_phi6(Complex a, const std::array<Complex, 3>& bs, Complex z, const QContext& ctx) {
  if (factor_vanishes(a)) throw PoleError("nabla(a)", "very-well-poised kernel needs a != 1");
  TermModel m;
  m.z = z;
  m.has_kernel = true;
  m.kernel_a = a;
  m.numer.push_back(a);
  for (const Complex& b : bs) {
    require_nonzero(b, "very-well-poised parameter");
    m.numer.push_back(b);
    m.denom.push_back(a * ctx.q() / b);
  }
  m.denom.push_back(ctx.q());
  return sum_unilateral(m, ctx);
}

Complex truncated_S_term(const TruncParams& p, long n) {
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  const NamedArg numer[] = {{"Bq", B * q}, {"Dq", D * q}, {"Eq", E * q},
                            {"BCDEq^2/A^2", bde * C * q * q / (A * A)}};
  const NamedArg denom[] = {{"DEq/A", D * E * q / A}, {"BEq/A", B * E * q / A},
                            {"BDq/A", B * D * q / A}, {"A/C", A / C}};
  FactorProduct fp(q);
  fp.times_nabla(bde * ipow(q, 2 * n + 1) / A, "BDEq^{2n+1}/A")
      .over_nabla(bde * q / A, "BDEq/A")
      .times_poch(numer, n)
      .over_poch(denom, n)
      .times_power(Real(1) / (C * q * q), n);
  return fp.value();
}

Complex truncated_S(const TruncParams& p) {
  p.validate();
  Complex s{0};
  for (long n = -p.N; n <= p.N; ++n) s += truncated_S_term(p, n);
  return s;
}

EvalResult eval_T(const TParams& p, const TruncationPolicy& policy) {
  p.validate();
  const QContext ctx(p.q, policy);
  if (!p.convergent()) throw NonConvergence("T(X;C) needs |C/q^3| < 1");
  const Complex x = p.X;
  const Complex q = p.q;
  const std::array<Complex, 4> bs = {p.B * p.C * p.D * p.E * x * q, p.B * x * q, p.D * x * q,
                                     p.E * x * q};
  return vwp_psi6(p.vwp_a(), bs, p.argument(), ctx);
}

EvalResult rogers_closed(Complex B, Complex C, Complex D, Complex E, const QContext& ctx) {
  const Complex q = ctx.q();
  return infinite_product_ratio(
      {{"BCDEq^3", B * C * D * E * q * q * q}, {"BC/q", B * C / q}, {"CD/q", C * D / q},
       {"CE/q", C * E / q}},
      {{"C/q^3", C / (q * q * q)}, {"BCDq", B * C * D * q}, {"BCEq", B * C * E * q},
       {"CDEq", C * D * E * q}},
      ctx);
}

EvalResult bailey_closed_a(const BaileyParams& p, const TruncationPolicy& policy) {
  p.validate();
  const QContext ctx(p.q, policy);
  const auto [q, a, b, c, d, e] = p;
  const Complex aq = a * q;
  return infinite_product_ratio(
      {{"q", q}, {"aq", aq}, {"q/a", q / a}, {"aq/(be)", aq / (b * e)}, {"aq/(ce)", aq / (c * e)},
       {"aq/(de)", aq / (d * e)}, {"aq/(bc)", aq / (b * c)}, {"aq/(bd)", aq / (b * d)},
       {"aq/(cd)", aq / (c * d)}},
      {{"aq/b", aq / b}, {"aq/c", aq / c}, {"aq/d", aq / d}, {"aq/e", aq / e}, {"q/b", q / b},
       {"q/c", q / c}, {"q/d", q / d}, {"q/e", q / e}, {"a^2q/(bcde)", p.argument()}},
      ctx);
}

EvalResult bailey_closed_X(const TParams& p, const TruncationPolicy& policy) {
  p.validate();
  const QContext ctx(p.q, policy);
  const auto [q, X, B, C, D, E] = p;
  const Complex alpha = p.vwp_a();
  return infinite_product_ratio(
      {{"q", q}, {"1/(Bq)", Real(1) / (B * q)}, {"1/(Dq)", Real(1) / (D * q)},
       {"1/(Eq)", Real(1) / (E * q)}, {"BCDEX^2q", alpha * q}, {"q/(BCDEX^2)", q / alpha},
       {"BC/q", B * C / q}, {"CD/q", C * D / q}, {"CE/q", C * E / q}},
      {{"X", X}, {"1/(BX)", Real(1) / (B * X)}, {"1/(DX)", Real(1) / (D * X)},
       {"1/(EX)", Real(1) / (E * X)}, {"1/(BCDEX)", Real(1) / (B * C * D * E * X)},
       {"C/q^3", p.argument()}, {"BCDX", B * C * D * X}, {"BCEX", B * C * E * X},
       {"CDEX", C * D * E * X}},
      ctx);
}

EvalResult q_factor(Complex X, Complex B, Complex D, Complex E, const QContext& ctx) {
  require_nonzero(X, "X");
  require_nonzero(B, "B");
  require_nonzero(D, "D");
  require_nonzero(E, "E");
  const Complex q = ctx.q();
  return infinite_product_ratio(
      {{"q", q}, {"1/(Bq)", Real(1) / (B * q)}, {"1/(Dq)", Real(1) / (D * q)},
       {"1/(Eq)", Real(1) / (E * q)}},
      {{"X", X}, {"1/(BX)", Real(1) / (B * X)}, {"1/(DX)", Real(1) / (D * X)},
       {"1/(EX)", Real(1) / (E * X)}},
      ctx);
}

EvalResult F_function(const TParams& p, const TruncationPolicy& policy) {
  p.validate();
  require_nonzero(p.C, "C");
  const QContext ctx(p.q, policy);
  const auto [q, X, B, C, D, E] = p;
  const Complex alpha = p.vwp_a();
  return infinite_product_ratio(
      {{"BCDEX^2q", alpha * q}, {"q/(BCDEX^2)", q / alpha}, {"BC/q", B * C / q},
       {"CD/q", C * D / q}, {"CE/q", C * E / q}},
      {{"1/(BCDEX)", Real(1) / (B * C * D * E * X)}, {"C/q^3", p.argument()},
       {"BCDX", B * C * D * X}, {"BCEX", B * C * E * X}, {"CDEX", C * D * E * X}},
      ctx);
}

}  // namespace qsix
