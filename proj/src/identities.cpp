#include "qsix/identities.hpp"

#include <algorithm>
#include <cmath>

namespace qsix {

namespace {

constexpr Real kRelFloor = Real(1e-300);

// The four U-numerator and denominator arguments, and the two V pairs.
struct UVArgs {
  NamedArg u_num[4];
  NamedArg u_den[4];
  NamedArg v_num[2];
  NamedArg v_den[2];
};

UVArgs uv_args(const TruncParams& p) {
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  return UVArgs{
      {{"Bq", B * q}, {"Dq", D * q}, {"Eq", E * q}, {"BDE/(A^2q)", bde / (A * A * q)}},
      {{"BD/A", B * D / A}, {"BE/A", B * E / A}, {"DE/A", D * E / A}, {"Aq^2", A * q * q}},
      {{"Aq^2", A * q * q}, {"BCDEq/A^2", bde * C * q / (A * A)}},
      {{"A/(Cq)", A / (C * q)}, {"BDE/(A^2q^2)", bde / (A * A * q * q)}},
  };
}

void add_U(FactorProduct& fp, const UVArgs& a, long n) {
  fp.times_poch(a.u_num, n).over_poch(a.u_den, n);
}

// V_n without its (Cq^3)^{-n} power.
void add_V_poch(FactorProduct& fp, const UVArgs& a, long n) {
  fp.times_poch(a.v_num, n + 1).over_poch(a.v_den, n + 1);
}

// (A^2 q/BDE) nabla(A/(Cq), BD/A, BE/A, DE/A, BDE/(A^2q^2))
//             / nabla(Aq/B, Aq/D, Aq/E, BCDEq/A^2, BDEq/A)
void add_boundary_prefactor(FactorProduct& fp, const TruncParams& p) {
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  const NamedArg num[] = {{"A/(Cq)", A / (C * q)},
                          {"BD/A", B * D / A},
                          {"BE/A", B * E / A},
                          {"DE/A", D * E / A},
                          {"BDE/(A^2q^2)", bde / (A * A * q * q)}};
  const NamedArg den[] = {{"Aq/B", A * q / B},
                          {"Aq/D", A * q / D},
                          {"Aq/E", A * q / E},
                          {"BCDEq/A^2", bde * C * q / (A * A)},
                          {"BDEq/A", bde * q / A}};
  fp.times(A * A * q / bde).times_nabla(num).over_nabla(den);
}

void require_nonzero(Complex v, const char* what) {
  if (v == Complex{0}) throw DomainError(std::string(what) + " must be nonzero");
}

}  // namespace

ResidualReport ResidualReport::compare(Complex lhs, Complex rhs, Tolerance tol, std::string note) {
  ResidualReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  const Real scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_err = r.abs_err / std::max(scale, kRelFloor);
  r.pass = is_finite(lhs) && is_finite(rhs) && r.abs_err <= tol.atol + tol.rtol * scale;
  r.note = std::move(note);
  return r;
}

// ------------------------------------------------------------------------

void AbelInput::validate() const {
  if (M < 0 || N < 0) throw DomainError("AbelInput: M and N must be >= 0");
  if (U.size() != static_cast<std::size_t>(M + N + 2)) {
    throw DomainError("AbelInput: U must cover [-M, N+1]");
  }
  if (V.size() != static_cast<std::size_t>(M + N + 1)) {
    throw DomainError("AbelInput: V must cover [-M, N]");
  }
}

ResidualReport check_abel(const AbelInput& in, Tolerance tol) {
  in.validate();
  const long M = in.M;
  const long N = in.N;
  Complex lhs{0};
  for (long n = -M; n <= N; ++n) lhs += in.v(n) * (in.u(n) - in.u(n + 1));
  Complex rhs = in.v(-M) * in.u(-M) - in.v(N) * in.u(N + 1);
  for (long n = -M + 1; n <= N; ++n) rhs += in.u(n) * (in.v(n) - in.v(n - 1));
  return ResidualReport::compare(lhs, rhs, tol);
}

ResidualReport check_weierstrass(Complex b, Complex c, Complex x, Complex z, const QContext& ctx,
                                 bool use_theta, std::optional<Tolerance> tol) {
  require_nonzero(b, "b");
  require_nonzero(c, "c");
  require_nonzero(z, "z");
  if (!use_theta) {
    const Complex lhs = nabla({c * x, x / c, b * z, z / b}) - nabla({b * x, x / b, c * z, z / c});
    const Complex rhs = z / c * nabla({b * c, c / b, x * z, x / z});
    return ResidualReport::compare(lhs, rhs, tol.value_or(Tolerance{Real(1e-12), Real(1e-14)}),
                                   "nabla form");
  }
  require_nonzero(x, "x");
  const EvalResult t1 = theta_multi({c * x, x / c, b * z, z / b}, ctx);
  const EvalResult t2 = theta_multi({b * x, x / b, c * z, z / c}, ctx);
  const EvalResult t3 = theta_multi({b * c, c / b, x * z, x / z}, ctx);
  return ResidualReport::compare(t1.value - t2.value, z / c * t3.value,
                                 tol.value_or(Tolerance{Real(1e-12), Real(1e-10)}), "theta form");
}

// ------------------------------------------------------------------------

Complex compute_U(long n, const TruncParams& p) {
  p.validate();
  FactorProduct fp(p.q);
  add_U(fp, uv_args(p), n);
  return fp.value();
}

Complex compute_V(long n, const TruncParams& p) {
  p.validate();
  FactorProduct fp(p.q);
  add_V_poch(fp, uv_args(p), n);
  fp.times_power(p.C * p.q * p.q * p.q, -n);
  return fp.value();
}

// U_n - U_{n+1} = U_n (P_den - P_num) / P_den with P = prod (1 - x q^n) over
// the U arguments. Once U_n has settled, subtracting U_{n+1} directly loses
// about log10(1/|q|^n) digits, so the difference of the two products is
// telescoped factor by factor instead:
//   P_den - P_num = sum_i (a_i - b_i) y prod_{j<i} (1 - a_j y) prod_{j>i} (1 - b_j y)
// with y = q^n. For |y| > 1 the y^4 terms cancel (both argument lists have
// product B^2 D^2 E^2 q^2 / A^2 = L), so the same telescoping is applied to
//   P_den - P_num = L y^4 [prod (1 - 1/(b_j y)) - prod (1 - 1/(a_j y))].
Complex U_step_difference(long n, const TruncParams& p) {
  p.validate();
  const UVArgs args = uv_args(p);
  const Complex qn = ipow(p.q, n);
  Complex delta{0};
  if (std::abs(qn) <= 1) {
    for (int i = 0; i < 4; ++i) {
      Complex t = (args.u_num[i].value - args.u_den[i].value) * qn;
      for (int j = 0; j < i; ++j) t *= Real(1) - args.u_num[j].value * qn;
      for (int j = i + 1; j < 4; ++j) t *= Real(1) - args.u_den[j].value * qn;
      delta += t;
    }
  } else {
    const Complex inv = Real(1) / qn;
    for (int i = 0; i < 4; ++i) {
      Complex t = (Real(1) / args.u_num[i].value - Real(1) / args.u_den[i].value) * inv;
      for (int j = 0; j < i; ++j) t *= Real(1) - inv / args.u_num[j].value;
      for (int j = i + 1; j < 4; ++j) t *= Real(1) - inv / args.u_den[j].value;
      delta += t;
    }
    Complex lead = qn * qn * qn * qn;
    for (const NamedArg& a : args.u_num) lead *= a.value;
    delta *= lead;
  }
  FactorProduct fp(p.q);
  add_U(fp, args, n);
  for (const NamedArg& b : args.u_den) fp.over_nabla(b.value * qn, b.name);
  fp.times(delta);
  return fp.value();
}

ResidualReport check_U_difference(long n, const TruncParams& p, Tolerance tol) {
  const Complex lhs = U_step_difference(n, p);
  const auto [q, A, B, C, D, E, N] = p;
  (void)C;
  (void)N;
  const UVArgs args = uv_args(p);
  FactorProduct fp(q);
  fp.times(-D * E * ipow(q, n) / A)
      .times_nabla(B / (A * q), "B/(Aq)")
      .times_nabla(A * q / D, "Aq/D")
      .times_nabla(A * q / E, "Aq/E")
      .times_nabla(B * D * E * ipow(q, 2 * n + 1) / A, "BDEq^{2n+1}/A")
      .times_poch(args.u_num, n)
      .over_poch(args.u_den, n + 1);
  return ResidualReport::compare(lhs, fp.value(), tol, "n = " + std::to_string(n));
}

ResidualReport check_V_difference(long n, const TruncParams& p, Tolerance tol) {
  const Complex lhs = compute_V(n, p) - compute_V(n - 1, p);
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const UVArgs args = uv_args(p);
  const Complex cq3 = C * q * q * q;
  FactorProduct fp(q);
  fp.times_poch(args.v_num, n)
      .over_poch(args.v_den, n + 1)
      .times_nabla(B * D * E * ipow(q, 2 * n) / A, "BDEq^{2n}/A")
      .times_nabla(cq3, "Cq^3")
      .times_power(cq3, -n);
  return ResidualReport::compare(lhs, fp.value(), tol, "n = " + std::to_string(n));
}

KnParts compute_KN_parts(const TruncParams& p) {
  p.validate();
  const auto [q, A, B, C, D, E, N] = p;
  const UVArgs args = uv_args(p);
  const Complex cq3 = C * q * q * q;
  const long M = N + 1;

  KnParts k;
  {
    // V_{-M} U_{-M} (Cq^3)^N: V_{-M} carries (Cq^3)^M.
    FactorProduct fp(q);
    add_U(fp, args, -M);
    add_V_poch(fp, args, -M);
    fp.times_power(cq3, M + N);
    add_boundary_prefactor(fp, p);
    k.k1 = fp.value();
  }
  {
    // V_N (Cq^3)^N cancels V's own power.
    FactorProduct fp(q);
    add_U(fp, args, N + 1);
    add_V_poch(fp, args, N);
    add_boundary_prefactor(fp, p);
    k.k2 = fp.value();
  }
  {
    FactorProduct fp(q);
    fp.times_power(C * q * q, N + 1);
    k.k3 = truncated_S_term(p, N + 1) * fp.value();
  }
  k.total = k.k1 - k.k2 + k.k3 * ipow(q, N - 2) / C;
  return k;
}

Complex compute_KN(const TruncParams& p) { return compute_KN_parts(p).total; }

Complex compute_KN_printed(const TruncParams& p) {
  p.validate();
  const auto [q, A, B, C, D, E, N] = p;
  const Complex bde = B * D * E;
  const Complex bcde = bde * C;

  const NamedArg s_num[] = {{"Bq", B * q}, {"Dq", D * q}, {"Eq", E * q},
                            {"BCDEq^2/A^2", bcde * q * q / (A * A)}};
  const NamedArg s_den[] = {{"A/C", A / C}, {"BDq/A", B * D * q / A}, {"BEq/A", B * E * q / A},
                            {"DEq/A", D * E * q / A}};

  FactorProduct t1(q);
  t1.times(ipow(q, N - 2) / C)
      .times_nabla(bde * ipow(q, 2 * N + 3) / A, "BDEq^{2N+3}/A")
      .over_nabla(bde * q / A, "BDEq/A")
      .times_poch(s_num, N + 1)
      .over_poch(s_den, N + 1);

  const NamedArg t2_num[] = {{"A/(BD)", A / (B * D)}, {"A/(BE)", A / (B * E)},
                             {"A/(DE)", A / (D * E)}, {"C/A", C / A}};
  const NamedArg t2_den[] = {{"1/B", Real(1) / B}, {"1/D", Real(1) / D}, {"1/E", Real(1) / E},
                             {"A^2/(BCDEq)", A * A / (bcde * q)}};
  const NamedArg t2_nab[] = {{"C/A", C / A},
                             {"Aq/B", A * q / B},
                             {"Aq/D", A * q / D},
                             {"Aq/E", A * q / E},
                             {"BDEq/A", bde * q / A}};
  FactorProduct t2(q);
  t2.times(bde / C)
      .times_nabla(ipow(q, N - 1) / A, "q^{N-1}/A")
      .times_poch(t2_num, N + 2)
      .over_nabla(t2_nab)
      .over_poch(t2_den, N + 1);

  const NamedArg t3_nab_num[] = {{"Bq", B * q}, {"Dq", D * q}, {"Eq", E * q},
                                 {"BDEq^{N-1}/A^2", bde * ipow(q, N - 1) / (A * A)}};
  const NamedArg t3_nab_den[] = {
      {"Aq/B", A * q / B}, {"Aq/D", A * q / D}, {"Aq/E", A * q / E}, {"BDEq/A", bde * q / A}};
  const NamedArg t3_num[] = {{"BCDEq^2/A^2", bcde * q * q / (A * A)},
                             {"Bq^2", B * q * q},
                             {"Dq^2", D * q * q},
                             {"Eq^2", E * q * q}};
  FactorProduct t3(q);
  t3.times(A * A * q / bde)
      .times_nabla(t3_nab_num)
      .over_nabla(t3_nab_den)
      .times_poch(t3_num, N)
      .over_poch(s_den, N);

  return t1.value() + t2.value() - t3.value();
}

Complex recurrence_coefficient(const TruncParams& p) {
  p.validate();
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  const NamedArg num[] = {{"BDE/A", bde / A},
                          {"Cq^3", C * q * q * q},
                          {"BD/A", B * D / A},
                          {"BE/A", B * E / A},
                          {"DE/A", D * E / A}};
  const NamedArg den[] = {{"BDEq/A", bde * q / A},
                          {"BCDEq/A^2", bde * C * q / (A * A)},
                          {"Aq/B", A * q / B},
                          {"Aq/D", A * q / D},
                          {"Aq/E", A * q / E}};
  FactorProduct fp(q);
  fp.times(A * A * q / bde).times_nabla(num).over_nabla(den);
  return fp.value();
}

ResidualReport check_recurrence(const TruncParams& p, Tolerance tol) {
  p.validate();
  const Complex lhs = truncated_S(p.with_N(p.N + 1));
  const Complex cq3 = p.C * p.q * p.q * p.q;
  const Complex rhs =
      compute_KN(p) / ipow(cq3, p.N) + recurrence_coefficient(p) * truncated_S(p.shifted());
  return ResidualReport::compare(lhs, rhs, tol, "N = " + std::to_string(p.N));
}

ResidualReport check_KN_printed(const TruncParams& p, Tolerance tol) {
  return ResidualReport::compare(compute_KN(p), compute_KN_printed(p), tol,
                                 "assembled vs printed, N = " + std::to_string(p.N));
}

EvalResult kn_limit(const TruncParams& p, const TruncationPolicy& policy) {
  p.validate();
  const QContext ctx(p.q, policy);
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  const Complex bcde = bde * C;

  const EvalResult th1 = theta_multi({A / (B * D), A / (B * E), A / (D * E), A / C}, ctx);
  const EvalResult th2 =
      theta_multi({Real(1) / B, Real(1) / D, Real(1) / E, A * A / (bcde * q)}, ctx);
  const Complex w = A * A * C * q / (bde * bde);

  FactorProduct pre(q);
  pre.times(bde / C)
      .over_nabla(A * q / B, "Aq/B")
      .over_nabla(A * q / D, "Aq/D")
      .over_nabla(A * q / E, "Aq/E")
      .over_nabla(bde * q / A, "BDEq/A");

  const Complex den_args[] = {Real(1) / B,       Real(1) / D,  Real(1) / E,
                              A * A / (bcde * q), A / C,        B * D * q / A,
                              B * E * q / A,      D * E * q / A};
  const EvalResult den = qpochhammer_inf_multi(den_args, ctx);
  if (den.value == Complex{0}) throw PoleError("K_N limit denominator", "infinite product vanishes");

  EvalResult out;
  const Complex prefactor = pre.value();
  out.value = prefactor * (th1.value - w * th2.value) / den.value;
  const Real num_err = th1.est_error + std::abs(w) * th2.est_error;
  out.est_error = std::abs(prefactor / den.value) * num_err +
                  std::abs(out.value) * den.est_error / std::abs(den.value);
  out.terms_used = th1.terms_used + th2.terms_used + den.terms_used;
  return out;
}

EvalResult kn_limit_products(const TruncParams& p, const TruncationPolicy& policy) {
  p.validate();
  const QContext ctx(p.q, policy);
  const auto [q, A, B, C, D, E, N] = p;
  (void)N;
  const Complex bde = B * D * E;
  const Complex bcde = bde * C;

  FactorProduct nab(q);
  nab.over_nabla(A * q / B, "Aq/B")
      .over_nabla(A * q / D, "Aq/D")
      .over_nabla(A * q / E, "Aq/E")
      .over_nabla(bde * q / A, "BDEq/A");
  const Complex inv_nabla = nab.value();

  const EvalResult r1 = infinite_product_ratio(
      {{"A/(BD)", A / (B * D)}, {"A/(BE)", A / (B * E)}, {"A/(DE)", A / (D * E)}, {"Cq/A", C * q / A}},
      {{"1/B", Real(1) / B}, {"1/D", Real(1) / D}, {"1/E", Real(1) / E},
       {"A^2/(BCDEq)", A * A / (bcde * q)}},
      ctx);
  const EvalResult r2 = infinite_product_ratio(
      {{"BCDEq^2/A^2", bcde * q * q / (A * A)}, {"Bq", B * q}, {"Dq", D * q}, {"Eq", E * q}},
      {{"A/C", A / C}, {"BDq/A", B * D * q / A}, {"BEq/A", B * E * q / A}, {"DEq/A", D * E * q / A}},
      ctx);
  const Complex c1 = bde / C * inv_nabla;
  const Complex c2 = A * A * q / bde * inv_nabla;
  EvalResult out;
  out.value = c1 * r1.value - c2 * r2.value;
  out.est_error = std::abs(c1) * r1.est_error + std::abs(c2) * r2.est_error;
  out.terms_used = r1.terms_used + r2.terms_used;
  return out;
}

KnDecayReport check_KN_decay(const TruncParams& p, KnDecayOptions opts,
                             const TruncationPolicy& policy) {
  p.validate();
  const Complex cq3 = p.C * p.q * p.q * p.q;
  if (!(std::abs(cq3) > 1)) {
    throw DomainError("K_N decay needs |Cq^3| > 1 (got " +
                      std::to_string(static_cast<double>(std::abs(cq3))) + ")");
  }
  if (opts.n_max < 0 || opts.decay_by < 0 || opts.decay_by > opts.n_max) {
    throw DomainError("K_N decay: need 0 <= decay_by <= n_max");
  }

  KnDecayReport r;
  Complex kn{};
  for (long n = 0; n <= opts.n_max; ++n) {
    kn = compute_KN(p.with_N(n));
    FactorProduct scaled(p.q);
    scaled.times(kn).times_power(cq3, -n);
    r.magnitudes.push_back(std::abs(scaled.value()));
  }
  r.kn_at_max = kn;

  const std::size_t count = r.magnitudes.size();
  const std::size_t from = count - std::max<std::size_t>(count / 4, 1);
  r.eventually_decreasing = true;
  for (std::size_t i = from; i + 1 < count; ++i) {
    if (r.magnitudes[i + 1] > r.magnitudes[i]) r.eventually_decreasing = false;
  }
  r.decay_pass = r.eventually_decreasing &&
                 r.magnitudes[static_cast<std::size_t>(opts.decay_by)] < opts.decay_tol &&
                 r.magnitudes.back() < opts.decay_tol;

  const EvalResult lim = kn_limit(p, policy);
  r.limit = lim.value;
  const Real scale = std::max(std::abs(kn), std::abs(lim.value));
  r.limit_rel_err = std::abs(kn - lim.value) / std::max(scale, kRelFloor);
  r.limit_pass = r.limit_rel_err <= opts.limit_rtol;
  return r;
}

// ------------------------------------------------------------------------

Complex T_recursion_factor(const TParams& p) {
  const auto [q, X, B, C, D, E] = p;
  const Complex bcdex = B * C * D * E * X;
  const Complex alpha = bcdex * X;
  const NamedArg num[] = {{"1/(BCDEXq)", Real(1) / (bcdex * q)},
                          {"BCDEX^2q", alpha * q},
                          {"BC/q", B * C / q},
                          {"CD/q", C * D / q},
                          {"CE/q", C * E / q}};
  const NamedArg den[] = {{"1/(BCDEX^2)", Real(1) / alpha},
                          {"C/q^3", p.argument()},
                          {"BCDX", B * C * D * X},
                          {"BCEX", B * C * E * X},
                          {"CDEX", C * D * E * X}};
  FactorProduct fp(q);
  fp.times_nabla(num).over_nabla(den);
  return fp.value();
}

ResidualReport check_T_recursion(const TParams& p, Tolerance tol, const TruncationPolicy& policy) {
  p.validate();
  require_nonzero(p.C, "C");
  if (!p.convergent()) throw NonConvergence("T recursion needs |C/q^3| < 1");
  const EvalResult lhs = eval_T(p, policy);
  const EvalResult next = eval_T(p.with_C(p.C * p.q), policy);
  return ResidualReport::compare(lhs.value, T_recursion_factor(p) * next.value, tol);
}

ResidualReport check_T_iteration(Complex B, Complex C, Complex D, Complex E, const QContext& ctx,
                                 long m, Tolerance tol) {
  if (m < 0) throw DomainError("T iteration: m must be >= 0");
  const Complex q = ctx.q();
  const TParams p{q, q, B, C, D, E};
  p.validate();
  if (!p.convergent()) throw NonConvergence("T iteration needs |C/q^3| < 1");
  const EvalResult lhs = eval_T(p, ctx.policy());
  const EvalResult tail = eval_T(p.with_C(C * ipow(q, m)), ctx.policy());

  const NamedArg num[] = {{"BCDEq^3", B * C * D * E * q * q * q},
                          {"BC/q", B * C / q},
                          {"CD/q", C * D / q},
                          {"CE/q", C * E / q}};
  const NamedArg den[] = {{"C/q^3", p.argument()},
                          {"BCDq", B * C * D * q},
                          {"BCEq", B * C * E * q},
                          {"CDEq", C * D * E * q}};
  FactorProduct fp(q);
  fp.times_poch(num, m).over_poch(den, m);
  return ResidualReport::compare(lhs.value, fp.value() * tail.value, tol,
                                 "m = " + std::to_string(m));
}

QConstancyReport check_Q_constancy(const TParams& p, long steps, Tolerance spread_tol,
                                   Tolerance closed_tol, const TruncationPolicy& policy) {
  p.validate();
  require_nonzero(p.C, "C");
  if (steps < 0) throw DomainError("Q constancy: steps must be >= 0");
  if (!p.convergent()) throw NonConvergence("Q constancy needs |C/q^3| < 1");

  QConstancyReport r;
  Complex c = p.C;
  for (long k = 0; k <= steps; ++k, c *= p.q) {
    const TParams pk = p.with_C(c);
    const EvalResult t = eval_T(pk, policy);
    const EvalResult f = F_function(pk, policy);
    if (f.value == Complex{0}) throw PoleError("F(C)", "F vanishes at C q^" + std::to_string(k));
    r.ratios.push_back(t.value / f.value);
  }

  std::size_t bi = 0;
  std::size_t bj = 0;
  Real widest = -1;
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    for (std::size_t j = i; j < r.ratios.size(); ++j) {
      const Real d = std::abs(r.ratios[i] - r.ratios[j]);
      if (d > widest) {
        widest = d;
        bi = i;
        bj = j;
      }
    }
  }
  r.spread = ResidualReport::compare(r.ratios[bi], r.ratios[bj], spread_tol,
                                     "ratios k=" + std::to_string(bi) + ",k=" + std::to_string(bj));
  const QContext ctx(p.q, policy);
  const EvalResult qf = q_factor(p.X, p.B, p.D, p.E, ctx);
  r.closed_form = ResidualReport::compare(r.ratios[0], qf.value, closed_tol, "against q_factor");
  return r;
}

ResidualReport check_bailey_a(const BaileyParams& p, Tolerance tol, const TruncationPolicy& policy) {
  p.validate();
  if (!p.convergent()) throw NonConvergence("Bailey a-form needs |a^2 q/(bcde)| < 1");
  const QContext ctx(p.q, policy);
  const EvalResult lhs = vwp_psi6(p.a, {p.b, p.c, p.d, p.e}, p.argument(), ctx);
  const EvalResult rhs = bailey_closed_a(p, policy);
  return ResidualReport::compare(lhs.value, rhs.value, tol, "a-form");
}

ResidualReport check_bailey_X(const TParams& p, Tolerance tol, const TruncationPolicy& policy) {
  p.validate();
  if (!p.convergent()) throw NonConvergence("Bailey X-form needs |C/q^3| < 1");
  const EvalResult lhs = eval_T(p, policy);
  const EvalResult rhs = bailey_closed_X(p, policy);
  return ResidualReport::compare(lhs.value, rhs.value, tol, "X-form");
}

ResidualReport check_rogers(Complex B, Complex C, Complex D, Complex E, const QContext& ctx,
                            Tolerance tol) {
  require_nonzero(B, "B");
  require_nonzero(D, "D");
  require_nonzero(E, "E");
  const Complex q = ctx.q();
  const Complex z = C / (q * q * q);
  if (!(std::abs(z) < 1)) throw NonConvergence("Rogers 6phi5 needs |C/q^3| < 1");
  const Complex q2 = q * q;
  const EvalResult lhs = vwp_phi6(B * C * D * E * q2, {B * q2, D * q2, E * q2}, z, ctx);
  const EvalResult rhs = rogers_closed(B, C, D, E, ctx);
  return ResidualReport::compare(lhs.value, rhs.value, tol);
}

TParams map_remark1(const BaileyParams& p) {
  p.validate();
  const auto [q, a, b, c, d, e] = p;
  const Complex aq2 = a * q * q;
  TParams t;
  t.q = q;
  t.B = b * c / aq2;
  t.C = a * a * q * q * q * q / (b * c * d * e);
  t.D = b * d / aq2;
  t.E = b * e / aq2;
  t.X = a * q / b;
  return t;
}

Remark1Report check_remark1_equivalence(const BaileyParams& p, Tolerance closed_tol,
                                        bool with_series, Tolerance series_tol,
                                        const TruncationPolicy& policy) {
  const TParams t = map_remark1(p);
  Remark1Report r;
  r.argument = ResidualReport::compare(t.argument(), p.argument(), Tolerance{0, Real(1e-15)},
                                       "C/q^3 vs a^2q/(bcde)");
  r.closed = ResidualReport::compare(bailey_closed_a(p, policy).value,
                                     bailey_closed_X(t, policy).value, closed_tol,
                                     "closed products");
  if (with_series) {
    if (!p.convergent()) throw NonConvergence("mapped series comparison needs |a^2 q/(bcde)| < 1");
    const QContext ctx(p.q, policy);
    const EvalResult sa = vwp_psi6(p.a, {p.b, p.c, p.d, p.e}, p.argument(), ctx);
    const EvalResult sx = eval_T(t, policy);
    r.series = ResidualReport::compare(sa.value, sx.value, series_tol, "bilateral series");
  }
  return r;
}

}  // namespace qsix
