#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qsix/series.hpp"

using namespace qsix;
using oracle::LC;
using oracle::lc;
using oracle::rel;

namespace {

const QContext half(Complex{0.5});

TruncParams sample_P() { return {Complex{0.5}, Complex{2}, Complex{0.3}, Complex{3}, Complex{0.7}, Complex{1.1}, 0}; }

TParams sample_T() {
  return {Complex{0.4}, Complex{1.3}, Complex{0.2}, Complex{0.03}, Complex{0.25}, Complex{0.35}};
}

}  // namespace

TEST_CASE("unilateral series") {
  // 1phi0(a;;q,z) = (az;q)_inf / (z;q)_inf
  const SeriesSpec s{{Complex{0.3}}, {}, Complex{0.2}, false};
  const EvalResult r = eval_phi(s, half);
  const Complex closed = qpochhammer_inf(Complex{0.06}, half).value / qpochhammer_inf(Complex{0.2}, half).value;
  CHECK(rel(r.value, closed) < 1e-14);
  CHECK(r.est_error < 1e-13);

  // terminating: (q^-3; q)_n vanishes from n = 4
  const SeriesSpec t{{Complex{8}, Complex{0.3}}, {Complex{0.7}}, Complex{0.4}, false};
  const EvalResult rt = eval_phi(t, half);
  CHECK(rt.terminated);
  CHECK(rel(rt.value, oracle::phi({8.0L, 0.3L}, {0.7L}, 0.4L, 0.5L, 4)) < 1e-14);
}

TEST_CASE("series validation") {
  const SeriesSpec bad{{Complex{0.3}, Complex{0.2}}, {}, Complex{0.2}, false};
  CHECK_THROWS_AS(eval_phi(bad, half), DomainError);
  const SeriesSpec pole{{Complex{0.3}}, {Complex{0.25}, Complex{2}}, Complex{0.2}, false};
  CHECK_THROWS(eval_phi(pole, half));
}

TEST_CASE("q-binomial: 1phi0 divergence outside the disc") {
  const SeriesSpec s{{Complex{0.3}}, {}, Complex{1.5}, false};
  CHECK_THROWS_AS(eval_phi(s, half), NonConvergence);
}

TEST_CASE("bilateral series against direct summation") {
  // |z| = 0.5 and |b1 b2 / (a1 a2 z)| <= 0.5, so both tails of the 101-term
  // direct sum are below about 1e-15 of the largest term.
  std::mt19937_64 rng(201);
  for (int trial = 0; trial < 40; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.3, 0.6);
    const Complex a1 = oracle::random_complex(rng, 1.0, 2.0);
    const Complex a2 = oracle::random_complex(rng, 1.0, 2.0);
    const Complex b1 = oracle::random_complex(rng, 0.3, 0.5);
    const Complex b2 = oracle::random_complex(rng, 0.3, 0.5);
    const Complex z = oracle::random_complex(rng, 0.5, 0.5);
    const SeriesSpec s{{a1, a2}, {b1, b2}, z, true};
    EvalResult r;
    try {
      r = eval_psi(s, QContext(q));
    } catch (const PoleError&) {
      continue;
    }
    const LC direct = oracle::psi({lc(a1), lc(a2)}, {lc(b1), lc(b2)}, lc(z), lc(q), 50);
    CHECK(rel(r.value, direct) < 1e-12);
    CHECK(std::abs(lc(r.value) - direct) <= r.est_error + 1e-14L * (1 + std::abs(direct)));
  }
}

TEST_CASE("Ramanujan 1psi1 sum") {
  // 1psi1(a; b; q, z) = (q, b/a, az, q/(az); q)_inf / (b, q/a, z, b/(az); q)_inf, |b/a| < |z| < 1
  const Complex a{0.6}, b{0.3}, z{0.8};
  const EvalResult r = eval_psi({{a}, {b}, z, true}, half);
  const LC closed = oracle::pinf_list({0.5L, 0.5L, 0.48L, 0.5L / 0.48L}, 0.5L) /
                    oracle::pinf_list({0.3L, 0.5L / 0.6L, 0.8L, 0.3L / 0.48L}, 0.5L);
  CHECK(rel(r.value, closed) < 1e-13);
}

TEST_CASE("bilateral at z = 0 is not convergent") {
  const SeriesSpec s{{Complex{0.3}}, {Complex{0.6}}, Complex{0}, true};
  CHECK_THROWS_AS(eval_psi(s, half), NonConvergence);
}

TEST_CASE("very-well-poised kernel matches the explicit square-root form") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.3, 0.6);
    const Complex a = oracle::random_complex(rng, 0.3, 1.5);
    std::array<Complex, 4> bs;
    for (auto& b : bs) b = oracle::random_complex(rng, 0.8, 2.5);
    // At the natural argument both tails decay like |z|^n.
    const Complex z = a * a * q / (bs[0] * bs[1] * bs[2] * bs[3]);
    if (std::abs(z) > 0.4) continue;
    const QContext ctx(q);
    EvalResult r;
    try {
      r = vwp_psi6(a, bs, z, ctx);
    } catch (const PoleError&) {
      continue;
    }
    const LC e = oracle::vwp_psi6_explicit(lc(a), {lc(bs[0]), lc(bs[1]), lc(bs[2]), lc(bs[3])},
                                           lc(z), lc(q), 50);
    CHECK(rel(r.value, e) < 1e-10);

    const std::array<Complex, 3> cs{bs[0], bs[1], bs[2]};
    const Complex w = a * q / (bs[0] * bs[1] * bs[2]) * Real(0.5);
    const EvalResult u = vwp_phi6(a, cs, w, ctx);
    const LC eu = oracle::vwp_phi6_explicit(lc(a), {lc(bs[0]), lc(bs[1]), lc(bs[2])}, lc(w), lc(q), 300);
    CHECK(rel(u.value, eu) < 1e-11);
  }
}

TEST_CASE("6phi5 summation") {
  // 6phi5(a;b,c,d;q,aq/bcd) = (aq,aq/bc,aq/bd,aq/cd;q)_inf / (aq/b,aq/c,aq/d,aq/bcd;q)_inf
  const Complex a{0.3}, b{1.2}, c{1.5}, d{0.9};
  const QContext ctx(Complex{0.45});
  const EvalResult r = vwp_phi6(a, {b, c, d}, a * ctx.q() / (b * c * d), ctx);
  const Complex aq = a * ctx.q();
  const EvalResult closed = infinite_product_ratio(
      {{"aq", aq}, {"aq/bc", aq / (b * c)}, {"aq/bd", aq / (b * d)}, {"aq/cd", aq / (c * d)}},
      {{"aq/b", aq / b}, {"aq/c", aq / c}, {"aq/d", aq / d}, {"aq/bcd", aq / (b * c * d)}}, ctx);
  CHECK(rel(r.value, closed.value) < 1e-12);
}

TEST_CASE("truncated sum: frozen values") {
  const TruncParams P = sample_P();
  CHECK(truncated_S(P.with_N(0)).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(truncated_S(P.with_N(1)), Complex{7.3065963705117836431}) < 1e-14);
  CHECK(rel(truncated_S(P.with_N(2)), Complex{8.6823242452593736096}) < 1e-14);
  CHECK(rel(truncated_S(P.with_N(3)), Complex{3.9758543181432680183}) < 1e-14);

  const TruncParams P2{Complex{0.45, 0.1}, Complex{1.7, 0.3}, Complex{0.4, -0.2},
                       Complex{2.5, 0.7},  Complex{0.6, 0.1}, Complex{1.3, -0.4}, 4};
  CHECK(rel(truncated_S(P2), Complex{16.587273708674694789, 3.3423985698127467339}) < 1e-13);
}

TEST_CASE("truncated sum against the direct oracle") {
  std::mt19937_64 rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    TruncParams p{oracle::random_complex(rng, 0.2, 0.8), oracle::random_complex(rng, 0.3, 3),
                  oracle::random_complex(rng, 0.3, 3),   oracle::random_complex(rng, 0.3, 3),
                  oracle::random_complex(rng, 0.3, 3),   oracle::random_complex(rng, 0.3, 3), 5};
    Complex s;
    try {
      s = truncated_S(p);
    } catch (const PoleError&) {
      continue;
    }
    const LC o = oracle::S(lc(p.q), lc(p.A), lc(p.B), lc(p.C), lc(p.D), lc(p.E), p.N);
    long double scale = 0;
    for (long n = -p.N; n <= p.N; ++n)
      scale += std::abs(oracle::S_term(lc(p.q), lc(p.A), lc(p.B), lc(p.C), lc(p.D), lc(p.E), n));
    CHECK(std::abs(lc(s) - o) <= 1e-12L * scale);
  }
}

TEST_CASE("truncated sum: poles and domain") {
  TruncParams p = sample_P().with_N(2);
  p.D = p.A / (p.B * p.q);  // (BDq/A;q)_1 = 0 in the denominator
  CHECK_THROWS_AS(truncated_S(p), PoleError);
  TruncParams neg = sample_P();
  neg.N = -1;
  CHECK_THROWS_AS(truncated_S(neg), DomainError);
  TruncParams zero = sample_P();
  zero.C = Complex{0};
  CHECK_THROWS_AS(truncated_S(zero), DomainError);
}

TEST_CASE("T function and companions: frozen values") {
  const TParams t = sample_T();
  const EvalResult T = eval_T(t);
  // The bilateral sum cancels by about three digits here.
  CHECK(rel(T.value, Complex{16.990872326254248567}) < 1e-10);
  CHECK(std::abs(T.value - Complex{16.990872326254248567}) <= T.est_error);
  CHECK(rel(bailey_closed_X(t).value, Complex{16.990872326254248567}) < 1e-12);
  CHECK(rel(F_function(t).value, Complex{-0.0015039428000585983957}) < 1e-12);
  const QContext ctx(t.q);
  CHECK(rel(q_factor(t.X, t.B, t.D, t.E, ctx).value, Complex{-11297.552224454434125}) < 1e-12);

  CHECK(rel(rogers_closed(Complex{0.3}, Complex{0.4}, Complex{0.35}, Complex{0.45}, half).value,
            Complex{1.5693575053058752405}) < 1e-13);
  const BaileyParams b{Complex{0.5}, Complex{0.09}, Complex{0.6},
                       Complex{0.7}, Complex{0.8},  Complex{0.9}};
  CHECK(rel(bailey_closed_a(b).value, Complex{-201.07089456265003481}) < 1e-12);
  CHECK(rel(q_factor(Complex{1.2}, Complex{0.3}, Complex{0.4}, Complex{0.6}, half).value,
            Complex{1667.0792621096864295}) < 1e-12);
}

TEST_CASE("T function against direct bilateral summation") {
  const TParams t = sample_T();
  const LC a = lc(t.vwp_a());
  const LC q = lc(t.q);
  const LC e = oracle::vwp_psi6_explicit(
      a, {lc(t.B * t.C * t.D * t.E * t.X * t.q), lc(t.B * t.X * t.q), lc(t.D * t.X * t.q), lc(t.E * t.X * t.q)},
      lc(t.argument()), q, 50);
  CHECK(rel(eval_T(t).value, e) < 1e-11);
}

TEST_CASE("T function: domain") {
  TParams t = sample_T();
  t.C = Complex{0.1};  // |C/q^3| > 1
  CHECK_FALSE(t.convergent());
  CHECK_THROWS_AS(eval_T(t), NonConvergence);
  // the product side continues past the disc
  CHECK(is_finite(bailey_closed_X(t).value));
}

TEST_CASE("Rogers closed form at C = 0 is one") {
  const EvalResult r = rogers_closed(Complex{0.3}, Complex{0}, Complex{0.35}, Complex{0.45}, half);
  CHECK(std::abs(r.value - Complex{1}) < 1e-15);
}

TEST_CASE("6psi6 series: divergent argument") {
  const BaileyParams b{Complex{0.5}, Complex{2}, Complex{0.6}, Complex{0.7}, Complex{0.8}, Complex{0.9}};
  CHECK_FALSE(b.convergent());
  CHECK_THROWS_AS(vwp_psi6(b.a, {b.b, b.c, b.d, b.e}, b.argument(), QContext(b.q)), NonConvergence);
}
