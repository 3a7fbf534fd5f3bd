#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qsix/qcore.hpp"

using namespace qsix;
using oracle::lc;
using oracle::rel;

namespace {
const QContext half(Complex{0.5});
}

TEST_CASE("nabla products") {
  CHECK(nabla({Complex{1}}) == Complex{0});
  CHECK(nabla({Complex{0}}) == Complex{1});
  CHECK(nabla({Complex{2}, Complex{3}}) == Complex{2});
  CHECK_THROWS_AS(nabla(std::span<const Complex>{}), DomainError);
}

TEST_CASE("base must lie in the open unit disc") {
  CHECK_THROWS_AS(QContext(Complex{1}), DomainError);
  CHECK_THROWS_AS(QContext(Complex{0}), DomainError);
  CHECK_THROWS_AS(QContext(Complex{0.6, 0.9}), DomainError);
  CHECK_NOTHROW(QContext(Complex{0.6, 0.7}));
  TruncationPolicy bad;
  bad.tail_tol = 0;
  CHECK_THROWS_AS(QContext(Complex{0.5}, bad), DomainError);
}

TEST_CASE("finite q-Pochhammer branches") {
  CHECK(qpochhammer(Complex{0.7, 0.2}, half, 0) == Complex{1});
  CHECK(qpochhammer(Complex{0.25}, half, -1).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(qpochhammer(Complex{0.5}, half, 3).real() == doctest::Approx(0.328125).epsilon(1e-15));
  CHECK_THROWS_AS(qpochhammer(Complex{0.5}, half, -1), PoleError);
}

TEST_CASE("multi-parameter Pochhammer") {
  const Complex a{0.3, 0.1};
  CHECK(qpochhammer_multi({a}, half, 4) == qpochhammer(a, half, 4));
  CHECK(qpochhammer_multi({a, Complex{2}}, half, 0) == Complex{1});
  CHECK(qpochhammer_multi({Complex{0.5}, Complex{0.25}}, half, 2).real() ==
        doctest::Approx(0.24609375).epsilon(1e-15));
  CHECK_THROWS_AS(qpochhammer_multi(std::span<const Complex>{}, half, 2), DomainError);
}

TEST_CASE("infinite product") {
  const EvalResult zero = qpochhammer_inf(Complex{0}, half);
  CHECK(zero.value == Complex{1});
  CHECK(zero.terminated);

  const EvalResult r = qpochhammer_inf(Complex{0.5}, half);
  CHECK(r.value.real() == doctest::Approx(0.28878809508660242128).epsilon(1e-15));
  CHECK(r.est_error < 1e-12);
  CHECK(std::abs(r.value - Complex{0.28878809508660242128}) <= r.est_error + 1e-16);

  const EvalResult one = qpochhammer_inf(Complex{1}, half);
  CHECK(one.value == Complex{0});
  CHECK(one.terminated);

  TruncationPolicy tiny;
  tiny.max_terms = 5;
  CHECK_THROWS_AS(qpochhammer_inf(Complex{0.5}, QContext(Complex{0.5}, tiny)), BudgetExceeded);
}

TEST_CASE("theta function") {
  CHECK(theta(Complex{1}, half).value == Complex{0});
  CHECK(theta(Complex{0.5}, half).value == Complex{0});
  CHECK_THROWS_AS(theta(Complex{0}, half), DomainError);
  const Complex a = theta(Complex{0.3}, half).value;
  const Complex b = theta(Complex{0.5 / 0.3}, half).value;
  CHECK(rel(a, b) < 1e-12);
  CHECK(a.real() == doctest::Approx(-0.021089471261573810008).epsilon(1e-14));
  CHECK(rel(theta_multi({Complex{0.3}, Complex{0.7}}, half).value,
            oracle::theta(0.3L, 0.5L) * oracle::theta(0.7L, 0.5L)) < 1e-14);
}

TEST_CASE("infinite product ratio") {
  const EvalResult r = infinite_product_ratio({{"a", Complex{0.3}}}, {{"b", Complex{0.2}}}, half);
  CHECK(rel(r.value, oracle::pinf(0.3L, 0.5L) / oracle::pinf(0.2L, 0.5L)) < 1e-14);
  CHECK_THROWS_AS(infinite_product_ratio({{"a", Complex{0.3}}}, {{"b", Complex{2}}}, half),
                  PoleError);
  const EvalResult z = infinite_product_ratio({{"a", Complex{4}}}, {{"b", Complex{0.2}}}, half);
  CHECK(z.value == Complex{0});
  CHECK(z.terminated);
}

TEST_CASE("pole errors name the factor") {
  try {
    infinite_product_ratio({}, {{"Aq/B", Complex{1}}}, half);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.factor() == "(Aq/B;q)_inf");
  }
}

TEST_CASE("FactorProduct cancels matching zeros") {
  FactorProduct fp(Complex{0.5});
  fp.times_nabla(Complex{1}, "x").over_nabla(Complex{1}, "x").times(Complex{3});
  CHECK(fp.zero_order() == 0);
  CHECK(fp.value() == Complex{3});

  FactorProduct zero(Complex{0.5});
  zero.times_nabla(Complex{1}, "x");
  CHECK(zero.value() == Complex{0});

  FactorProduct pole(Complex{0.5});
  pole.over_poch(Complex{0.25}, 4, "b");
  CHECK(pole.zero_order() == 0);
  pole.over_poch(Complex{4}, 3, "c");  // third factor is 1 - 4 * 0.25
  CHECK(pole.zero_order() == -1);
  CHECK_THROWS_AS(pole.value(), PoleError);

  // 2^{2000} and 2^{-2000} are out of double range; their product is not.
  FactorProduct big(Complex{0.5});
  big.times_power(Complex{2}, 2000).times_power(Complex{0.5}, 1999);
  CHECK(big.value().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("property: shift law across all branches") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex a = oracle::random_complex(rng, 0.1, 3.0);
    const QContext ctx(q);
    for (long n = -10; n <= 10; ++n) {
      const Complex lhs = qpochhammer(a, ctx, n + 1);
      const Complex rhs = qpochhammer(a, ctx, n) * (Real(1) - a * ipow(q, n));
      CHECK(rel(lhs, rhs) < 1e-13);
    }
  }
}

TEST_CASE("property: inversion") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex a = oracle::random_complex(rng, 0.1, 3.0);
    const QContext ctx(q);
    for (long m = 1; m <= 10; ++m) {
      const Complex v = qpochhammer(a, ctx, -m) * qpochhammer(a * ipow(q, -m), ctx, m);
      CHECK(std::abs(v - Complex{1}) < 1e-12);
    }
  }
}

TEST_CASE("property: negative-index ratio") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex x = oracle::random_complex(rng, 0.1, 3.0);
    const Complex y = oracle::random_complex(rng, 0.1, 3.0);
    const QContext ctx(q);
    for (long m = 1; m <= 8; ++m) {
      const Complex lhs = qpochhammer(x, ctx, -m) / qpochhammer(y, ctx, -m);
      const Complex rhs =
          qpochhammer(q / y, ctx, m) / qpochhammer(q / x, ctx, m) * ipow(y / x, m);
      CHECK(rel(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("property: theta symmetry on the annulus") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex x = oracle::random_complex(rng, std::abs(q), 1.0);
    const QContext ctx(q);
    CHECK(rel(theta(x, ctx).value, theta(q / x, ctx).value) < 1e-12);
  }
}

TEST_CASE("property: infinite product splits at any n") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex a = oracle::random_complex(rng, 0.1, 3.0);
    const QContext ctx(q);
    const EvalResult whole = qpochhammer_inf(a, ctx);
    for (long n = 1; n <= 20; ++n) {
      const Complex head = qpochhammer(a, ctx, n);
      const EvalResult tail = qpochhammer_inf(a * ipow(q, n), ctx);
      const Real bound = whole.est_error + std::abs(head) * tail.est_error +
                         64 * std::numeric_limits<Real>::epsilon() * std::abs(whole.value);
      CHECK(std::abs(whole.value - head * tail.value) <= bound);
    }
  }
}

TEST_CASE("against the direct long double oracle") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex q = oracle::random_complex(rng, 0.2, 0.8);
    const Complex a = oracle::random_complex(rng, 0.1, 3.0);
    const QContext ctx(q);
    CHECK(rel(qpochhammer(a, ctx, 7), oracle::poch(lc(a), lc(q), 7)) < 1e-13);
    CHECK(rel(qpochhammer(a, ctx, -7), oracle::poch(lc(a), lc(q), -7)) < 1e-13);
    CHECK(rel(qpochhammer_inf(a, ctx).value, oracle::pinf(lc(a), lc(q))) < 1e-13);
  }
}
