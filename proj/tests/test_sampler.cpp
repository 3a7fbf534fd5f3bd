#include <set>

#include "doctest.h"
#include "qsix/sampler.hpp"
#include "qsix/sweep.hpp"

using namespace qsix;

namespace {

const SampleKind kAllKinds[] = {SampleKind::trunc,    SampleKind::kn_decay,    SampleKind::bailey_a,
                                SampleKind::t_params, SampleKind::weierstrass, SampleKind::abel};

bool same(const ParamTuple& a, const ParamTuple& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, TruncParams>) {
          return x.q == y.q && x.A == y.A && x.B == y.B && x.C == y.C && x.D == y.D && x.E == y.E;
        } else if constexpr (std::is_same_v<T, BaileyParams>) {
          return x.q == y.q && x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d && x.e == y.e;
        } else if constexpr (std::is_same_v<T, TParams>) {
          return x.q == y.q && x.X == y.X && x.B == y.B && x.C == y.C && x.D == y.D && x.E == y.E;
        } else if constexpr (std::is_same_v<T, WeierstrassParams>) {
          return x.q == y.q && x.b == y.b && x.c == y.c && x.x == y.x && x.z == y.z;
        } else {
          return x.M == y.M && x.N == y.N && x.U == y.U && x.V == y.V;
        }
      },
      a);
}

}  // namespace

TEST_CASE("SplitMix64 reference output") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  DrawStream s(1, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const Real u = s.uniform();
    CHECK(u >= 0);
    CHECK(u < 1);
  }
}

TEST_CASE("draw streams are independent of evaluation order") {
  DrawStream a(7, 3, 0), b(7, 3, 0), c(7, 4, 0), d(7, 3, 1);
  const auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  CHECK(x != d.next_u64());
}

TEST_CASE("count zero yields nothing") {
  for (SampleKind k : kAllKinds) CHECK(sample(k, {}, 1, 0).empty());
}

TEST_CASE("sampling is deterministic and prefix-stable") {
  for (SampleKind k : kAllKinds) {
    const auto a = sample(k, {}, 42, 12);
    const auto b = sample(k, {}, 42, 12);
    const auto c = sample(k, {}, 42, 5);
    const auto d = sample(k, {}, 43, 12);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same(a[i], b[i]));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(same(a[i], c[i]));
    CHECK_FALSE(same(a[0], d[0]));
  }
}

TEST_CASE("every draw passes the independent re-check") {
  for (const IdentityInfo& info : identities()) {
    const SampleConstraints c = default_constraints(info.name);
    for (const ParamTuple& t : sample(info.kind, c, 5, 25)) {
      CHECK(satisfies(info.kind, t, c));
      if (info.kind != SampleKind::abel && info.kind != SampleKind::weierstrass) {
        CHECK(pole_distance(info.kind, t, c) >= c.pole_margin);
      }
    }
  }
}

TEST_CASE("bailey draws sit inside the argument cap") {
  const SampleConstraints c = default_constraints("bailey-a");
  for (const ParamTuple& t : sample(SampleKind::bailey_a, c, 9, 50)) {
    const auto& p = std::get<BaileyParams>(t);
    CHECK(std::abs(p.argument()) <= 0.9 * (1 + 1e-12));
    CHECK(std::abs(p.q) >= 0.2);
    CHECK(std::abs(p.q) <= 0.8);
  }
}

TEST_CASE("t draws respect the argument cap and X = q pinning") {
  SampleConstraints c = default_constraints("rogers");
  REQUIRE(c.x_equals_q);
  for (const ParamTuple& t : sample(SampleKind::t_params, c, 2, 20)) {
    const auto& p = std::get<TParams>(t);
    CHECK(p.X == p.q);
    CHECK(std::abs(p.argument()) <= 0.9 * (1 + 1e-12));
  }
}

TEST_CASE("decay draws have |Cq^3| in [cq3_min, 2 cq3_min]") {
  const SampleConstraints c = default_constraints("kn-decay");
  for (const ParamTuple& t : sample(SampleKind::kn_decay, c, 3, 20)) {
    const auto& p = std::get<TruncParams>(t);
    const Real w = std::abs(p.C * p.q * p.q * p.q);
    CHECK(w >= 1.5 * (1 - 1e-12));
    CHECK(w <= 3.0 * (1 + 1e-12));
    CHECK(std::abs(p.C * p.q * p.q) >= 1.1);
  }
}

TEST_CASE("abel draws respect their length bound") {
  std::set<long> lengths;
  for (const ParamTuple& t : sample(SampleKind::abel, default_constraints("abel"), 4, 100)) {
    const auto& in = std::get<AbelInput>(t);
    CHECK(in.M <= 20);
    CHECK(in.N <= 20);
    CHECK_NOTHROW(in.validate());
    lengths.insert(in.M);
  }
  CHECK(lengths.size() > 10);
}

TEST_CASE("a tuple of the wrong kind is rejected") {
  const auto t = sample(SampleKind::trunc, {}, 1, 1);
  CHECK_FALSE(satisfies(SampleKind::bailey_a, t[0], {}));
}

TEST_CASE("impossible constraints raise Unsatisfiable") {
  SampleConstraints c;
  c.pole_margin = 5;  // no factor 1 - m q^k can stay this far from zero for small m
  c.max_rejections = 20;
  CHECK_THROWS_AS(sample(SampleKind::trunc, c, 1, 3), Unsatisfiable);
  CHECK_NOTHROW(sample(SampleKind::trunc, c, 1, 0));
}

TEST_CASE("invalid constraints raise DomainError") {
  SampleConstraints c;
  c.q_modulus = {0.5, 1.2};
  CHECK_THROWS_AS(sample(SampleKind::trunc, c, 1, 1), DomainError);
  c = {};
  c.pole_margin = 0;
  CHECK_THROWS_AS(sample(SampleKind::trunc, c, 1, 1), DomainError);
  c = {};
  c.param_modulus = {2, 1};
  CHECK_THROWS_AS(sample(SampleKind::trunc, c, 1, 1), DomainError);
}

TEST_CASE("cancellation measures") {
  // b = c: both terms coincide and the left side is zero
  const WeierstrassParams w{Complex{0.5}, Complex{2}, Complex{3}, Complex{0.5}, Complex{0.7}};
  CHECK(weierstrass_cancellation(w) >= 1);
  CHECK(theta_cancellation(w) >= 1);
  const WeierstrassParams degenerate{Complex{0.5}, Complex{2}, Complex{2}, Complex{0.5}, Complex{0.7}};
  CHECK(weierstrass_cancellation(degenerate) > 1e10);
}
