#include "qsix/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qsix {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
// Lower end of the log-uniform range used for series arguments.
constexpr Real kArgumentFloor = Real(0.01);
// Slack for re-checking a modulus that was produced from the same range.
constexpr Real kRangeSlack = Real(1e-12);

Complex polar_draw(DrawStream& s, Range modulus) {
  const Real lo = std::log(modulus.lo);
  const Real hi = std::log(modulus.hi);
  const Real r = std::exp(lo + (hi - lo) * s.uniform());
  const Real phi = 2 * std::numbers::pi_v<Real> * s.uniform();
  return std::polar(r, phi);
}

bool in_range(Real m, Range r) {
  return m >= r.lo * (1 - kRangeSlack) && m <= r.hi * (1 + kRangeSlack);
}

Real lattice_distance(Complex m, Complex q, long window) {
  Real best = std::abs(Real(1) - m);
  Complex up = m;
  Complex down = m;
  for (long k = 1; k <= window; ++k) {
    up *= q;
    down /= q;
    best = std::min({best, std::abs(Real(1) - up), std::abs(Real(1) - down)});
  }
  return best;
}

std::vector<Complex> trunc_monomials(const TruncParams& p) {
  const auto [q, A, B, C, D, E, N] = p;
  (void)q;
  (void)N;
  return {A,         B,         D,         E,             C,
          A / C,     B / A,     D / A,     E / A,         B * D / A,
          B * E / A, D * E / A, B * D * E / A, B * D * E / (A * A), B * C * D * E / (A * A)};
}

std::vector<Complex> t_monomials(const TParams& p, bool skip_x) {
  const auto [q, X, B, C, D, E] = p;
  (void)q;
  std::vector<Complex> m = {B * X,         D * X,     E * X,     B * C * D * E * X,
                            B * C * D * E * X * X, C, B * C * D * X, B * C * E * X,
                            C * D * E * X};
  if (!skip_x) m.push_back(X);
  return m;
}

std::vector<Complex> bailey_monomials(const BaileyParams& p) {
  const auto [q, a, b, c, d, e] = p;
  (void)q;
  return {a, b, c, d, e, a / b, a / c, a / d, a / e, p.argument()};
}

Real min_distance(const std::vector<Complex>& ms, Complex q, long window) {
  Real best = std::numeric_limits<Real>::infinity();
  for (const Complex& m : ms) best = std::min(best, lattice_distance(m, q, window));
  return best;
}

ParamTuple draw_one(SampleKind kind, const SampleConstraints& c, DrawStream& s) {
  const Complex q = polar_draw(s, c.q_modulus);
  auto param = [&] { return polar_draw(s, c.param_modulus); };
  switch (kind) {
    case SampleKind::trunc: {
      TruncParams p{q, param(), param(), param(), param(), param(), 0};
      return p;
    }
    case SampleKind::kn_decay: {
      const Real lo = c.cap("cq3_min", Real(1.5));
      const Complex w = polar_draw(s, Range{lo, 2 * lo});
      TruncParams p{q, param(), param(), Complex{}, param(), param(), 0};
      p.C = w / (q * q * q);
      return p;
    }
    case SampleKind::bailey_a: {
      BaileyParams p{q, Complex{}, param(), param(), param(), param()};
      const Complex z = polar_draw(s, Range{kArgumentFloor, c.cap("bailey_argument", Real(0.9))});
      p.a = std::sqrt(z * p.b * p.c * p.d * p.e / q);
      if (s.uniform() < Real(0.5)) p.a = -p.a;
      return p;
    }
    case SampleKind::t_params: {
      TParams p{q, q, param(), Complex{}, param(), param()};
      if (!c.x_equals_q) p.X = param();
      const Complex w = polar_draw(s, Range{kArgumentFloor, c.cap("t_argument", Real(0.8))});
      p.C = w * q * q * q;
      return p;
    }
    case SampleKind::weierstrass:
      return WeierstrassParams{q, param(), param(), param(), param()};
    case SampleKind::abel: {
      const auto max_len = static_cast<long>(c.cap("abel_max_len", 20));
      AbelInput in;
      in.M = std::min(static_cast<long>(s.uniform() * Real(max_len + 1)), max_len);
      in.N = std::min(static_cast<long>(s.uniform() * Real(max_len + 1)), max_len);
      for (long i = 0; i < in.M + in.N + 2; ++i) in.U.push_back(param());
      for (long i = 0; i < in.M + in.N + 1; ++i) in.V.push_back(param());
      return in;
    }
  }
  throw DomainError("sample: unknown kind");
}

// Relative rounding bound of a bilateral sum, or infinity when it cannot be
// evaluated at all.
Real series_conditioning(const EvalResult& r) {
  const Real m = std::abs(r.value);
  return m > 0 ? r.est_error / m : std::numeric_limits<Real>::infinity();
}

Real worst_t_conditioning(const TParams& p, long shifts) {
  Real worst = 0;
  Complex c = p.C;
  for (long k = 0; k <= shifts; ++k, c *= p.q) {
    try {
      worst = std::max(worst, series_conditioning(eval_T(p.with_C(c))));
    } catch (const Error&) {
      return std::numeric_limits<Real>::infinity();
    }
  }
  return worst;
}

Real bailey_conditioning(const BaileyParams& p) {
  try {
    const QContext ctx(p.q);
    return series_conditioning(vwp_psi6(p.a, {p.b, p.c, p.d, p.e}, p.argument(), ctx));
  } catch (const Error&) {
    return std::numeric_limits<Real>::infinity();
  }
}

bool kind_matches(SampleKind kind, const ParamTuple& t) {
  switch (kind) {
    case SampleKind::trunc:
    case SampleKind::kn_decay:
      return std::holds_alternative<TruncParams>(t);
    case SampleKind::bailey_a:
      return std::holds_alternative<BaileyParams>(t);
    case SampleKind::t_params:
      return std::holds_alternative<TParams>(t);
    case SampleKind::weierstrass:
      return std::holds_alternative<WeierstrassParams>(t);
    case SampleKind::abel:
      return std::holds_alternative<AbelInput>(t);
  }
  return false;
}

}  // namespace

const char* to_string(SampleKind k) {
  switch (k) {
    case SampleKind::trunc: return "trunc";
    case SampleKind::kn_decay: return "kn_decay";
    case SampleKind::bailey_a: return "bailey_a";
    case SampleKind::t_params: return "t_params";
    case SampleKind::weierstrass: return "weierstrass";
    case SampleKind::abel: return "abel";
  }
  return "unknown";
}

void SampleConstraints::validate() const {
  if (!(q_modulus.lo > 0 && q_modulus.lo <= q_modulus.hi && q_modulus.hi < 1)) {
    throw DomainError("SampleConstraints: q_modulus must satisfy 0 < lo <= hi < 1");
  }
  if (!(param_modulus.lo > 0 && param_modulus.lo <= param_modulus.hi)) {
    throw DomainError("SampleConstraints: param_modulus must satisfy 0 < lo <= hi");
  }
  if (!(pole_margin > 0)) throw DomainError("SampleConstraints: pole_margin must be > 0");
  if (lattice_window < 0) throw DomainError("SampleConstraints: lattice_window must be >= 0");
  if (max_rejections < 1) throw DomainError("SampleConstraints: max_rejections must be >= 1");
}

Real SampleConstraints::cap(const std::string& key, Real fallback) const {
  const auto it = convergence_caps.find(key);
  return it == convergence_caps.end() ? fallback : it->second;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t item, std::uint64_t attempt)
    : key_(splitmix64(splitmix64(seed + kGolden * (item + 1)) + kGolden * (attempt + 1))) {}

std::uint64_t DrawStream::next_u64() { return splitmix64(key_ + kGolden * ++slot_); }

Real DrawStream::uniform() { return Real(next_u64() >> 11) * Real(0x1.0p-53); }

Real weierstrass_cancellation(const WeierstrassParams& w) {
  const auto [q, b, c, x, z] = w;
  (void)q;
  const Complex t1 = nabla({c * x, x / c, b * z, z / b});
  const Complex t2 = nabla({b * x, x / b, c * z, z / c});
  const Real lhs = std::abs(t1 - t2);
  if (lhs == 0) return std::numeric_limits<Real>::infinity();
  return std::max(std::abs(t1), std::abs(t2)) / lhs;
}

Real theta_cancellation(const WeierstrassParams& w) {
  const auto [q, b, c, x, z] = w;
  try {
    const QContext ctx(q);
    const Complex t1 = theta_multi({c * x, x / c, b * z, z / b}, ctx).value;
    const Complex t2 = theta_multi({b * x, x / b, c * z, z / c}, ctx).value;
    const Real lhs = std::abs(t1 - t2);
    if (lhs == 0) return std::numeric_limits<Real>::infinity();
    return std::max(std::abs(t1), std::abs(t2)) / lhs;
  } catch (const Error&) {
    return std::numeric_limits<Real>::infinity();
  }
}

Real pole_distance(SampleKind kind, const ParamTuple& t, const SampleConstraints& c) {
  const long w = c.lattice_window;
  switch (kind) {
    case SampleKind::trunc:
    case SampleKind::kn_decay: {
      const auto& p = std::get<TruncParams>(t);
      return min_distance(trunc_monomials(p), p.q, w);
    }
    case SampleKind::bailey_a: {
      const auto& p = std::get<BaileyParams>(t);
      const TParams m = map_remark1(p);
      return std::min(min_distance(bailey_monomials(p), p.q, w),
                      min_distance(t_monomials(m, false), p.q, w));
    }
    case SampleKind::t_params: {
      const auto& p = std::get<TParams>(t);
      return min_distance(t_monomials(p, c.x_equals_q), p.q, w);
    }
    case SampleKind::weierstrass:
    case SampleKind::abel:
      return std::numeric_limits<Real>::infinity();
  }
  return 0;
}

bool satisfies(SampleKind kind, const ParamTuple& t, const SampleConstraints& c) {
  if (!kind_matches(kind, t)) return false;
  auto in_params = [&](std::initializer_list<Complex> xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [&](Complex x) { return in_range(std::abs(x), c.param_modulus); });
  };
  auto q_ok = [&](Complex q) { return in_range(std::abs(q), c.q_modulus); };
  const bool poles_ok = pole_distance(kind, t, c) >= c.pole_margin;

  switch (kind) {
    case SampleKind::trunc: {
      const auto& p = std::get<TruncParams>(t);
      return q_ok(p.q) && in_params({p.A, p.B, p.C, p.D, p.E}) && poles_ok;
    }
    case SampleKind::kn_decay: {
      const auto& p = std::get<TruncParams>(t);
      const Real lo = c.cap("cq3_min", Real(1.5));
      const Real w = std::abs(p.C * p.q * p.q * p.q);
      return q_ok(p.q) && in_params({p.A, p.B, p.D, p.E}) &&
             in_range(w, Range{lo, 2 * lo}) && poles_ok;
    }
    case SampleKind::bailey_a: {
      const auto& p = std::get<BaileyParams>(t);
      return q_ok(p.q) && in_params({p.b, p.c, p.d, p.e}) &&
             std::abs(p.argument()) <= c.cap("bailey_argument", Real(0.9)) * (1 + kRangeSlack) &&
             poles_ok && bailey_conditioning(p) <= c.cap("series_rel_err", Real(1e-10));
    }
    case SampleKind::t_params: {
      const auto& p = std::get<TParams>(t);
      const bool x_ok = c.x_equals_q ? p.X == p.q : in_params({p.X});
      if (!(q_ok(p.q) && x_ok && in_params({p.B, p.D, p.E}) &&
            std::abs(p.argument()) <= c.cap("t_argument", Real(0.8)) * (1 + kRangeSlack) &&
            poles_ok)) {
        return false;
      }
      const auto shifts = static_cast<long>(c.cap("series_shifts", 5));
      return worst_t_conditioning(p, shifts) <= c.cap("series_rel_err", Real(1e-10));
    }
    case SampleKind::weierstrass: {
      const auto& w = std::get<WeierstrassParams>(t);
      return q_ok(w.q) && in_params({w.b, w.c, w.x, w.z}) &&
             weierstrass_cancellation(w) <= c.cap("cancellation_max", Real(10)) &&
             (c.convergence_caps.count("theta_cancellation_max") == 0 ||
              theta_cancellation(w) <= c.cap("theta_cancellation_max", 0));
    }
    case SampleKind::abel: {
      const auto& in = std::get<AbelInput>(t);
      const auto max_len = static_cast<long>(c.cap("abel_max_len", 20));
      if (in.M < 0 || in.N < 0 || in.M > max_len || in.N > max_len) return false;
      if (in.U.size() != static_cast<std::size_t>(in.M + in.N + 2)) return false;
      if (in.V.size() != static_cast<std::size_t>(in.M + in.N + 1)) return false;
      auto ok = [&](const Complex& x) { return in_range(std::abs(x), c.param_modulus); };
      return std::all_of(in.U.begin(), in.U.end(), ok) && std::all_of(in.V.begin(), in.V.end(), ok);
    }
  }
  return false;
}

std::vector<ParamTuple> sample(SampleKind kind, const SampleConstraints& constraints,
                               std::uint64_t seed, std::size_t count) {
  constraints.validate();
  std::vector<ParamTuple> out;
  out.reserve(count);
  for (std::size_t item = 0; item < count; ++item) {
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < constraints.max_rejections; ++attempt) {
      DrawStream s(seed, item, attempt);
      ParamTuple t = draw_one(kind, constraints, s);
      if (satisfies(kind, t, constraints)) {
        out.push_back(std::move(t));
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Unsatisfiable(std::string("sample(") + to_string(kind) + "): item " +
                          std::to_string(item) + " rejected " +
                          std::to_string(constraints.max_rejections) + " times");
    }
  }
  return out;
}

}  // namespace qsix
