#include "qsix/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsix {

namespace {

constexpr Real kRelativeZero = Real(1e-12);

Real rounding_eps() { return std::numeric_limits<Real>::epsilon(); }

}  // namespace

void TruncationPolicy::validate() const {
  if (!(tail_tol > 0)) throw DomainError("TruncationPolicy: tail_tol must be > 0");
  if (max_terms < 1) throw DomainError("TruncationPolicy: max_terms must be >= 1");
  if (stagnation_window < 1) throw DomainError("TruncationPolicy: stagnation_window must be >= 1");
}

void require_base(Complex q) {
  const Real m = std::abs(q);
  if (!(m > 0 && m < 1) || !is_finite(q)) {
    throw DomainError("base q must satisfy 0 < |q| < 1");
  }
}

QContext::QContext(Complex q, TruncationPolicy policy) : q_(q), policy_(policy) {
  require_base(q_);
  policy_.validate();
}

Real pole_eps(Complex x) { return kRelativeZero * (1 + std::abs(x)); }

bool factor_vanishes(Complex x) { return std::abs(Real(1) - x) <= pole_eps(x); }

Complex nabla(Complex x) { return Real(1) - x; }

Complex nabla(std::span<const Complex> xs) {
  if (xs.empty()) throw DomainError("nabla: empty argument list");
  Complex p{1};
  for (const Complex& x : xs) p *= Real(1) - x;
  return p;
}

Complex nabla(std::initializer_list<Complex> xs) {
  return nabla(std::span<const Complex>(xs.begin(), xs.size()));
}

Complex qpochhammer(Complex a, const QContext& ctx, long n) {
  const Complex q = ctx.q();
  Complex p{1};
  if (n >= 0) {
    Complex x = a;
    for (long k = 0; k < n; ++k) {
      p *= Real(1) - x;
      x *= q;
    }
    return p;
  }
  Complex x = a / q;
  for (long k = 1; k <= -n; ++k) {
    if (factor_vanishes(x)) {
      throw PoleError("(a;q)_" + std::to_string(n),
                      "factor 1 - a q^-" + std::to_string(k) + " vanishes");
    }
    p *= Real(1) - x;
    x /= q;
  }
  return Real(1) / p;
}

Complex qpochhammer_multi(std::span<const Complex> as, const QContext& ctx, long n) {
  if (as.empty()) throw DomainError("qpochhammer_multi: empty parameter list");
  Complex p{1};
  for (const Complex& a : as) p *= qpochhammer(a, ctx, n);
  return p;
}

Complex qpochhammer_multi(std::initializer_list<Complex> as, const QContext& ctx, long n) {
  return qpochhammer_multi(std::span<const Complex>(as.begin(), as.size()), ctx, n);
}

EvalResult qpochhammer_inf(Complex a, const QContext& ctx) {
  const TruncationPolicy& policy = ctx.policy();
  const Complex q = ctx.q();
  if (a == Complex{0}) return {Complex{1}, 0, 0, true};

  Complex prod{1};
  Complex x = a;
  std::size_t below = 0;
  std::size_t k = 0;
  while (below < policy.stagnation_window) {
    if (k >= policy.max_terms) {
      throw BudgetExceeded("qpochhammer_inf: max_terms reached before the tail criterion");
    }
    if (factor_vanishes(x)) return {Complex{0}, 0, k + 1, true};
    prod *= Real(1) - x;
    ++k;
    below = std::abs(x) < policy.tail_tol ? below + 1 : 0;
    x *= q;
  }
  // Remaining factors are x, xq, xq^2, ... with |x| < tail_tol; bound the
  // tail of the logarithm by a geometric series.
  const Real t = std::abs(x);
  const Real log_tail = t / ((1 - std::abs(q)) * (1 - t));
  const Real mag = std::abs(prod);
  EvalResult r;
  r.value = prod;
  r.est_error = mag * std::expm1(log_tail) + 4 * Real(k) * rounding_eps() * mag;
  r.terms_used = k;
  return r;
}

EvalResult qpochhammer_inf_multi(std::span<const Complex> as, const QContext& ctx) {
  EvalResult total{Complex{1}, 0, 0, false};
  for (const Complex& a : as) {
    const EvalResult r = qpochhammer_inf(a, ctx);
    total.est_error = std::abs(total.value) * r.est_error + std::abs(r.value) * total.est_error;
    total.value *= r.value;
    total.terms_used += r.terms_used;
    total.terminated = total.terminated || (r.terminated && r.value == Complex{0});
  }
  return total;
}

EvalResult theta(Complex x, const QContext& ctx) {
  if (x == Complex{0}) throw DomainError("theta: argument must be nonzero");
  const Complex pair[] = {x, ctx.q() / x};
  return qpochhammer_inf_multi(pair, ctx);
}

EvalResult theta_multi(std::span<const Complex> xs, const QContext& ctx) {
  EvalResult total{Complex{1}, 0, 0, false};
  for (const Complex& x : xs) {
    const EvalResult r = theta(x, ctx);
    total.est_error = std::abs(total.value) * r.est_error + std::abs(r.value) * total.est_error;
    total.value *= r.value;
    total.terms_used += r.terms_used;
    total.terminated = total.terminated || r.terminated;
  }
  return total;
}

EvalResult theta_multi(std::initializer_list<Complex> xs, const QContext& ctx) {
  return theta_multi(std::span<const Complex>(xs.begin(), xs.size()), ctx);
}

EvalResult infinite_product_ratio(const std::vector<NamedArg>& numer,
                                  const std::vector<NamedArg>& denom, const QContext& ctx) {
  Real rel = 0;
  std::size_t terms = 0;
  Complex den{1};
  for (const NamedArg& d : denom) {
    const EvalResult r = qpochhammer_inf(d.value, ctx);
    if (r.value == Complex{0}) {
      throw PoleError("(" + std::string(d.name) + ";q)_inf", "denominator product vanishes");
    }
    den *= r.value;
    rel += r.est_error / std::abs(r.value);
    terms += r.terms_used;
  }
  Complex num{1};
  for (const NamedArg& n : numer) {
    const EvalResult r = qpochhammer_inf(n.value, ctx);
    terms += r.terms_used;
    if (r.value == Complex{0}) return {Complex{0}, 0, terms, true};
    num *= r.value;
    rel += r.est_error / std::abs(r.value);
  }
  EvalResult out;
  out.value = num / den;
  out.est_error = std::abs(out.value) * rel;
  out.terms_used = terms;
  return out;
}

// FactorProduct

FactorProduct::FactorProduct(Complex q) : q_(q) {}

void FactorProduct::multiply(Complex f) {
  mantissa_ *= f;
  const Real m = std::max(std::abs(mantissa_.real()), std::abs(mantissa_.imag()));
  if (!std::isfinite(m)) throw DomainError("FactorProduct: non-finite factor");
  if (m == 0) return;
  int e = 0;
  std::frexp(m, &e);
  mantissa_ = Complex(std::ldexp(mantissa_.real(), -e), std::ldexp(mantissa_.imag(), -e));
  exponent_ += e;
}

void FactorProduct::numerator_factor(Complex x) {
  if (factor_vanishes(x)) {
    ++order_;
    return;
  }
  multiply(Real(1) - x);
}

void FactorProduct::denominator_factor(Complex x, std::string_view name, long index) {
  if (factor_vanishes(x)) {
    if (order_ <= 0 && first_pole_.empty()) {
      first_pole_ = std::string(name);
      if (index != 0) first_pole_ += "[" + std::to_string(index) + "]";
    }
    --order_;
    return;
  }
  multiply(Real(1) / (Real(1) - x));
}

FactorProduct& FactorProduct::times(Complex v) {
  if (v == Complex{0}) {
    ++order_;
  } else {
    multiply(v);
  }
  return *this;
}

FactorProduct& FactorProduct::divide(Complex v, std::string_view name) {
  if (v == Complex{0}) {
    if (order_ <= 0 && first_pole_.empty()) first_pole_ = std::string(name);
    --order_;
  } else {
    multiply(Real(1) / v);
  }
  return *this;
}

FactorProduct& FactorProduct::times_power(Complex base, long n) {
  if (n == 0) return *this;
  if (base == Complex{0}) {
    if (n > 0) {
      order_ += static_cast<int>(n);
    } else {
      if (order_ <= 0 && first_pole_.empty()) first_pole_ = "zero base to negative power";
      order_ += static_cast<int>(n);
    }
    return *this;
  }
  const Complex f = n > 0 ? base : Real(1) / base;
  for (long k = 0; k < std::abs(n); ++k) multiply(f);
  return *this;
}

FactorProduct& FactorProduct::times_nabla(Complex x, std::string_view) {
  numerator_factor(x);
  return *this;
}

FactorProduct& FactorProduct::over_nabla(Complex x, std::string_view name) {
  denominator_factor(x, name, 0);
  return *this;
}

FactorProduct& FactorProduct::times_nabla(std::span<const NamedArg> xs) {
  for (const NamedArg& x : xs) times_nabla(x.value, x.name);
  return *this;
}

FactorProduct& FactorProduct::over_nabla(std::span<const NamedArg> xs) {
  for (const NamedArg& x : xs) over_nabla(x.value, x.name);
  return *this;
}

FactorProduct& FactorProduct::times_poch(Complex a, long n, std::string_view name) {
  if (n >= 0) {
    Complex x = a;
    for (long k = 0; k < n; ++k, x *= q_) numerator_factor(x);
  } else {
    Complex x = a / q_;
    for (long k = 1; k <= -n; ++k, x /= q_) denominator_factor(x, name, -k);
  }
  return *this;
}

FactorProduct& FactorProduct::over_poch(Complex a, long n, std::string_view name) {
  if (n >= 0) {
    Complex x = a;
    for (long k = 0; k < n; ++k, x *= q_) denominator_factor(x, name, k);
  } else {
    Complex x = a / q_;
    for (long k = 1; k <= -n; ++k, x /= q_) numerator_factor(x);
  }
  return *this;
}

FactorProduct& FactorProduct::times_poch(std::span<const NamedArg> as, long n) {
  for (const NamedArg& a : as) times_poch(a.value, n, a.name);
  return *this;
}

FactorProduct& FactorProduct::over_poch(std::span<const NamedArg> as, long n) {
  for (const NamedArg& a : as) over_poch(a.value, n, a.name);
  return *this;
}

Complex FactorProduct::value() const {
  if (order_ > 0) return Complex{0};
  if (order_ < 0) throw PoleError(first_pole_.empty() ? "unnamed factor" : first_pole_);
  const long e = std::clamp<long>(exponent_, std::numeric_limits<int>::min(),
                                  std::numeric_limits<int>::max());
  const Complex v(std::ldexp(mantissa_.real(), static_cast<int>(e)),
                  std::ldexp(mantissa_.imag(), static_cast<int>(e)));
  if (!is_finite(v)) throw DomainError("FactorProduct: value overflows the working precision");
  return v;
}

}  // namespace qsix
