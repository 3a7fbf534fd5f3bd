// Foundational q-arithmetic: nabla products, q-shifted factorials for every
// integer index, infinite q-products with tail bounds, and the modified
// Jacobi theta function theta(x;q) = (x, q/x; q)_inf.
//
// Conventions:
//   nabla(x)            = 1 - x
//   (a;q)_n, n > 0      = (1-a)(1-aq)...(1-aq^{n-1})
//   (a;q)_0             = 1
//   (a;q)_n, n < 0      = 1 / ((1-a/q)(1-a/q^2)...(1-aq^n))
//
// A factor 1 - x counts as zero when |1 - x| <= pole_eps(x), with
// pole_eps(x) = 1e-12 (1 + |x|).
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsix/complex.hpp"
#include "qsix/errors.hpp"

namespace qsix {

// Controls every infinite sum and product.
struct TruncationPolicy {
  Real tail_tol = Real(1e-15);
  std::size_t max_terms = 10000;
  std::size_t stagnation_window = 3;

  // Throws DomainError unless tail_tol > 0, max_terms >= 1 and
  // stagnation_window >= 1.
  void validate() const;
};

// The base q together with the policy used for infinite expansions.
// Construction enforces 0 < |q| < 1.
class QContext {
 public:
  explicit QContext(Complex q, TruncationPolicy policy = {});

  Complex q() const noexcept { return q_; }
  const TruncationPolicy& policy() const noexcept { return policy_; }

 private:
  Complex q_;
  TruncationPolicy policy_;
};

struct EvalResult {
  Complex value{};
  Real est_error = 0;  // truncation bound under a geometric tail, plus rounding
  std::size_t terms_used = 0;
  bool terminated = false;  // the expansion stopped on an exact zero factor
};

// A labelled parameter, used so PoleError can name the offending factor.
struct NamedArg {
  std::string_view name;
  Complex value;
};

Real pole_eps(Complex x);

// True when the factor 1 - x vanishes within pole_eps(x).
bool factor_vanishes(Complex x);

// Throws DomainError unless 0 < |q| < 1.
void require_base(Complex q);

Complex nabla(Complex x);
Complex nabla(std::span<const Complex> xs);
Complex nabla(std::initializer_list<Complex> xs);

Complex qpochhammer(Complex a, const QContext& ctx, long n);
Complex qpochhammer_multi(std::span<const Complex> as, const QContext& ctx, long n);
Complex qpochhammer_multi(std::initializer_list<Complex> as, const QContext& ctx, long n);

EvalResult qpochhammer_inf(Complex a, const QContext& ctx);
EvalResult qpochhammer_inf_multi(std::span<const Complex> as, const QContext& ctx);

EvalResult theta(Complex x, const QContext& ctx);
EvalResult theta_multi(std::span<const Complex> xs, const QContext& ctx);
EvalResult theta_multi(std::initializer_list<Complex> xs, const QContext& ctx);

// prod (numer;q)_inf / prod (denom;q)_inf. A vanishing denominator product
// raises PoleError naming it; otherwise a vanishing numerator product gives an
// exact zero with terminated = true.
EvalResult infinite_product_ratio(const std::vector<NamedArg>& numer,
                                  const std::vector<NamedArg>& denom,
                                  const QContext& ctx);

// Exact finite product of factors (1 - x), q-shifted factorials and scalars.
//
// The running value is kept as a scaled mantissa/exponent pair so that
// products of many large or small factors (negative-index Pochhammers at
// large |n|) do not overflow before they cancel. Vanishing factors are not
// multiplied in; they raise (numerator) or lower (denominator) a zero order
// instead. value() returns 0 for positive order, throws PoleError naming the
// first unmatched denominator zero for negative order, and otherwise the
// product of the non-vanishing factors, so identical zero factors appearing
// on both sides cancel.
class FactorProduct {
 public:
  explicit FactorProduct(Complex q);

  FactorProduct& times(Complex v);
  FactorProduct& divide(Complex v, std::string_view name);
  FactorProduct& times_power(Complex base, long n);

  FactorProduct& times_nabla(Complex x, std::string_view name);
  FactorProduct& over_nabla(Complex x, std::string_view name);
  FactorProduct& times_nabla(std::span<const NamedArg> xs);
  FactorProduct& over_nabla(std::span<const NamedArg> xs);

  FactorProduct& times_poch(Complex a, long n, std::string_view name);
  FactorProduct& over_poch(Complex a, long n, std::string_view name);
  FactorProduct& times_poch(std::span<const NamedArg> as, long n);
  FactorProduct& over_poch(std::span<const NamedArg> as, long n);

  int zero_order() const noexcept { return order_; }
  Complex value() const;

 private:
  void multiply(Complex f);
  void numerator_factor(Complex x);
  void denominator_factor(Complex x, std::string_view name, long index);

  Complex q_;
  Complex mantissa_{1};
  long exponent_ = 0;
  int order_ = 0;
  std::string first_pole_;
};

}  // namespace qsix
