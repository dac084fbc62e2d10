#pragma once

// Integer polynomials, certified sign evaluation and root isolation by bisection.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "packcert/error.hpp"
#include "packcert/interval.hpp"

namespace packcert {

/// Polynomial with exact integer coefficients, ascending degree.
class Polynomial {
 public:
  explicit Polynomial(std::vector<std::int64_t> ascending) : coefficients_(std::move(ascending)) {
    if (coefficients_.empty() || coefficients_.back() == 0) {
      throw Error("polynomial must have a nonzero leading coefficient");
    }
  }
  Polynomial(std::initializer_list<std::int64_t> ascending)
      : Polynomial(std::vector<std::int64_t>(ascending)) {}

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<std::int64_t>& coefficients() const { return coefficients_; }

 private:
  std::vector<std::int64_t> coefficients_;
};

/// Horner scheme in interval arithmetic.
template <std::floating_point F>
BasicInterval<F> evaluate(const Polynomial& p, const BasicInterval<F>& x) {
  const auto& c = p.coefficients();
  auto acc = BasicInterval<F>::from_int(c.back());
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) {
    acc = acc * x + BasicInterval<F>::from_int(*it);
  }
  return acc;
}

using BigInt = boost::multiprecision::cpp_int;

/// Sign of p(num/den) computed exactly; den must be positive.
inline int exact_sign(const Polynomial& p, const BigInt& num, const BigInt& den) {
  // den^n * p(num/den) = sum c_i num^i den^(n-i)
  const auto& c = p.coefficients();
  const int n = p.degree();
  BigInt total = 0;
  BigInt num_pow = 1;
  for (int i = 0; i <= n; ++i) {
    BigInt term = BigInt(c[static_cast<std::size_t>(i)]) * num_pow;
    BigInt den_pow = boost::multiprecision::pow(den, static_cast<unsigned>(n - i));
    total += term * den_pow;
    num_pow *= num;
  }
  return total.sign();
}

/// Writes a finite binary floating value as num / 2^k exactly.
template <std::floating_point F>
std::pair<BigInt, BigInt> to_dyadic(F x) {
  int exponent = 0;
  const F mantissa = std::frexp(std::abs(x), &exponent);
  constexpr int digits = std::numeric_limits<F>::digits;
  static_assert(digits <= 64);
  const auto scaled = static_cast<unsigned long long>(std::ldexp(mantissa, digits));  // exact
  exponent -= digits;
  BigInt num = scaled;
  if (std::signbit(x)) num = -num;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return {num, den};
}

/// Certified sign of p at a floating point: interval Horner first, exact
/// dyadic evaluation when the enclosure straddles zero.
template <std::floating_point F>
int certified_sign(const Polynomial& p, F x) {
  const auto v = evaluate(p, BasicInterval<F>(x));
  if (v.certainly_positive()) return 1;
  if (v.certainly_negative()) return -1;
  const auto [num, den] = to_dyadic(x);
  return exact_sign(p, num, den);
}

/// Bisection on a bracket with certified opposite endpoint signs. Stops when
/// the width is at most `width_goal` or the bracket is one ulp wide.
template <std::floating_point F>
BasicInterval<F> isolate_root(const Polynomial& p, const BasicInterval<F>& bracket, F width_goal) {
  F lo = bracket.lo();
  F hi = bracket.hi();
  const int sign_lo = certified_sign(p, lo);
  const int sign_hi = certified_sign(p, hi);
  if (sign_lo == 0) return BasicInterval<F>(lo);
  if (sign_hi == 0) return BasicInterval<F>(hi);
  if (sign_lo == sign_hi) throw NoSignChange();
  while (BasicInterval<F>(lo, hi).width() > width_goal) {
    const F mid = lo + (hi - lo) / 2;
    if (!(lo < mid && mid < hi)) break;
    const int s = certified_sign(p, mid);
    if (s == 0) return BasicInterval<F>(mid);
    (s == sign_lo ? lo : hi) = mid;
  }
  return {lo, hi};
}

namespace polynomials {

/// Defines the middle radius r ~ 0.834.
inline const Polynomial& medium_radius() {
  static const Polynomial p{1, -14, -73, -88, 135, 162, -27, -36, 4};
  return p;
}

/// Defines the small radius s ~ 0.651.
inline const Polynomial& small_radius() {
  static const Polynomial p{1, -96, 296, 176, -2410, -464, 4008, 1344, 89};
  return p;
}

/// Has delta/pi ~ 0.2894 as a root.
inline const Polynomial& density_over_pi() {
  static const Polynomial p{21526627817,  -80069696280, 41344255112,  -63721188256, -41913015856,
                            22192248320,  -38395680512, 11526176768, 129777664};
  return p;
}

}  // namespace polynomials

}  // namespace packcert
