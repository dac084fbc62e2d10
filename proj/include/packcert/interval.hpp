#pragma once

// Closed intervals with outward-rounded floating endpoints.
//
// Arithmetic runs in the default round-to-nearest mode. For +, -, *, / and
// sqrt the exact rounding error is recovered with error-free transformations
// (TwoSum, FMA residuals), so an endpoint is moved one ulp outward only when
// the rounded result actually lies on the wrong side of the exact value.
// acos and asin come from libm, whose results are not correctly rounded;
// their endpoints are moved two ulps outward unconditionally.
//
// Compile without -ffast-math and with -ffp-contract=off: the transforms
// below rely on every floating operation being rounded exactly once.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <concepts>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "packcert/error.hpp"

namespace packcert {

namespace rounding {

template <std::floating_point F>
inline F next_down(F x) {
  return std::nextafter(x, -std::numeric_limits<F>::infinity());
}

template <std::floating_point F>
inline F next_up(F x) {
  return std::nextafter(x, std::numeric_limits<F>::infinity());
}

// Returns the rounded value and the sign of (exact - rounded).
template <std::floating_point F>
struct Rounded {
  F value;
  int error_sign;
};

inline int sign_of(auto x) { return (x > 0) - (x < 0); }

template <std::floating_point F>
inline Rounded<F> add(F a, F b) {
  const F s = a + b;
  if (!std::isfinite(s)) return {s, 0};
  const F bv = s - a;
  const F av = s - bv;
  const F err = (a - av) + (b - bv);
  return {s, sign_of(err)};
}

template <std::floating_point F>
inline Rounded<F> mul(F a, F b) {
  const F p = a * b;
  if (!std::isfinite(p)) return {p, 0};
  return {p, sign_of(std::fma(a, b, -p))};
}

template <std::floating_point F>
inline Rounded<F> div(F a, F b) {
  const F q = a / b;
  if (!std::isfinite(q) || q == 0) {
    // Underflow to zero: the exact quotient has the sign of a/b.
    if (q == 0 && a != 0) return {q, sign_of(a) * sign_of(b)};
    return {q, 0};
  }
  const F r = std::fma(-q, b, a);  // exact: a - q*b
  return {q, sign_of(r) * sign_of(b)};
}

template <std::floating_point F>
inline Rounded<F> sqrt(F a) {
  const F s = std::sqrt(a);
  if (!std::isfinite(s) || s == 0) return {s, 0};
  return {s, sign_of(std::fma(-s, s, a))};
}

template <std::floating_point F>
inline F down(Rounded<F> r) {
  if (r.value == std::numeric_limits<F>::infinity()) return std::numeric_limits<F>::max();
  return r.error_sign < 0 ? next_down(r.value) : r.value;
}

template <std::floating_point F>
inline F up(Rounded<F> r) {
  if (r.value == -std::numeric_limits<F>::infinity()) return std::numeric_limits<F>::lowest();
  return r.error_sign > 0 ? next_up(r.value) : r.value;
}

}  // namespace rounding

enum class Comparison { CertainlyGE, CertainlyLT, Indeterminate };

template <std::floating_point F>
class BasicInterval {
 public:
  using value_type = F;

  constexpr BasicInterval() = default;
  constexpr explicit BasicInterval(F point) : lo_(point), hi_(point) {}
  constexpr BasicInterval(F lo, F hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw Error("interval with lo > hi or NaN endpoint");
  }

  /// Integers of magnitude below 2^53 (2^64 for long double) convert exactly.
  static BasicInterval from_int(long long n) {
    const F v = static_cast<F>(n);
    if (static_cast<long long>(v) == n) return BasicInterval(v);
    return {rounding::next_down(v), rounding::next_up(v)};
  }

  /// Enclosure of p/q for integers p and q != 0.
  static BasicInterval ratio(long long p, long long q) { return from_int(p) / from_int(q); }

  static BasicInterval entire() {
    return {-std::numeric_limits<F>::infinity(), std::numeric_limits<F>::infinity()};
  }

  constexpr F lo() const { return lo_; }
  constexpr F hi() const { return hi_; }

  F width() const { return rounding::up(rounding::add(hi_, -lo_)); }
  F mid() const { return lo_ + (hi_ - lo_) / 2; }
  F mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }

  bool is_point() const { return lo_ == hi_; }
  bool contains(F x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }
  bool subset_of(const BasicInterval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool overlaps(const BasicInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  bool certainly_positive() const { return lo_ > 0; }
  bool certainly_negative() const { return hi_ < 0; }

  BasicInterval operator-() const { return {-hi_ + F(0), -lo_ + F(0)}; }  // no -0

  BasicInterval& operator+=(const BasicInterval& b) { return *this = *this + b; }
  BasicInterval& operator-=(const BasicInterval& b) { return *this = *this - b; }
  BasicInterval& operator*=(const BasicInterval& b) { return *this = *this * b; }
  BasicInterval& operator/=(const BasicInterval& b) { return *this = *this / b; }

  friend BasicInterval operator+(const BasicInterval& a, const BasicInterval& b) {
    return {rounding::down(rounding::add(a.lo_, b.lo_)), rounding::up(rounding::add(a.hi_, b.hi_))};
  }

  friend BasicInterval operator-(const BasicInterval& a, const BasicInterval& b) {
    return {rounding::down(rounding::add(a.lo_, -b.hi_)), rounding::up(rounding::add(a.hi_, -b.lo_))};
  }

  friend BasicInterval operator*(const BasicInterval& a, const BasicInterval& b) {
    if (a.lo_ >= 0 && b.lo_ >= 0) {
      return {rounding::down(rounding::mul(a.lo_, b.lo_)), rounding::up(rounding::mul(a.hi_, b.hi_))};
    }
    const std::array<rounding::Rounded<F>, 4> p{rounding::mul(a.lo_, b.lo_), rounding::mul(a.lo_, b.hi_),
                                                rounding::mul(a.hi_, b.lo_), rounding::mul(a.hi_, b.hi_)};
    F lo = std::numeric_limits<F>::infinity();
    F hi = -std::numeric_limits<F>::infinity();
    for (const auto& r : p) {
      // 0 * inf only arises from unbounded operands; treat as 0.
      if (std::isnan(r.value)) {
        lo = std::min<F>(lo, 0);
        hi = std::max<F>(hi, 0);
        continue;
      }
      lo = std::min(lo, rounding::down(r));
      hi = std::max(hi, rounding::up(r));
    }
    return {lo, hi};
  }

  friend BasicInterval operator/(const BasicInterval& a, const BasicInterval& b) {
    if (b.contains_zero()) throw DivisionByIntervalContainingZero();
    const std::array<rounding::Rounded<F>, 4> q{rounding::div(a.lo_, b.lo_), rounding::div(a.lo_, b.hi_),
                                                rounding::div(a.hi_, b.lo_), rounding::div(a.hi_, b.hi_)};
    F lo = std::numeric_limits<F>::infinity();
    F hi = -std::numeric_limits<F>::infinity();
    for (const auto& r : q) {
      lo = std::min(lo, rounding::down(r));
      hi = std::max(hi, rounding::up(r));
    }
    return {lo, hi};
  }

  friend BasicInterval operator+(const BasicInterval& a, F b) { return a + BasicInterval(b); }
  friend BasicInterval operator+(F a, const BasicInterval& b) { return BasicInterval(a) + b; }
  friend BasicInterval operator-(const BasicInterval& a, F b) { return a - BasicInterval(b); }
  friend BasicInterval operator-(F a, const BasicInterval& b) { return BasicInterval(a) - b; }
  friend BasicInterval operator*(const BasicInterval& a, F b) { return a * BasicInterval(b); }
  friend BasicInterval operator*(F a, const BasicInterval& b) { return BasicInterval(a) * b; }
  friend BasicInterval operator/(const BasicInterval& a, F b) { return a / BasicInterval(b); }
  friend BasicInterval operator/(F a, const BasicInterval& b) { return BasicInterval(a) / b; }

  friend bool operator==(const BasicInterval&, const BasicInterval&) = default;

  friend std::ostream& operator<<(std::ostream& os, const BasicInterval& x) {
    return os << '[' << x.lo_ << ", " << x.hi_ << ']';
  }

 private:
  F lo_ = 0;
  F hi_ = 0;
};

using Interval = BasicInterval<double>;
using WideInterval = BasicInterval<long double>;

template <std::floating_point F>
BasicInterval<F> hull(const BasicInterval<F>& a, const BasicInterval<F>& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// Intersection; throws when the operands are disjoint.
template <std::floating_point F>
BasicInterval<F> intersect(const BasicInterval<F>& a, const BasicInterval<F>& b) {
  if (!a.overlaps(b)) throw Error("intersection of disjoint intervals");
  return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

template <std::floating_point F>
BasicInterval<F> abs(const BasicInterval<F>& a) {
  if (a.lo() >= 0) return a;
  if (a.hi() <= 0) return -a;
  return {F(0), std::max(-a.lo(), a.hi())};
}

template <std::floating_point F>
BasicInterval<F> square(const BasicInterval<F>& a) {
  const BasicInterval<F> m = abs(a);
  return {rounding::down(rounding::mul(m.lo(), m.lo())), rounding::up(rounding::mul(m.hi(), m.hi()))};
}

template <std::floating_point F>
BasicInterval<F> min(const BasicInterval<F>& a, const BasicInterval<F>& b) {
  return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

template <std::floating_point F>
BasicInterval<F> max(const BasicInterval<F>& a, const BasicInterval<F>& b) {
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// sqrt over a ∩ [0, ∞).
template <std::floating_point F>
BasicInterval<F> sqrt(const BasicInterval<F>& a) {
  if (a.hi() < 0) throw EmptyDomainIntersection("sqrt");
  const F lo = a.lo() > 0 ? rounding::down(rounding::sqrt(a.lo())) : F(0);
  return {lo, rounding::up(rounding::sqrt(a.hi()))};
}

namespace detail {

template <std::floating_point F>
F widen_down(F x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = rounding::next_down(x);
  return x;
}

template <std::floating_point F>
F widen_up(F x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = rounding::next_up(x);
  return x;
}

inline constexpr int kLibmUlps = 2;

}  // namespace detail

template <std::floating_point F>
BasicInterval<F> pi();

/// acos over a ∩ [-1, 1].
template <std::floating_point F>
BasicInterval<F> acos(const BasicInterval<F>& a) {
  if (a.hi() < -1 || a.lo() > 1) throw EmptyDomainIntersection("acos");
  const F lo_arg = std::max<F>(a.lo(), -1);
  const F hi_arg = std::min<F>(a.hi(), 1);
  const F lo = hi_arg == 1 ? F(0) : std::max<F>(0, detail::widen_down(std::acos(hi_arg), detail::kLibmUlps));
  const F hi = lo_arg == -1 ? pi<F>().hi()
                            : std::min(pi<F>().hi(), detail::widen_up(std::acos(lo_arg), detail::kLibmUlps));
  return {lo, hi};
}

/// asin over a ∩ [-1, 1].
template <std::floating_point F>
BasicInterval<F> asin(const BasicInterval<F>& a) {
  if (a.hi() < -1 || a.lo() > 1) throw EmptyDomainIntersection("asin");
  const F half_pi = pi<F>().hi() / 2;  // exact halving
  const F lo_arg = std::max<F>(a.lo(), -1);
  const F hi_arg = std::min<F>(a.hi(), 1);
  const F lo = std::max(-half_pi, detail::widen_down(std::asin(lo_arg), detail::kLibmUlps));
  const F hi = std::min(half_pi, detail::widen_up(std::asin(hi_arg), detail::kLibmUlps));
  if (lo_arg == 0 && hi_arg == 0) return BasicInterval<F>(F(0));
  return {lo, hi};
}

/// Certified enclosure of pi: the nearest representable value and its neighbours.
template <std::floating_point F>
BasicInterval<F> pi() {
  static const BasicInterval<F> value = [] {
    const F nearest = static_cast<F>(3.14159265358979323846264338327950288419716939937510L);
    return BasicInterval<F>(rounding::next_down(nearest), rounding::next_up(nearest));
  }();
  return value;
}

template <std::floating_point F>
BasicInterval<F> two_pi() {
  return BasicInterval<F>(F(2)) * pi<F>();
}

inline Comparison compare(const auto& a, const auto& b) {
  if (a.lo() >= b.hi()) return Comparison::CertainlyGE;
  if (a.hi() < b.lo()) return Comparison::CertainlyLT;
  return Comparison::Indeterminate;
}

inline const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::CertainlyGE: return "CertainlyGE";
    case Comparison::CertainlyLT: return "CertainlyLT";
    case Comparison::Indeterminate: return "Indeterminate";
  }
  return "?";
}

/// Converts an interval of one precision into another without losing containment.
template <std::floating_point To, std::floating_point From>
BasicInterval<To> convert(const BasicInterval<From>& x) {
  To lo = static_cast<To>(x.lo());
  To hi = static_cast<To>(x.hi());
  if (static_cast<From>(lo) > x.lo()) lo = rounding::next_down(lo);
  if (static_cast<From>(hi) < x.hi()) hi = rounding::next_up(hi);
  return {lo, hi};
}

// Hexadecimal floating literals ("0x1.8p+1", "-0x0p+0", "inf").

template <std::floating_point F>
std::string to_hex(F x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const bool negative = std::signbit(x);
  auto res = std::to_chars(buf, buf + sizeof buf, negative ? -x : x, std::chars_format::hex);
  std::string out = negative ? "-0x" : "0x";
  out.append(buf, res.ptr);
  return out;
}

template <std::floating_point F>
F from_hex(std::string_view text) {
  if (text == "inf") return std::numeric_limits<F>::infinity();
  if (text == "-inf") return -std::numeric_limits<F>::infinity();
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    throw Error("malformed hex float: " + std::string(text));
  }
  text.remove_prefix(2);
  F value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::hex);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("malformed hex float: " + std::string(text));
  }
  return negative ? -value : value;
}

}  // namespace packcert
