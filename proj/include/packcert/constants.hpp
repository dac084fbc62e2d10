#pragma once

// The algebraic radii r and s and the density delta of the target packing.

#include <array>
#include <cmath>
#include <sstream>

#include "packcert/geometry.hpp"
#include "packcert/roots.hpp"
#include "packcert/verdict.hpp"

namespace packcert {

template <std::floating_point F>
struct Constants {
  Radii<F> radii;
  BasicInterval<F> delta;
};

/// Width goal for the radii; well below 1e-10 at either precision.
template <std::floating_point F>
constexpr F kRadiusWidthGoal = std::numeric_limits<F>::epsilon() * 64;

/// Density of the periodic cell: four tight {1,r,s}, one {1,1,s} and one {1,r,r}.
template <std::floating_point F>
BasicInterval<F> compute_density(const BasicInterval<F>& r, const BasicInterval<F>& s) {
  using I = BasicInterval<F>;
  const I one(F(1));
  struct Cell {
    std::array<I, 3> sizes;
    int count;
  };
  const std::array<Cell, 3> cell{Cell{{one, r, s}, 4}, Cell{{one, one, s}, 1}, Cell{{one, r, r}, 1}};
  I cov, area;
  for (const auto& [z, count] : cell) {
    const I c = (square(z[0]) * tight_angle(z[1], z[0], z[2]) + square(z[1]) * tight_angle(z[0], z[1], z[2]) +
                 square(z[2]) * tight_angle(z[0], z[2], z[1])) /
                F(2);
    cov += F(count) * c;
    area += F(count) * tight_area(z[0], z[1], z[2]);
  }
  return cov / area;
}

template <std::floating_point F>
Constants<F> compute_constants() {
  Constants<F> c;
  c.radii.r = isolate_root(polynomials::medium_radius(), BasicInterval<F>(F(0.8L), F(0.9L)), kRadiusWidthGoal<F>);
  c.radii.s = isolate_root(polynomials::small_radius(), BasicInterval<F>(F(0.6L), F(0.7L)), kRadiusWidthGoal<F>);
  c.delta = compute_density(c.radii.r, c.radii.s);
  return c;
}

/// Enclosure of delta / pi must be at most this wide for the sign-change certificate.
inline constexpr double kDensityRootWidth = 1e-9;

/// Checks that delta / pi is a root of the degree-8 density polynomial:
/// the polynomial's enclosure on delta / pi contains 0 and its signs at the
/// ends of a slightly inflated, narrow enclosure are certified opposite.
template <std::floating_point F>
Verdict verify_density_polynomial(const BasicInterval<F>& delta) {
  const auto& p = polynomials::density_over_pi();
  const auto x = delta / pi<F>();
  std::ostringstream why;
  if (!evaluate(p, x).contains_zero()) {
    why << "polynomial does not vanish on delta/pi = " << x;
    return Verdict::fail(why.str());
  }
  if (!(x.width() <= F(kDensityRootWidth))) {
    why << "delta/pi enclosure " << x << " is too wide to isolate a root";
    return Verdict::fail(why.str());
  }
  const F pad = std::max(x.width(), F(16) * std::numeric_limits<F>::epsilon());
  const F lo = x.lo() - pad;
  const F hi = x.hi() + pad;
  const int sign_lo = certified_sign(p, lo);
  const int sign_hi = certified_sign(p, hi);
  if (sign_lo * sign_hi >= 0) {
    why << "no certified sign change on [" << to_hex(lo) << ", " << to_hex(hi) << "]";
    return Verdict::fail(why.str());
  }
  why << "sign change on [" << to_hex(lo) << ", " << to_hex(hi) << "]";
  return Verdict::ok(why.str());
}

}  // namespace packcert
