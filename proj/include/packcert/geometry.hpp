#pragma once

// Interval-certified triangle geometry for triangles whose vertices carry
// circles: angles, area, coverage, excess and the support circle.
//
// Vertex i carries a circle of radius radii[i]; lengths[i] is the length of
// the edge opposite vertex i.

#include <array>
#include <optional>
#include <utility>

#include "packcert/error.hpp"
#include "packcert/interval.hpp"
#include "packcert/sizes.hpp"

namespace packcert {

/// Radius enclosures of the three circle sizes.
template <std::floating_point F>
struct Radii {
  BasicInterval<F> one{F(1)};
  BasicInterval<F> r;
  BasicInterval<F> s;

  const BasicInterval<F>& operator[](CircleSize c) const {
    switch (c) {
      case CircleSize::One: return one;
      case CircleSize::R: return r;
      case CircleSize::S: return s;
    }
    return one;
  }
};

template <std::floating_point F>
struct TriangleShape {
  using I = BasicInterval<F>;

  std::array<CircleSize, 3> sizes{};
  std::array<I, 3> radii{};
  std::array<I, 3> lengths{};

  /// Indices of the endpoints of the edge opposite vertex i.
  static constexpr std::pair<int, int> endpoints(int i) {
    return {i == 0 ? 1 : 0, i == 2 ? 1 : 2};
  }

  /// Sum of the radii at the endpoints of edge i: its length in the tight triangle.
  I contact_length(int i) const {
    const auto [j, k] = endpoints(i);
    return radii[j] + radii[k];
  }
};

template <std::floating_point F>
TriangleShape<F> make_triangle(const Radii<F>& radii, std::array<CircleSize, 3> sizes,
                               std::array<BasicInterval<F>, 3> lengths) {
  TriangleShape<F> t;
  t.sizes = sizes;
  for (int i = 0; i < 3; ++i) t.radii[i] = radii[sizes[i]];
  t.lengths = lengths;
  return t;
}

/// The triangle of three mutually tangent circles.
template <std::floating_point F>
TriangleShape<F> make_tight(const Radii<F>& radii, std::array<CircleSize, 3> sizes) {
  TriangleShape<F> t = make_triangle(radii, sizes, {});
  for (int i = 0; i < 3; ++i) t.lengths[i] = t.contact_length(i);
  return t;
}

namespace detail {

// Signs certified over a box: +1, -1, or 0 when undetermined.
template <std::floating_point F>
int certified_sign(const BasicInterval<F>& x) {
  if (x.lo() > 0) return 1;
  if (x.hi() < 0) return -1;
  return 0;
}

// Picks the endpoint of x minimising (want_low) or maximising an expression
// that is monotone in x with direction `sign`; keeps the whole interval when
// the direction is unknown.
template <std::floating_point F>
BasicInterval<F> extreme_argument(const BasicInterval<F>& x, int sign, bool want_low) {
  if (sign == 0) return x;
  const bool take_lo = (sign > 0) == want_low;
  return BasicInterval<F>(take_lo ? x.lo() : x.hi());
}

// g[i] = x_j^2 + x_k^2 - x_i^2 = 2 x_j x_k cos(angle i).
template <std::floating_point F>
std::array<BasicInterval<F>, 3> cosine_numerators(const std::array<BasicInterval<F>, 3>& x) {
  const std::array<BasicInterval<F>, 3> sq{square(x[0]), square(x[1]), square(x[2])};
  return {sq[1] + sq[2] - sq[0], sq[0] + sq[2] - sq[1], sq[0] + sq[1] - sq[2]};
}

template <std::floating_point F>
BasicInterval<F> cosine_formula(const BasicInterval<F>& opposite, const BasicInterval<F>& side1,
                                const BasicInterval<F>& side2) {
  return (square(side1) + square(side2) - square(opposite)) / (F(2) * side1 * side2);
}

}  // namespace detail

/// Cosines of the three angles. The naive law-of-cosines enclosure is
/// intersected with a monotonicity enclosure: cos(angle i) decreases in x_i
/// and varies in x_j with the sign of cos(angle k).
template <std::floating_point F>
std::array<BasicInterval<F>, 3> cosines(const TriangleShape<F>& t) {
  using I = BasicInterval<F>;
  const auto& x = t.lengths;
  const auto g = detail::cosine_numerators(x);
  const std::array<int, 3> sign{detail::certified_sign(g[0]), detail::certified_sign(g[1]),
                                detail::certified_sign(g[2])};
  std::array<I, 3> out;
  for (int i = 0; i < 3; ++i) {
    const auto [j, k] = TriangleShape<F>::endpoints(i);
    // d cos_i / d x_j has the sign of g[k], d cos_i / d x_k the sign of g[j]
    const auto lower = detail::cosine_formula(detail::extreme_argument(x[i], -1, true),
                                              detail::extreme_argument(x[j], sign[k], true),
                                              detail::extreme_argument(x[k], sign[j], true));
    const auto upper = detail::cosine_formula(detail::extreme_argument(x[i], -1, false),
                                              detail::extreme_argument(x[j], sign[k], false),
                                              detail::extreme_argument(x[k], sign[j], false));
    const I monotone(lower.lo(), upper.hi());
    out[i] = intersect(monotone, detail::cosine_formula(x[i], x[j], x[k]));
  }
  return out;
}

template <std::floating_point F>
std::array<BasicInterval<F>, 3> angles(const TriangleShape<F>& t) {
  const auto c = cosines(t);
  std::array<BasicInterval<F>, 3> out;
  try {
    for (int i = 0; i < 3; ++i) out[i] = acos(c[i]);
  } catch (const EmptyDomainIntersection&) {
    throw InfeasibleBox();
  }
  return out;
}

/// 16 * area^2 by Heron's product, monotone in x_i with the sign of cos(angle i).
template <std::floating_point F>
BasicInterval<F> heron_radicand(const TriangleShape<F>& t) {
  using I = BasicInterval<F>;
  const auto& x = t.lengths;
  const auto g = detail::cosine_numerators(x);
  auto product = [](const I& a, const I& b, const I& c) {
    return (a + b + c) * (b + c - a) * (a - b + c) * (a + b - c);
  };
  std::array<I, 3> low_arg, high_arg;
  for (int i = 0; i < 3; ++i) {
    const int sign = detail::certified_sign(g[i]);
    low_arg[i] = detail::extreme_argument(x[i], sign, true);
    high_arg[i] = detail::extreme_argument(x[i], sign, false);
  }
  const I monotone(product(low_arg[0], low_arg[1], low_arg[2]).lo(),
                   product(high_arg[0], high_arg[1], high_arg[2]).hi());
  return intersect(monotone, product(x[0], x[1], x[2]));
}

/// Heron's formula; a radicand straddling zero is clamped to [0, hi].
template <std::floating_point F>
BasicInterval<F> area(const TriangleShape<F>& t) {
  const auto h = heron_radicand(t);
  if (h.hi() < 0) throw InfeasibleBox();
  return sqrt(h) / F(4);
}

template <std::floating_point F>
BasicInterval<F> coverage(const TriangleShape<F>& t, const std::array<BasicInterval<F>, 3>& angle) {
  BasicInterval<F> total;
  for (int i = 0; i < 3; ++i) total += square(t.radii[i]) * angle[i];
  return total / F(2);
}

template <std::floating_point F>
BasicInterval<F> coverage(const TriangleShape<F>& t) {
  return coverage(t, angles(t));
}

/// delta * area - coverage.
template <std::floating_point F>
BasicInterval<F> excess(const TriangleShape<F>& t, const BasicInterval<F>& delta) {
  return delta * area(t) - coverage(t);
}

// Closed forms for tight triangles; sharper than the general box formulas.

/// Angle at the centre of the size-q circle tangent to circles a and b.
template <std::floating_point F>
BasicInterval<F> tight_angle(const BasicInterval<F>& a, const BasicInterval<F>& q, const BasicInterval<F>& b) {
  return acos(F(1) - F(2) * a * b / ((q + a) * (q + b)));
}

/// Heron with semi-perimeter a + b + c.
template <std::floating_point F>
BasicInterval<F> tight_area(const BasicInterval<F>& a, const BasicInterval<F>& b, const BasicInterval<F>& c) {
  return sqrt((a + b + c) * a * b * c);
}

template <std::floating_point F>
BasicInterval<F> tight_excess(const Radii<F>& radii, TriangleClass cls, const BasicInterval<F>& delta) {
  const auto& a = radii[cls.sizes[0]];
  const auto& b = radii[cls.sizes[1]];
  const auto& c = radii[cls.sizes[2]];
  const auto cov = (square(a) * tight_angle(b, a, c) + square(b) * tight_angle(a, b, c) +
                    square(c) * tight_angle(a, c, b)) /
                   F(2);
  return delta * tight_area(a, b, c) - cov;
}

enum class SupportStatus { Ok, NoRealSolution, IndeterminateRoot };

template <std::floating_point F>
struct SupportCircle {
  BasicInterval<F> radius;
  /// Signed distance of the centre to edge i, positive on the side of vertex i.
  std::array<BasicInterval<F>, 3> d;
};

template <std::floating_point F>
struct SupportResult {
  SupportStatus status = SupportStatus::NoRealSolution;
  /// Lower bound on every candidate radius; meaningful unless NoRealSolution.
  F radius_lower_bound = 0;
  SupportCircle<F> circle;  // valid when status == Ok
};

namespace detail {

template <std::floating_point F>
std::optional<BasicInterval<F>> checked_div(const BasicInterval<F>& num, const BasicInterval<F>& den) {
  if (den.contains_zero()) return std::nullopt;
  return num / den;
}

// Root of a*x^2 + b*x + c through the two algebraically equal forms
// (-b + sign*sqrt(disc)) / 2a and 2c / (-b - sign*sqrt(disc)); nullopt when
// neither denominator excludes zero.
template <std::floating_point F>
std::optional<BasicInterval<F>> quadratic_root(const BasicInterval<F>& a, const BasicInterval<F>& b,
                                               const BasicInterval<F>& c, const BasicInterval<F>& root_disc,
                                               F sign) {
  auto first = checked_div(-b + sign * root_disc, F(2) * a);
  auto second = checked_div(F(2) * c, -b - sign * root_disc);
  if (first && second) {
    if (!first->overlaps(*second)) return std::nullopt;
    return intersect(*first, *second);
  }
  return first ? first : second;
}

}  // namespace detail

/// The quadratic qa rho^2 + qb rho + qc whose roots are the radii of the
/// circles tangent to the three vertex circles, with the placement data
/// needed to recover the centre.
///
/// Places v1 = (0,0), v2 = (x3,0), v3 = (u,w) with w > 0, and solves
/// |X - v_i| = rho + a_i. Subtracting equations pairwise gives the centre
/// X = (p, q) as p = P0 + P1 rho and q = (L0 + L1 rho) / (2w); substituting
/// into the first equation multiplied by 4w^2 leaves a quadratic in rho that
/// stays well defined for flat triangles.
template <std::floating_point F>
struct SupportQuadratic {
  BasicInterval<F> qa, qb, qc;
  BasicInterval<F> u, w2, P0, P1, L0, L1;
};

/// nullopt when the lengths certainly admit no triangle.
template <std::floating_point F>
std::optional<SupportQuadratic<F>> support_quadratic(const TriangleShape<F>& t) {
  using I = BasicInterval<F>;
  const auto& x = t.lengths;
  const auto& a = t.radii;
  const I h = heron_radicand(t);
  if (h.hi() < 0) return std::nullopt;
  SupportQuadratic<F> z;
  z.u = x[1] * cosines(t)[0];
  z.w2 = max(h, I(F(0))) / (F(4) * square(x[2]));
  z.P0 = (square(x[2]) + square(a[0]) - square(a[1])) / (F(2) * x[2]);
  z.P1 = (a[0] - a[1]) / x[2];
  z.L0 = square(x[1]) + square(a[0]) - square(a[2]) - F(2) * z.u * z.P0;
  z.L1 = F(2) * (a[0] - a[2]) - F(2) * z.u * z.P1;
  z.qa = square(z.L1) - F(4) * z.w2 * (F(1) - square(z.P1));
  z.qb = F(2) * z.L0 * z.L1 - F(8) * z.w2 * (a[0] - z.P0 * z.P1);
  z.qc = square(z.L0) - F(4) * z.w2 * (square(a[0]) - square(z.P0));
  return z;
}

/// True when the quadratic certainly has no root in [0, bound]: its
/// Bernstein coefficients on that interval share a certain sign. Every
/// tangent circle then has radius above `bound` or is the enclosing one.
template <std::floating_point F>
bool no_radius_up_to(const SupportQuadratic<F>& z, F bound) {
  const auto b0 = z.qc;
  const auto b1 = z.qc + z.qb * bound / F(2);
  const auto b2 = z.qc + z.qb * bound + z.qa * square(BasicInterval<F>(bound));
  const bool positive = b0.certainly_positive() && b1.certainly_positive() && b2.certainly_positive();
  const bool negative = b0.certainly_negative() && b1.certainly_negative() && b2.certainly_negative();
  return positive || negative;
}

/// Circle externally tangent to the three vertex circles.
///
/// The roots of the support quadratic are the inner tangent circle and
/// either the enclosing circle (rho <= -max a_i) or a second external one.
/// Roots that cannot be nonnegative are discarded; of the rest the smaller
/// is selected, and overlapping candidates make the selection
/// IndeterminateRoot. `radius_lower_bound` bounds every remaining
/// candidate, so it bounds the true support radius whichever root it is.
template <std::floating_point F>
SupportResult<F> try_support_circle(const TriangleShape<F>& t,
                                    const std::optional<SupportQuadratic<F>>& quadratic) {
  using I = BasicInterval<F>;
  const auto& x = t.lengths;
  SupportResult<F> result;
  if (!quadratic) return result;
  const auto& [qa, qb, qc, u, w2, P0, P1, L0, L1] = *quadratic;

  const I disc = square(qb) - F(4) * qa * qc;
  if (disc.hi() < 0) return result;
  const I root_disc = sqrt(disc);

  std::array<std::optional<I>, 2> roots{detail::quadratic_root(qa, qb, qc, root_disc, F(1)),
                                        detail::quadratic_root(qa, qb, qc, root_disc, F(-1))};
  std::array<std::optional<I>, 2> candidates;
  int count = 0;
  bool unbounded = false;
  F lower = std::numeric_limits<F>::infinity();
  for (const auto& root : roots) {
    if (!root) {
      unbounded = true;
      lower = -std::numeric_limits<F>::infinity();
      continue;
    }
    if (root->hi() < 0) continue;
    candidates[count++] = root;
    lower = std::min(lower, root->lo());
  }
  if (count == 0 && !unbounded) return result;
  result.radius_lower_bound = std::max<F>(lower, 0);

  result.status = SupportStatus::IndeterminateRoot;
  if (unbounded) return result;
  I rho = *candidates[0];
  if (count == 2) {
    if (candidates[0]->overlaps(*candidates[1])) return result;
    if (candidates[1]->hi() < candidates[0]->lo()) rho = *candidates[1];
  }
  rho = I(std::max<F>(rho.lo(), 0), rho.hi());

  if (!w2.certainly_positive()) return result;
  const I w = sqrt(w2);
  const I px = P0 + P1 * rho;
  const I py = (L0 + L1 * rho) / (F(2) * w);

  result.circle.radius = rho;
  result.circle.d[2] = py;
  result.circle.d[0] = ((u - x[2]) * py - w * (px - x[2])) / x[0];
  result.circle.d[1] = (w * px - u * py) / x[1];
  result.status = SupportStatus::Ok;
  return result;
}

template <std::floating_point F>
SupportResult<F> try_support_circle(const TriangleShape<F>& t) {
  return try_support_circle(t, support_quadratic(t));
}

template <std::floating_point F>
SupportCircle<F> support_circle(const TriangleShape<F>& t) {
  const auto res = try_support_circle(t);
  switch (res.status) {
    case SupportStatus::Ok: return res.circle;
    case SupportStatus::NoRealSolution: throw NoRealSolution();
    case SupportStatus::IndeterminateRoot: throw IndeterminateRoot();
  }
  throw NoRealSolution();
}

/// Triangle (x, y, z) where the z-circle touches the x- and y-circles and the
/// line through their centres.
template <std::floating_point F>
TriangleShape<F> make_stretched(const Radii<F>& radii, CircleSize x, CircleSize y, CircleSize z) {
  const auto& rx = radii[x];
  const auto& ry = radii[y];
  const auto& rz = radii[z];
  // feet of the z-centre on the x-y line: sqrt((x+z)^2 - z^2) = sqrt(x^2 + 2xz)
  const auto base = sqrt(square(rx) + F(2) * rx * rz) + sqrt(square(ry) + F(2) * ry * rz);
  return make_triangle(radii, {x, y, z}, {ry + rz, rx + rz, base});
}

/// Compares the excess of two mirror stretched triangles sharing their x-y
/// edge with the excess of the two tight triangles obtained by flipping that
/// edge. Returns the difference (stretched - flipped).
template <std::floating_point F>
BasicInterval<F> flip_excess_difference(const Radii<F>& radii, const BasicInterval<F>& delta, CircleSize x,
                                        CircleSize y, CircleSize z) {
  const auto stretched = make_stretched(radii, x, y, z);
  const auto before = F(2) * excess(stretched, delta);
  const auto after = excess(make_tight(radii, {x, z, z}), delta) + excess(make_tight(radii, {y, z, z}), delta);
  return before - after;
}

template <std::floating_point F>
bool flip_preserves_excess(const Radii<F>& radii, const BasicInterval<F>& delta, CircleSize x, CircleSize y,
                           CircleSize z, F tolerance) {
  const auto diff = flip_excess_difference(radii, delta, x, y, z);
  return diff.contains_zero() && diff.width() <= tolerance;
}

}  // namespace packcert
