#pragma once

// Randomized property checks shared by the unit tests and the acceptance run.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "fixtures.hpp"

namespace packcert::testing {

using boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_bin_float_50;

/// Operands spanning many binades, with signs and exact zeros.
inline double random_value() {
  auto& g = rng();
  if (g() % 16 == 0) return 0.0;
  const double v = std::ldexp(uniform(1.0, 2.0), static_cast<int>(g() % 80) - 40);
  return (g() & 1) ? -v : v;
}

inline Interval random_interval() {
  double a = random_value();
  double b = (rng()() % 4 == 0) ? a : a + random_value() * uniform(0, 1);
  if (a > b) std::swap(a, b);
  return {a, b};
}

inline double random_point(const Interval& x) {
  if (x.is_point()) return x.lo();
  return std::clamp(x.lo() + uniform(0, 1) * (x.hi() - x.lo()), x.lo(), x.hi());
}

inline bool encloses(const Interval& x, const cpp_rational& v) {
  return cpp_rational(x.lo()) <= v && v <= cpp_rational(x.hi());
}

inline bool encloses(const Interval& x, const Real& v) { return Real(x.lo()) <= v && v <= Real(x.hi()); }

/// Point-in-operand containment for every operation against exact rational
/// or 50-digit references. Returns the number of violations.
inline int containment_violations(int cases) {
  int violations = 0;
  for (int n = 0; n < cases; ++n) {
    const auto a = random_interval();
    const auto b = random_interval();
    const double x = random_point(a);
    const double y = random_point(b);
    const cpp_rational rx(x), ry(y);
    switch (n % 8) {
      case 0: violations += !encloses(a + b, rx + ry); break;
      case 1: violations += !encloses(a - b, rx - ry); break;
      case 2: violations += !encloses(a * b, rx * ry); break;
      case 3:
        if (!b.contains_zero()) violations += !encloses(a / b, rx / ry);
        break;
      case 4: violations += !encloses(square(a), rx * rx); break;
      case 5: violations += !encloses(sqrt(abs(a)), boost::multiprecision::sqrt(Real(std::abs(x)))); break;
      case 6: {
        double lo = uniform(-1, 1), hi = uniform(-1, 1);
        if (lo > hi) std::swap(lo, hi);
        const Interval u(lo, hi);
        violations += !encloses(acos(u), boost::multiprecision::acos(Real(random_point(u))));
        break;
      }
      case 7: {
        const Interval u(uniform(-1, 0), uniform(0, 1));
        violations += !encloses(asin(u), boost::multiprecision::asin(Real(random_point(u))));
        break;
      }
    }
  }
  return violations;
}

struct SamplingResult {
  int valid = 0;
  int violations = 0;
};

/// Two triangles on either side of an edge X-Y whose support circles keep
/// clear of the opposite circle, as in an FM-triangulation. Counts pairs with
/// d_e(T) + d_e(T') certainly negative.
inline SamplingResult edge_distance_sampling(int samples) {
  struct Placed {
    double x, y, r;
  };
  const auto& radii = constants().radii;
  const double s = radii.s.hi();
  SamplingResult out;
  auto& g = rng();
  for (int attempts = 0; out.valid < samples && attempts < 100 * samples; ++attempts) {
    const auto size = [&] { return kAllSizes[g() % 3]; };
    const CircleSize sx = size(), sy = size(), sz = size(), sw = size();
    const double rx = radii[sx].mid(), ry = radii[sy].mid(), rz = radii[sz].mid(), rw = radii[sw].mid();
    const double L = uniform(rx + ry, rx + ry + 2 * s);
    const auto place = [&](double rc, double side) -> std::optional<Placed> {
      const double a = uniform(rx + rc, rx + rc + 2 * s);
      const double b = uniform(ry + rc, ry + rc + 2 * s);
      if (a + b <= L || a + L <= b || b + L <= a) return std::nullopt;
      const double px = (L * L + a * a - b * b) / (2 * L);
      const double py2 = a * a - px * px;
      if (py2 <= 0) return std::nullopt;
      return Placed{px, side * std::sqrt(py2), rc};
    };
    const auto Z = place(rz, 1), W = place(rw, -1);
    if (!Z || !W || std::hypot(Z->x - W->x, Z->y - W->y) < rz + rw) continue;
    const auto support_of = [&](const Placed& c, CircleSize sc) {
      const auto t = make_triangle(radii, {sx, sy, sc},
                                   {Interval(std::hypot(L - c.x, c.y)), Interval(std::hypot(c.x, c.y)), Interval(L)});
      return try_support_circle(t);
    };
    const auto above = support_of(*Z, sz), below = support_of(*W, sw);
    if (above.status != SupportStatus::Ok || below.status != SupportStatus::Ok) continue;
    // centre from the tangencies to X and Y, on the side given by d
    const auto centre = [&](const SupportResult<double>& sr, double side) {
      const double rho = sr.circle.radius.mid();
      const double cx = (L * L + (rx + rho) * (rx + rho) - (ry + rho) * (ry + rho)) / (2 * L);
      return Placed{cx, side * sr.circle.d[2].mid(), rho};
    };
    const auto ca = centre(above, 1), cb = centre(below, -1);
    const double slack = 1e-9;
    if (std::hypot(ca.x - W->x, ca.y - W->y) < ca.r + rw + slack) continue;
    if (std::hypot(cb.x - Z->x, cb.y - Z->y) < cb.r + rz + slack) continue;
    ++out.valid;
    if ((above.circle.d[2] + below.circle.d[2]).certainly_negative()) ++out.violations;
  }
  return out;
}

/// Support radii of the tight triangles against the Descartes circle theorem
/// in long double interval arithmetic. Returns the classes that disagree.
inline std::vector<std::string> descartes_mismatches() {
  std::vector<std::string> out;
  const auto& wide = constants<long double>().radii;
  for (auto cls : kAllClasses) {
    const auto support = try_support_circle(make_tight(constants().radii, cls.sizes));
    std::array<WideInterval, 3> k;
    for (int i = 0; i < 3; ++i) k[i] = 1.0L / wide[cls.sizes[i]];
    const auto k4 = k[0] + k[1] + k[2] + 2.0L * sqrt(k[0] * k[1] + k[1] * k[2] + k[2] * k[0]);
    const auto oracle = convert<double>(1.0L / k4);
    if (support.status != SupportStatus::Ok || !support.circle.radius.overlaps(oracle)) out.push_back(cls.name());
  }
  return out;
}

/// Central differences of E (long double, h = 1e-6) against dE_dx at random
/// points near each tight triangle. Returns the number of disagreements.
inline int finite_difference_mismatches(int points_per_class, double tolerance) {
  using W = long double;
  const auto& wc = constants<W>();
  const auto excess_at = [&](TriangleClass cls, std::array<W, 3> x) {
    const auto t = make_triangle(wc.radii, cls.sizes, {WideInterval(x[0]), WideInterval(x[1]), WideInterval(x[2])});
    return excess(t, wc.delta).mid();
  };
  const W h = 1e-6L;
  int mismatches = 0;
  for (auto cls : kAllClasses) {
    const auto tight = make_tight(constants().radii, cls.sizes);
    for (int n = 0; n < points_per_class;) {
      std::array<double, 3> x;
      for (int i = 0; i < 3; ++i) {
        const double c = tight.lengths[i].mid();
        x[static_cast<std::size_t>(i)] = uniform(c, c + 0.3);
      }
      if (x[0] >= x[1] + x[2] || x[1] >= x[0] + x[2] || x[2] >= x[0] + x[1]) continue;
      ++n;
      const auto t = make_triangle(constants().radii, cls.sizes, {Interval(x[0]), Interval(x[1]), Interval(x[2])});
      for (int i = 0; i < 3; ++i) {
        std::array<W, 3> up{x[0], x[1], x[2]}, down = up;
        up[static_cast<std::size_t>(i)] += h;
        down[static_cast<std::size_t>(i)] -= h;
        const double fd = static_cast<double>((excess_at(cls, up) - excess_at(cls, down)) / (2 * h));
        const auto d = dE_dx(t, constants().delta, i);
        if (std::abs(fd - d.mid()) > tolerance + d.width()) ++mismatches;
      }
    }
  }
  return mismatches;
}

}  // namespace packcert::testing
