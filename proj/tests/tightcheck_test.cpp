#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace packcert {
namespace {

using testing::constants;
using testing::point;
using testing::table;

constexpr auto k1 = CircleSize::One;

const Radii<double>& radii() { return constants().radii; }

using Wide = long double;

// Point evaluations in long double for the difference quotients.
Wide excess_at(TriangleClass cls, std::array<Wide, 3> x) {
  const auto& c = constants<Wide>();
  const auto t =
      make_triangle(c.radii, cls.sizes, {WideInterval(x[0]), WideInterval(x[1]), WideInterval(x[2])});
  return excess(t, c.delta).mid();
}

std::array<Wide, 3> angles_at(TriangleClass cls, std::array<Wide, 3> x) {
  const auto& c = constants<Wide>();
  const auto t =
      make_triangle(c.radii, cls.sizes, {WideInterval(x[0]), WideInterval(x[1]), WideInterval(x[2])});
  const auto a = angles(t);
  return {a[0].mid(), a[1].mid(), a[2].mid()};
}

Wide vertex_potentials_at(TriangleClass cls, std::array<Wide, 3> x) {
  const auto& c = constants<Wide>();
  const auto t =
      make_triangle(c.radii, cls.sizes, {WideInterval(x[0]), WideInterval(x[1]), WideInterval(x[2])});
  return vertex_potentials(table<Wide>(), t, angles(t)).mid();
}

TEST(TightCheck, FiniteDifferenceAtSpecPoint) {
  const TriangleClass cls(k1, k1, k1);
  const std::array<Wide, 3> x{2.01L, 2.02L, 2.03L};
  const auto t = make_triangle(radii(), cls.sizes, {point(2.01), point(2.02), point(2.03)});
  const Wide h = 1e-6L;
  for (int i = 0; i < 3; ++i) {
    auto up = x, down = x;
    up[static_cast<std::size_t>(i)] += h;
    down[static_cast<std::size_t>(i)] -= h;
    const double fd = static_cast<double>((excess_at(cls, up) - excess_at(cls, down)) / (2 * h));
    const auto d = dE_dx(t, constants().delta, i);
    EXPECT_NEAR(fd, d.mid(), 1e-9 + d.width()) << i;
  }
}

TEST(TightCheckProperty, DerivativesMatchFiniteDifferences) {
  const Wide h = 1e-6L;
  const double tol = 1e-8;
  for (auto cls : kAllClasses) {
    const auto tight = make_tight(radii(), cls.sizes);
    for (int n = 0; n < 20; ++n) {
      std::array<double, 3> x;
      for (int i = 0; i < 3; ++i) {
        const double c = tight.lengths[i].mid();
        x[static_cast<std::size_t>(i)] = testing::uniform(c, c + 0.3);
      }
      if (x[0] >= x[1] + x[2] || x[1] >= x[0] + x[2] || x[2] >= x[0] + x[1]) continue;
      const auto t = make_triangle(radii(), cls.sizes, {point(x[0]), point(x[1]), point(x[2])});
      const auto d_angle = angle_derivatives(t);
      const std::array<Wide, 3> wx{x[0], x[1], x[2]};
      for (int i = 0; i < 3; ++i) {
        auto up = wx, down = wx;
        up[static_cast<std::size_t>(i)] += h;
        down[static_cast<std::size_t>(i)] -= h;
        const double fd_e = static_cast<double>((excess_at(cls, up) - excess_at(cls, down)) / (2 * h));
        const auto de = dE_dx(t, constants().delta, i);
        EXPECT_NEAR(fd_e, de.mid(), tol + de.width()) << cls.name() << " edge " << i;
        const auto a_up = angles_at(cls, up), a_down = angles_at(cls, down);
        for (int v = 0; v < 3; ++v) {
          const double fd_a = static_cast<double>((a_up[static_cast<std::size_t>(v)] - a_down[static_cast<std::size_t>(v)]) / (2 * h));
          EXPECT_NEAR(fd_a, d_angle[v][i].mid(), tol + d_angle[v][i].width()) << cls.name();
        }
        const double fd_u =
            static_cast<double>((vertex_potentials_at(cls, up) - vertex_potentials_at(cls, down)) / (2 * h));
        EXPECT_LE(std::abs(fd_u), dU_dx(table(), t, i).hi() + tol) << cls.name();
      }
    }
  }
}

TEST(TightCheck, SymmetricBoxHasEqualDerivatives) {
  const auto t = eps_box(radii(), TriangleClass(k1, k1, k1), 0.056);
  const auto d0 = dE_dx(t, constants().delta, 0);
  EXPECT_EQ(d0, dE_dx(t, constants().delta, 1));
  EXPECT_EQ(d0, dE_dx(t, constants().delta, 2));
}

TEST(TightCheck, OppositeAngleGrowsWithEdge) {
  for (auto cls : kAllClasses) {
    const auto d = angle_derivatives(eps_box(radii(), cls, 0.056));
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(d[i][i].certainly_positive()) << cls.name();
  }
}

TEST(TightCheck, PaperEpsilonsPass) {
  EXPECT_TRUE(verify_eps(table(), constants(), 0.056).verdict.pass);
  EXPECT_TRUE(verify_eps(table(), constants(), 0.0561906177650666).verdict.pass);
  const auto check = verify_eps(table(), constants(), 0.056);
  ASSERT_EQ(check.classes.size(), 10u);
  for (const auto& c : check.classes)
    for (double m : c.margin) EXPECT_GT(m, 0) << c.cls.name();
}

TEST(TightCheck, LargeEpsilonFails) { EXPECT_FALSE(eps_passes(table(), constants(), 0.5)); }

TEST(TightCheck, MaxEps) {
  const auto e = max_eps(table(), constants());
  EXPECT_GE(e.lo(), 0.0561);
  EXPECT_TRUE(eps_passes(table(), constants(), e.lo()));
  EXPECT_FALSE(eps_passes(table(), constants(), e.hi()));
  EXPECT_LE(e.width(), 1e-11);
}

TEST(TightCheck, PassIsMonotone) {
  const auto e = max_eps(table(), constants());
  for (double eps = 0.001; eps < e.lo(); eps += 0.01) EXPECT_TRUE(eps_passes(table(), constants(), eps)) << eps;
}

TEST(TightCheck, LargerSlopeShrinksMaxEps) {
  PotentialParams p;
  p.m[0] *= 2;
  const auto doubled = solve_v_table(constants(), p).table;
  EXPECT_LE(max_eps(doubled, constants()).lo(), max_eps(table(), constants()).lo());
}

TEST(TightCheck, ThresholdBelowTightLengthConflicts) {
  PotentialParams p;
  p.l[SizePair(k1, k1).index()] = 2.0;
  const auto t = solve_v_table(constants(), p).table;
  EXPECT_THROW(verify_eps(t, constants(), 0.056), ThresholdConflict);
  EXPECT_FALSE(eps_passes(t, constants(), 0.056));
}

}  // namespace
}  // namespace packcert
