#pragma once

// Local inequality on eps-tight triangles through derivative bounds.
//
// On the box [x+y, x+y+eps] x [x+z, x+z+eps] x [y+z, y+z+eps] the corner is
// the tight triangle, where E = U. Moving from the corner every coordinate
// increases, so by the mean value theorem
//   E(T) - E(corner) >= sum_i min dE/dx_i * dx_i
//   U(T) - U(corner) <= sum_i max |dU/dx_i| * dx_i
// with dx_i >= 0. If min dE/dx_i >= max |dU/dx_i| for every i then E >= U on
// the whole box. U is only Lipschitz (it contains |angle - tight angle|), and
// sum_v m_v |d angle_v / dx_i| bounds its variation.
//
// With A the area, angle_i opposite edge x_i and {i, j, k} = {1, 2, 3}:
//   dA/dx_i            = x1 x2 x3 cos(angle_i) / (4A)
//   d angle_i / dx_i   = x_i / (2A)
//   d angle_i / dx_j   = -x_i cos(angle_k) / (2A)

#include <array>
#include <sstream>
#include <string>

#include "packcert/potentials.hpp"
#include "packcert/verdict.hpp"

namespace packcert {

/// d angle_v / d x_i for all v, i.
template <std::floating_point F>
std::array<std::array<BasicInterval<F>, 3>, 3> angle_derivatives(const TriangleShape<F>& t) {
  const auto& x = t.lengths;
  const auto c = cosines(t);
  const auto two_a = F(2) * area(t);
  if (two_a.contains_zero()) throw InfeasibleBox("degenerate triangle has no angle derivatives");
  std::array<std::array<BasicInterval<F>, 3>, 3> out;
  for (int v = 0; v < 3; ++v) {
    for (int i = 0; i < 3; ++i) {
      if (i == v) {
        out[v][i] = x[v] / two_a;
      } else {
        const int k = 3 - v - i;
        out[v][i] = -(x[v] * c[k]) / two_a;
      }
    }
  }
  return out;
}

template <std::floating_point F>
BasicInterval<F> dE_dx(const TriangleShape<F>& t, const BasicInterval<F>& delta, int i) {
  const auto& x = t.lengths;
  const auto c = cosines(t);
  const auto a = area(t);
  if (a.contains_zero()) throw InfeasibleBox("degenerate triangle has no area derivative");
  const auto d_area = x[0] * x[1] * x[2] * c[i] / (F(4) * a);
  const auto d_angle = angle_derivatives(t);
  BasicInterval<F> d_cov;
  for (int v = 0; v < 3; ++v) d_cov += square(t.radii[v]) * d_angle[v][i];
  return delta * d_area - d_cov / F(2);
}

/// Upper bound on the rate of change of U along x_i (edges below threshold).
template <std::floating_point F>
BasicInterval<F> dU_dx(const PotentialTable<F>& table, const TriangleShape<F>& t, int i) {
  const auto d_angle = angle_derivatives(t);
  BasicInterval<F> bound;
  for (int v = 0; v < 3; ++v) bound += table.m[index_of(t.sizes[v])] * abs(d_angle[v][i]);
  return bound;
}

/// The box of lengths within eps of tangency for one class.
template <std::floating_point F>
TriangleShape<F> eps_box(const Radii<F>& radii, TriangleClass cls, F eps) {
  auto t = make_tight(radii, cls.sizes);
  for (int i = 0; i < 3; ++i) {
    const auto& c = t.lengths[i];
    t.lengths[i] = BasicInterval<F>(c.lo(), (c + eps).hi());
  }
  return t;
}

template <std::floating_point F>
struct ClassMargin {
  TriangleClass cls;
  /// min dE/dx_i - max dU/dx_i lower bounds, one per edge.
  std::array<F, 3> margin{};
  bool pass = false;
};

template <std::floating_point F>
struct EpsCheck {
  F eps = 0;
  Verdict verdict;
  std::vector<ClassMargin<F>> classes;
};

/// Throws ThresholdConflict unless every edge of the eps-box stays below its threshold.
template <std::floating_point F>
void check_eps_thresholds(const PotentialTable<F>& table, const Radii<F>& radii, F eps) {
  if (!(eps > 0)) throw ThresholdConflict("eps must be positive");
  for (auto cls : kAllClasses) {
    const auto t = eps_box(radii, cls, eps);
    for (int e = 0; e < 3; ++e) {
      if (edge_regime(table, t, e) != EdgeRegime::Short) {
        const auto [j, k] = TriangleShape<F>::endpoints(e);
        throw ThresholdConflict("edge " + SizePair(t.sizes[j], t.sizes[k]).name() + " of the " + cls.name() +
                                " eps-box reaches its threshold");
      }
    }
  }
}

template <std::floating_point F>
EpsCheck<F> verify_eps(const PotentialTable<F>& table, const Constants<F>& c, F eps) {
  check_eps_thresholds(table, c.radii, eps);
  EpsCheck<F> out;
  out.eps = eps;
  std::ostringstream why;
  bool pass = true;
  for (auto cls : kAllClasses) {
    const auto t = eps_box(c.radii, cls, eps);
    ClassMargin<F> m{cls, {}, true};
    for (int i = 0; i < 3; ++i) {
      const auto de = dE_dx(t, c.delta, i);
      const auto du = dU_dx(table, t, i);
      m.margin[i] = (de - du).lo();
      if (compare(de, du) != Comparison::CertainlyGE) {
        m.pass = false;
        why << cls.name() << " edge " << i << ": margin " << m.margin[i] << "; ";
      }
    }
    pass = pass && m.pass;
    out.classes.push_back(m);
  }
  out.verdict = pass ? Verdict::ok("derivative domination on all 10 classes") : Verdict::fail(why.str());
  return out;
}

template <std::floating_point F>
bool eps_passes(const PotentialTable<F>& table, const Constants<F>& c, F eps) {
  try {
    return verify_eps(table, c, eps).verdict.pass;
  } catch (const ThresholdConflict&) {
    return false;
  } catch (const InfeasibleBox&) {
    return false;
  }
}

/// Bisection for the largest passing eps; lo passes, hi does not.
template <std::floating_point F>
BasicInterval<F> max_eps(const PotentialTable<F>& table, const Constants<F>& c, F upper = F(0.5),
                         F tolerance = F(1e-12)) {
  F lo = 0;
  F hi = upper;
  if (eps_passes(table, c, hi)) return BasicInterval<F>(hi);
  while (hi - lo > tolerance) {
    const F mid = lo + (hi - lo) / 2;
    (eps_passes(table, c, mid) ? lo : hi) = mid;
  }
  return {lo, hi};
}

}  // namespace packcert
