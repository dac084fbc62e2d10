#pragma once

// Vertex potentials V_xqy of the tight triangles, and vertex, edge and total
// potentials of arbitrary triangles.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "packcert/constants.hpp"
#include "packcert/geometry.hpp"

namespace packcert {

/// The tunable constants: deviation slopes m_q, edge thresholds l_xy and edge slopes q_xy.
/// Values are taken as exact binary doubles.
struct PotentialParams {
  std::array<double, 3> m{0.12, 0.03, 0.03};
  std::array<double, 6> l{2.78, 2.60, 2.32, 2.42, 2.14, 1.94};
  std::array<double, 6> q{0.39, 0.31, 0.30, 0.26, 0.26, 0.25};
  bool caps = false;

  friend bool operator==(const PotentialParams&, const PotentialParams&) = default;
};

template <std::floating_point F>
struct PotentialTable {
  using I = BasicInterval<F>;

  /// V[q][pair] is V_aqb for the centre size q and neighbour pair {a, b}.
  std::array<std::array<I, 6>, 3> V{};
  std::array<I, 3> m{};
  std::array<I, 6> l{};
  std::array<I, 6> q{};
  std::optional<std::array<I, 3>> caps;

  const I& v(CircleSize a, CircleSize center, CircleSize b) const {
    return V[index_of(center)][SizePair(a, b).index()];
  }
  I& v(CircleSize a, CircleSize center, CircleSize b) { return V[index_of(center)][SizePair(a, b).index()]; }
};

/// One of the 19 defining equations with its residual (left side minus right side).
template <std::floating_point F>
struct Equation {
  std::string name;
  BasicInterval<F> residual;
};

template <std::floating_point F>
struct SolvedTable {
  PotentialTable<F> table;
  std::vector<Equation<F>> equations;
  BasicInterval<F> zero_sum;  // excess of the periodic cell written in V values
};

namespace detail {

constexpr CircleSize k1 = CircleSize::One;
constexpr CircleSize kR = CircleSize::R;
constexpr CircleSize kS = CircleSize::S;

}  // namespace detail

/// Excess of the tight triangle of each class, indexed like kAllClasses.
template <std::floating_point F>
std::array<BasicInterval<F>, 10> tight_excesses(const Constants<F>& c) {
  std::array<BasicInterval<F>, 10> out;
  for (std::size_t i = 0; i < kAllClasses.size(); ++i) out[i] = tight_excess(c.radii, kAllClasses[i], c.delta);
  return out;
}

template <std::floating_point F>
void apply_params(PotentialTable<F>& t, const PotentialParams& p) {
  using I = BasicInterval<F>;
  for (int i = 0; i < 3; ++i) t.m[i] = I(F(p.m[i]));
  for (int i = 0; i < 6; ++i) {
    t.l[i] = I(F(p.l[i]));
    t.q[i] = I(F(p.q[i]));
  }
}

/// Solves the tight-triangle, apex and corona equations for the 18 V values
/// and reports the residual of each of the 19 equations.
template <std::floating_point F>
SolvedTable<F> solve_v_table(const Constants<F>& c, const PotentialParams& params = {}) {
  using namespace detail;
  using I = BasicInterval<F>;
  SolvedTable<F> out;
  auto& t = out.table;
  apply_params(t, params);

  const auto E = tight_excesses(c);
  auto excess_of = [&](CircleSize a, CircleSize b, CircleSize d) {
    const TriangleClass cls(a, b, d);
    for (std::size_t i = 0; i < kAllClasses.size(); ++i)
      if (kAllClasses[i] == cls) return E[i];
    return I();
  };

  // apexes of the isosceles tight triangles
  for (auto q : kAllSizes)
    for (auto a : kAllSizes)
      if (a != q) t.v(a, q, a) = I();

  for (auto q : kAllSizes) t.v(q, q, q) = excess_of(q, q, q) / F(3);
  for (auto a : kAllSizes)
    for (auto b : kAllSizes)
      if (a != b) t.v(a, a, b) = excess_of(a, a, b) / F(2);

  // coronas of Fig. 5: around s, around r, around 1
  t.v(k1, kS, kR) = -t.v(k1, kS, k1) / F(4);
  t.v(k1, kR, kS) = -(F(2) * t.v(k1, kR, kR)) / F(4);
  t.v(kR, k1, kS) = -(t.v(kR, k1, kR) + F(2) * t.v(k1, k1, kS)) / F(4);

  auto& eq = out.equations;
  for (std::size_t i = 0; i < kAllClasses.size(); ++i) {
    const auto [a, b, d] = kAllClasses[i].sizes;
    const I u = t.v(b, a, d) + t.v(a, b, d) + t.v(a, d, b);
    eq.push_back({"tight " + kAllClasses[i].name(), u - E[i]});
  }
  for (auto q : kAllSizes)
    for (auto a : kAllSizes)
      if (a != q) eq.push_back({std::string("apex V") + tag(a) + tag(q) + tag(a), t.v(a, q, a)});
  eq.push_back({"corona s", t.v(k1, kS, k1) + F(4) * t.v(k1, kS, kR)});
  eq.push_back({"corona r", F(2) * t.v(k1, kR, kR) + F(4) * t.v(k1, kR, kS)});
  eq.push_back({"corona 1", t.v(kR, k1, kR) + F(2) * t.v(k1, k1, kS) + F(4) * t.v(kR, k1, kS)});

  out.zero_sum = F(4) * (t.v(k1, kS, kR) + t.v(kR, k1, kS) + t.v(k1, kR, kS)) +
                 (F(2) * t.v(k1, k1, kS) + t.v(k1, kS, k1)) + (F(2) * t.v(k1, kR, kR) + t.v(kR, k1, kR));

  for (const auto& e : eq) {
    if (!e.residual.contains_zero()) throw InconsistentSystem("equation '" + e.name + "' has a nonzero residual");
  }
  return out;
}

/// Angle at vertex v of the tight triangle with the sizes of t.
template <std::floating_point F>
BasicInterval<F> contracted_angle(const TriangleShape<F>& t, int v) {
  const auto [j, k] = TriangleShape<F>::endpoints(v);
  return tight_angle(t.radii[j], t.radii[v], t.radii[k]);
}

/// Caps Z_q = 2 pi |min over tight triangles of V / angle at the size-q vertex|.
template <std::floating_point F>
std::array<BasicInterval<F>, 3> compute_caps(const PotentialTable<F>& table, const Constants<F>& c) {
  std::array<BasicInterval<F>, 3> z;
  for (auto q : kAllSizes) {
    std::optional<BasicInterval<F>> lowest;
    for (auto pair : kAllPairs) {
      const auto ratio =
          table.v(pair.a, q, pair.b) / tight_angle(c.radii[pair.a], c.radii[q], c.radii[pair.b]);
      lowest = lowest ? min(*lowest, ratio) : ratio;
    }
    z[index_of(q)] = two_pi<F>() * abs(*lowest);
  }
  return z;
}

/// V_xqy + m_q |angle - tight angle|, capped at Z_q when caps are present.
template <std::floating_point F>
BasicInterval<F> vertex_potential(const PotentialTable<F>& table, const TriangleShape<F>& t, int v,
                                  const BasicInterval<F>& angle, const BasicInterval<F>& tight) {
  const auto [j, k] = TriangleShape<F>::endpoints(v);
  const auto q = t.sizes[v];
  auto u = table.v(t.sizes[j], q, t.sizes[k]) + table.m[index_of(q)] * abs(angle - tight);
  if (table.caps) u = min((*table.caps)[index_of(q)], u);
  return u;
}

template <std::floating_point F>
BasicInterval<F> vertex_potential(const PotentialTable<F>& table, const TriangleShape<F>& t, int v,
                                  const BasicInterval<F>& tight) {
  return vertex_potential(table, t, v, angles(t)[v], tight);
}

enum class EdgeRegime { Short, Long, Straddle };

template <std::floating_point F>
EdgeRegime edge_regime(const PotentialTable<F>& table, const TriangleShape<F>& t, int e) {
  const auto [j, k] = TriangleShape<F>::endpoints(e);
  const auto& l = table.l[SizePair(t.sizes[j], t.sizes[k]).index()];
  if (t.lengths[e].hi() < l.lo()) return EdgeRegime::Short;
  if (t.lengths[e].lo() >= l.hi()) return EdgeRegime::Long;
  return EdgeRegime::Straddle;
}

/// 0 below the threshold l_xy, q_xy d_e at or above it, the hull of both on a straddling box.
template <std::floating_point F>
BasicInterval<F> edge_potential(const PotentialTable<F>& table, const TriangleShape<F>& t, int e,
                                const BasicInterval<F>& d) {
  const auto [j, k] = TriangleShape<F>::endpoints(e);
  const auto& q = table.q[SizePair(t.sizes[j], t.sizes[k]).index()];
  switch (edge_regime(table, t, e)) {
    case EdgeRegime::Short: return {};
    case EdgeRegime::Long: return q * d;
    case EdgeRegime::Straddle: return hull(BasicInterval<F>(), q * d);
  }
  return {};
}

template <std::floating_point F>
BasicInterval<F> edge_potential(const PotentialTable<F>& table, const TriangleShape<F>& t, int e,
                                const SupportCircle<F>& support) {
  return edge_potential(table, t, e, support.d[e]);
}

template <std::floating_point F>
bool needs_support(const PotentialTable<F>& table, const TriangleShape<F>& t) {
  for (int e = 0; e < 3; ++e)
    if (edge_regime(table, t, e) != EdgeRegime::Short) return true;
  return false;
}

/// Sum of vertex potentials given the angles of t.
template <std::floating_point F>
BasicInterval<F> vertex_potentials(const PotentialTable<F>& table, const TriangleShape<F>& t,
                                   const std::array<BasicInterval<F>, 3>& angle) {
  BasicInterval<F> u;
  for (int v = 0; v < 3; ++v) u += vertex_potential(table, t, v, angle[v], contracted_angle(t, v));
  return u;
}

/// Sum of edge potentials; `support` may be absent only when every edge is short.
template <std::floating_point F>
BasicInterval<F> edge_potentials(const PotentialTable<F>& table, const TriangleShape<F>& t,
                                 const SupportCircle<F>* support) {
  BasicInterval<F> u;
  for (int e = 0; e < 3; ++e) {
    if (edge_regime(table, t, e) == EdgeRegime::Short) continue;
    if (!support) throw IndeterminateRoot();
    u += edge_potential(table, t, e, *support);
  }
  return u;
}

template <std::floating_point F>
BasicInterval<F> total_potential(const PotentialTable<F>& table, const TriangleShape<F>& t) {
  const auto angle = angles(t);
  auto u = vertex_potentials(table, t, angle);
  if (needs_support(table, t)) {
    const auto support = support_circle(t);
    u += edge_potentials(table, t, &support);
  }
  return u;
}

}  // namespace packcert
