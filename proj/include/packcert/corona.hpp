#pragma once

// Exhaustive search over vertex coronas for the lower bounds on m_q.
//
// A corona around a size-q centre is the cyclic sequence of neighbour sizes.
// Both the potential sum and the angle sum depend only on how many triangles
// carry each neighbour pair, so the search runs over pair-count vectors. A
// count vector comes from a cyclic sequence iff the multigraph on {1, r, s}
// with those edge multiplicities (pairs {a, a} as loops) has an Eulerian
// circuit: connected on its support, every degree even.

#include <tbb/combinable.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "packcert/potentials.hpp"
#include "packcert/verdict.hpp"

namespace packcert {

/// floor(2 pi / asin(s / (2 + 2s))): no vertex has more triangles than this.
template <std::floating_point F>
int k_max(const BasicInterval<F>& s) {
  const auto bound = two_pi<F>() / asin(s / (F(2) + F(2) * s));
  const F lo = std::floor(bound.lo());
  const F hi = std::floor(bound.hi());
  if (lo != hi) throw IndeterminateFloor();
  return static_cast<int>(lo);
}

/// Angle at the size-q centre of the tight triangle (a, q, b).
template <std::floating_point F>
BasicInterval<F> tight_center_angle(const Radii<F>& radii, CircleSize a, CircleSize q, CircleSize b) {
  return tight_angle(radii[a], radii[q], radii[b]);
}

struct Corona {
  CircleSize center = CircleSize::One;
  std::array<int, 6> counts{};  // indexed by SizePair::index()

  int k() const {
    int n = 0;
    for (int c : counts) n += c;
    return n;
  }

  bool realizable() const {
    std::array<int, 3> degree{};
    std::array<int, 3> parent{0, 1, 2};
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (auto p : kAllPairs) {
      const int c = counts[p.index()];
      if (c == 0) continue;
      degree[index_of(p.a)] += c;
      degree[index_of(p.b)] += c;  // a loop counts twice
      parent[find(index_of(p.a))] = find(index_of(p.b));
    }
    int root = -1;
    for (int v = 0; v < 3; ++v) {
      if (degree[v] == 0) continue;
      if (degree[v] % 2 != 0) return false;
      if (root < 0) root = find(v);
      if (find(v) != root) return false;
    }
    return root >= 0;
  }

  std::string name() const {
    std::string out{tag(center), ':'};
    bool first = true;
    for (auto p : kAllPairs) {
      if (counts[p.index()] == 0) continue;
      if (!first) out += ',';
      first = false;
      out += std::to_string(counts[p.index()]) + "x" + p.name();
    }
    return out;
  }

  friend bool operator==(const Corona&, const Corona&) = default;
  friend auto operator<=>(const Corona& a, const Corona& b) {
    if (auto c = index_of(a.center) <=> index_of(b.center); c != 0) return c;
    return a.counts <=> b.counts;
  }
};

template <std::floating_point F>
struct CoronaBound {
  Corona corona;
  BasicInterval<F> numerator;    // -sum of V values at the centre
  BasicInterval<F> angle_gap;    // 2 pi - sum of tight angles at the centre
  std::optional<BasicInterval<F>> ratio;  // absent when flat

  bool flat() const { return !ratio.has_value(); }
};

template <std::floating_point F>
CoronaBound<F> evaluate_corona(const PotentialTable<F>& table, const Radii<F>& radii, const Corona& c) {
  CoronaBound<F> out;
  out.corona = c;
  BasicInterval<F> sum_v, sum_angle;
  for (auto p : kAllPairs) {
    const int n = c.counts[p.index()];
    if (n == 0) continue;
    sum_v += F(n) * table.v(p.a, c.center, p.b);
    sum_angle += F(n) * tight_center_angle(radii, p.a, c.center, p.b);
  }
  out.numerator = -sum_v;
  out.angle_gap = two_pi<F>() - sum_angle;
  if (!out.angle_gap.contains_zero()) out.ratio = out.numerator / abs(out.angle_gap);
  return out;
}

/// The three coronas of Fig. 5 whose potential sums vanish by construction of the table.
inline bool whitelisted(const Corona& c) {
  static const std::array<Corona, 3> list{
      Corona{CircleSize::One, {0, 0, 2, 1, 4, 0}},
      Corona{CircleSize::R, {0, 2, 4, 0, 0, 0}},
      Corona{CircleSize::S, {1, 4, 0, 0, 0, 0}},
  };
  return std::find(list.begin(), list.end(), c) != list.end();
}

inline bool equilateral_corona(const Corona& c) {
  Corona six{c.center, {}};
  six.counts[SizePair(c.center, c.center).index()] = 6;
  return c == six;
}

template <std::floating_point F>
struct FlatCorona {
  Corona corona;
  BasicInterval<F> numerator;
  bool whitelisted = false;
};

template <std::floating_point F>
struct MSearch {
  CircleSize center = CircleSize::One;
  int k_max = 0;
  /// Enclosure of the largest ratio over non-flat coronas, floored at 0.
  BasicInterval<F> bound;
  std::optional<Corona> argmax;
  std::vector<FlatCorona<F>> flats;
  long long coronas = 0;  // realizable count vectors examined
  bool escalated = false;
};

namespace detail {

template <std::floating_point F>
struct SearchPartial {
  F best_lo = 0;
  F best_hi = 0;
  std::optional<Corona> argmax;
  std::vector<FlatCorona<F>> flats;
  std::vector<Corona> unresolved;
  long long coronas = 0;

  void offer(const Corona& c, const BasicInterval<F>& ratio) {
    best_lo = std::max(best_lo, ratio.lo());
    if (ratio.hi() > best_hi || (ratio.hi() == best_hi && argmax && c < *argmax)) {
      if (ratio.hi() > 0) {
        best_hi = ratio.hi();
        argmax = c;
      }
    }
  }

  void merge(const SearchPartial& o) {
    best_lo = std::max(best_lo, o.best_lo);
    if (o.argmax && (o.best_hi > best_hi || (o.best_hi == best_hi && (!argmax || *o.argmax < *argmax)))) {
      best_hi = o.best_hi;
      argmax = o.argmax;
    }
    flats.insert(flats.end(), o.flats.begin(), o.flats.end());
    unresolved.insert(unresolved.end(), o.unresolved.begin(), o.unresolved.end());
    coronas += o.coronas;
  }
};

}  // namespace detail

/// Enumerates every realizable corona around a size-q centre with 3 <= k <= k_max.
/// A flat corona must be whitelisted or have a certainly nonpositive
/// numerator; others are re-evaluated with `wide` and rejected if still flat.
template <std::floating_point F>
MSearch<F> search_m(const PotentialTable<F>& table, const Radii<F>& radii, CircleSize q, int kmax,
                    const PotentialTable<long double>* wide_table = nullptr,
                    const Radii<long double>* wide_radii = nullptr) {
  using I = BasicInterval<F>;
  std::array<I, 6> v, angle;
  for (auto p : kAllPairs) {
    v[p.index()] = table.v(p.a, q, p.b);
    angle[p.index()] = tight_center_angle(radii, p.a, q, p.b);
  }
  const I two_pi_i = two_pi<F>();

  tbb::combinable<detail::SearchPartial<F>> partials;
  tbb::parallel_for(0, kmax + 1, [&](int c0) {
    auto& part = partials.local();
    Corona c{q, {c0, 0, 0, 0, 0, 0}};
    const I v0 = F(c0) * v[0], a0 = F(c0) * angle[0];
    for (int c1 = 0; c0 + c1 <= kmax; ++c1) {
      const I v1 = v0 + F(c1) * v[1], a1 = a0 + F(c1) * angle[1];
      for (int c2 = 0; c0 + c1 + c2 <= kmax; ++c2) {
        const I v2 = v1 + F(c2) * v[2], a2 = a1 + F(c2) * angle[2];
        for (int c3 = 0; c0 + c1 + c2 + c3 <= kmax; ++c3) {
          const I v3 = v2 + F(c3) * v[3], a3 = a2 + F(c3) * angle[3];
          for (int c4 = 0; c0 + c1 + c2 + c3 + c4 <= kmax; ++c4) {
            const I v4 = v3 + F(c4) * v[4], a4 = a3 + F(c4) * angle[4];
            for (int c5 = 0; c0 + c1 + c2 + c3 + c4 + c5 <= kmax; ++c5) {
              c.counts = {c0, c1, c2, c3, c4, c5};
              if (c.k() < 3 || !c.realizable()) continue;
              ++part.coronas;
              const I sum_v = v4 + F(c5) * v[5];
              const I gap = two_pi_i - (a4 + F(c5) * angle[5]);
              if (!gap.contains_zero()) {
                part.offer(c, -sum_v / abs(gap));
                continue;
              }
              const bool listed = whitelisted(c);
              part.flats.push_back({c, -sum_v, listed});
              if (!listed && !(sum_v.lo() >= 0)) part.unresolved.push_back(c);
            }
          }
        }
      }
    }
  });

  detail::SearchPartial<F> total;
  partials.combine_each([&](const detail::SearchPartial<F>& p) { total.merge(p); });

  MSearch<F> out;
  out.center = q;
  out.k_max = kmax;
  out.coronas = total.coronas;

  std::sort(total.unresolved.begin(), total.unresolved.end());
  for (const auto& c : total.unresolved) {
    if (!wide_table || !wide_radii) throw FlatCoronaUnresolved("flat corona " + c.name() + " is not accounted for");
    const auto wide = evaluate_corona(*wide_table, *wide_radii, c);
    if (wide.flat()) throw FlatCoronaUnresolved("flat corona " + c.name() + " is not accounted for");
    out.escalated = true;
    total.offer(c, convert<F>(*wide.ratio));
    std::erase_if(total.flats, [&](const FlatCorona<F>& f) { return f.corona == c; });
  }
  std::sort(total.flats.begin(), total.flats.end(),
            [](const FlatCorona<F>& a, const FlatCorona<F>& b) { return a.corona < b.corona; });

  out.bound = I(total.best_lo, total.best_hi);
  out.argmax = total.argmax;
  out.flats = std::move(total.flats);
  return out;
}

/// Every flat corona must be one of the three Fig. 5 coronas or six
/// equilateral triangles with a certainly nonnegative potential sum.
template <std::floating_point F>
Verdict verify_flat_coronas(const std::vector<FlatCorona<F>>& flats) {
  std::ostringstream why;
  bool pass = true;
  for (const auto& f : flats) {
    if (f.whitelisted) continue;
    if (equilateral_corona(f.corona) && f.numerator.hi() <= 0) continue;
    pass = false;
    why << "unexpected flat corona " << f.corona.name() << "; ";
  }
  if (!pass) return Verdict::fail(why.str());
  why << flats.size() << " flat coronas, all accounted for";
  return Verdict::ok(why.str());
}

}  // namespace packcert
