#pragma once

// Branch and bound over edge-length boxes certifying E(T) >= U(T) for every
// triangle of an FM-triangulation of a saturated packing.

#include <tbb/combinable.h>
#include <tbb/global_control.h>
#include <tbb/task_arena.h>
#include <tbb/task_group.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packcert/tightcheck.hpp"

namespace packcert {

enum class BoxVerdict { Verified, Infeasible, TightCovered, Split, Counterexample, Undecided };

inline const char* to_string(BoxVerdict v) {
  switch (v) {
    case BoxVerdict::Verified: return "Verified";
    case BoxVerdict::Infeasible: return "Infeasible";
    case BoxVerdict::TightCovered: return "TightCovered";
    case BoxVerdict::Split: return "Split";
    case BoxVerdict::Counterexample: return "Counterexample";
    case BoxVerdict::Undecided: return "Undecided";
  }
  return "?";
}

/// Table and constants at one precision.
template <std::floating_point F>
struct Model {
  PotentialTable<F> table;
  Constants<F> constants;
};

struct Models {
  Model<double> base;
  std::optional<Model<long double>> wide;  // used for escalation
};

struct ProverConfig {
  double eps = 0.056;
  int max_depth = 40;
  int escalate_depth = 30;
  int jobs = 0;  // 0: all hardware threads
  bool record_leaves = false;
};

using PathKey = unsigned __int128;

/// A box of the dichotomy. lengths[i] is the edge opposite vertex i and the
/// vertices carry the class sizes in order.
struct Box {
  int class_index = 0;
  int root = 0;  // position among the roots of one run
  std::array<Interval, 3> lengths{};
  int depth = 0;
  PathKey path = 1;  // leading 1 followed by 3 bits per split

  TriangleClass cls() const { return kAllClasses[static_cast<std::size_t>(class_index)]; }
};

/// [x+y, x+y+2s] x [x+z, x+z+2s] x [y+z, y+z+2s] in vertex order (x, y, z).
inline Box root_box(const Radii<double>& radii, int class_index) {
  Box b;
  b.class_index = class_index;
  const auto t = make_tight(radii, kAllClasses[static_cast<std::size_t>(class_index)].sizes);
  for (int i = 0; i < 3; ++i) {
    const auto c = t.contact_length(i);
    b.lengths[i] = Interval(c.lo(), (c + 2.0 * radii.s).hi());
  }
  return b;
}

/// The eight children obtained by halving every edge; child bit i selects the upper half of edge i.
inline std::array<Box, 8> split(const Box& b) {
  std::array<Box, 8> out;
  for (int child = 0; child < 8; ++child) {
    Box c = b;
    c.depth = b.depth + 1;
    c.path = b.path * 8 + static_cast<unsigned>(child);
    for (int i = 0; i < 3; ++i) {
      const auto& x = b.lengths[i];
      const double mid = x.mid();
      c.lengths[i] = (child >> i) & 1 ? Interval(mid, x.hi()) : Interval(x.lo(), mid);
    }
    out[static_cast<std::size_t>(child)] = c;
  }
  return out;
}

template <std::floating_point F>
TriangleShape<F> shape_of(const Model<F>& model, const Box& b) {
  std::array<BasicInterval<F>, 3> lengths;
  for (int i = 0; i < 3; ++i) lengths[i] = convert<F>(b.lengths[i]);
  return make_triangle(model.constants.radii, b.cls().sizes, lengths);
}

/// Evidence computed while classifying one box at one precision.
template <std::floating_point F>
struct Classification {
  BoxVerdict verdict = BoxVerdict::Split;
  std::optional<BasicInterval<F>> excess;
  std::optional<BasicInterval<F>> potential;
};

/// Ordered tests: triangle inequality, support radius >= s, inclusion in
/// the eps-tight box, then E against U. Split means undecided at this width.
/// E < U is reported as a counterexample only when every triangle of the box
/// certainly has a support circle smaller than s.
template <std::floating_point F>
Classification<F> classify_at(const Model<F>& model, F eps, const Box& box) {
  using I = BasicInterval<F>;
  Classification<F> out;
  const auto t = shape_of(model, box);
  const auto& x = t.lengths;
  const auto& s = model.constants.radii.s;

  for (int i = 0; i < 3; ++i) {
    const auto [j, k] = TriangleShape<F>::endpoints(i);
    if (x[i].lo() > (x[j] + x[k]).hi()) {
      out.verdict = BoxVerdict::Infeasible;
      return out;
    }
  }

  const auto quadratic = support_quadratic(t);
  if (!quadratic || no_radius_up_to(*quadratic, s.hi())) {
    out.verdict = BoxVerdict::Infeasible;
    return out;
  }
  const auto support = try_support_circle(t, quadratic);
  if (support.status == SupportStatus::NoRealSolution || support.radius_lower_bound >= s.hi()) {
    out.verdict = BoxVerdict::Infeasible;
    return out;
  }

  bool tight = true;
  for (int i = 0; i < 3; ++i) tight = tight && x[i].hi() <= (t.contact_length(i) + eps).hi();
  if (tight) {
    out.verdict = BoxVerdict::TightCovered;
    return out;
  }

  std::array<I, 3> angle;
  I e, u;
  try {
    angle = angles(t);
    e = model.constants.delta * area(t) - coverage(t, angle);
    u = vertex_potentials(model.table, t, angle);
  } catch (const InfeasibleBox&) {
    out.verdict = BoxVerdict::Infeasible;
    return out;
  }
  const bool has_support = support.status == SupportStatus::Ok;
  if (needs_support(model.table, t)) {
    if (!has_support) return out;
    u += edge_potentials(model.table, t, &support.circle);
  }
  out.excess = e;
  out.potential = u;
  switch (compare(e, u)) {
    case Comparison::CertainlyGE: out.verdict = BoxVerdict::Verified; break;
    case Comparison::CertainlyLT:
      if (has_support && support.circle.radius.hi() < s.lo()) out.verdict = BoxVerdict::Counterexample;
      break;
    case Comparison::Indeterminate: break;
  }
  return out;
}

/// Classifies with escalation to the wide model from `escalate_depth` on and
/// turns Split into Undecided at `max_depth`.
inline BoxVerdict classify(const Models& models, const ProverConfig& config, const Box& box) {
  auto verdict = classify_at(models.base, config.eps, box).verdict;
  if (verdict == BoxVerdict::Split && models.wide && box.depth >= config.escalate_depth) {
    verdict = classify_at(*models.wide, static_cast<long double>(config.eps), box).verdict;
  }
  if (verdict == BoxVerdict::Split && box.depth >= config.max_depth) verdict = BoxVerdict::Undecided;
  return verdict;
}

struct ClassStats {
  long long boxes_examined = 0;
  long long verified = 0;
  long long infeasible = 0;
  long long tight_covered = 0;
  long long split = 0;
  long long counterexamples = 0;
  long long undecided = 0;
  int max_depth_seen = 0;

  void count(BoxVerdict v, int depth) {
    ++boxes_examined;
    max_depth_seen = std::max(max_depth_seen, depth);
    switch (v) {
      case BoxVerdict::Verified: ++verified; break;
      case BoxVerdict::Infeasible: ++infeasible; break;
      case BoxVerdict::TightCovered: ++tight_covered; break;
      case BoxVerdict::Split: ++split; break;
      case BoxVerdict::Counterexample: ++counterexamples; break;
      case BoxVerdict::Undecided: ++undecided; break;
    }
  }

  void merge(const ClassStats& o) {
    boxes_examined += o.boxes_examined;
    verified += o.verified;
    infeasible += o.infeasible;
    tight_covered += o.tight_covered;
    split += o.split;
    counterexamples += o.counterexamples;
    undecided += o.undecided;
    max_depth_seen = std::max(max_depth_seen, o.max_depth_seen);
  }

  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

struct Leaf {
  Box box;
  BoxVerdict verdict = BoxVerdict::Verified;
};

struct ProverStats {
  std::array<ClassStats, 10> per_class{};
  ClassStats total;
  /// First counterexample of each class in depth-first order.
  std::array<std::optional<Box>, 10> counterexamples{};
  std::optional<Box> counterexample;  // first over all classes
  std::optional<Box> undecided;
  std::vector<Leaf> leaves;  // when recorded, sorted by (class, path)
  double wall_seconds = 0;

  bool pass() const { return total.counterexamples == 0 && total.undecided == 0; }
};

namespace detail {

inline bool canonical_less(const Box& a, const Box& b) {
  if (a.class_index != b.class_index) return a.class_index < b.class_index;
  if (a.root != b.root) return a.root < b.root;
  return a.path < b.path;
}

inline void keep_smallest(std::optional<Box>& slot, const Box& b) {
  if (!slot || canonical_less(b, *slot)) slot = b;
}

/// Depth-first pre-order on (class, path): an ancestor precedes its descendants.
inline bool preorder_less(const Box& a, const Box& b) {
  if (a.class_index != b.class_index) return a.class_index < b.class_index;
  if (a.root != b.root) return a.root < b.root;
  PathKey pa = a.path, pb = b.path;
  const int shift = 3 * std::abs(a.depth - b.depth);
  if (a.depth > b.depth) pa >>= shift;
  if (b.depth > a.depth) pb >>= shift;
  if (pa != pb) return pa < pb;
  return a.depth < b.depth;
}

/// Earliest counterexample of one class seen so far; boxes of the class after
/// it in pre-order need no visit.
class FirstFailure {
 public:
  bool skips(const Box& b) const {
    if (!found_.load(std::memory_order_acquire)) return false;
    std::lock_guard lock(mutex_);
    return preorder_less(*best_, b);
  }

  void offer(const Box& b) {
    std::lock_guard lock(mutex_);
    if (!best_ || preorder_less(b, *best_)) best_ = b;
    found_.store(true, std::memory_order_release);
  }

  std::optional<Box> best() const {
    std::lock_guard lock(mutex_);
    return best_;
  }

 private:
  mutable std::mutex mutex_;
  std::atomic<bool> found_{false};
  std::optional<Box> best_;
};

struct WorkerState {
  std::array<ClassStats, 10> per_class{};
  std::optional<Box> undecided;
  std::vector<Leaf> leaves;
};

}  // namespace detail

/// Processes the ten root boxes by recursive splitting. Without a
/// counterexample the whole tree is explored and the counts are canonical.
/// Once a class has one, its boxes after it in depth-first order are
/// skipped, so each class reports its first counterexample in that order
/// whatever the schedule, while the counts of a failing run may vary.
inline ProverStats prove_boxes(const Models& models, const ProverConfig& config, std::vector<Box> roots) {
  const auto start = std::chrono::steady_clock::now();
  tbb::combinable<detail::WorkerState> workers;
  std::array<detail::FirstFailure, 10> failures;

  auto run = [&] {
    tbb::task_group group;
    std::function<void(Box)> visit = [&](Box box) {
      auto& failure = failures[static_cast<std::size_t>(box.class_index)];
      if (failure.skips(box)) return;
      const auto verdict = classify(models, config, box);
      auto& w = workers.local();
      w.per_class[static_cast<std::size_t>(box.class_index)].count(verdict, box.depth);
      switch (verdict) {
        case BoxVerdict::Split:
        {
          // reversed so that a single worker, which runs the newest task first, goes depth first
          const auto children = split(box);
          for (auto it = children.rbegin(); it != children.rend(); ++it) {
            group.run([&visit, child = *it] { visit(child); });
          }
          return;
        }
        case BoxVerdict::Counterexample: failure.offer(box); break;
        case BoxVerdict::Undecided: detail::keep_smallest(w.undecided, box); break;
        default: break;
      }
      if (config.record_leaves) w.leaves.push_back({box, verdict});
    };
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) group.run([&visit, root = *it] { visit(root); });
    group.wait();
  };

  if (config.jobs > 0) {
    tbb::task_arena arena(config.jobs);
    arena.execute(run);
  } else {
    run();
  }

  ProverStats stats;
  workers.combine_each([&](const detail::WorkerState& w) {
    for (std::size_t c = 0; c < w.per_class.size(); ++c) stats.per_class[c].merge(w.per_class[c]);
    if (w.undecided) detail::keep_smallest(stats.undecided, *w.undecided);
    stats.leaves.insert(stats.leaves.end(), w.leaves.begin(), w.leaves.end());
  });
  for (std::size_t c = 0; c < failures.size(); ++c) {
    stats.counterexamples[c] = failures[c].best();
    if (!stats.counterexample && stats.counterexamples[c]) stats.counterexample = stats.counterexamples[c];
  }
  for (const auto& c : stats.per_class) stats.total.merge(c);
  std::sort(stats.leaves.begin(), stats.leaves.end(),
            [](const Leaf& a, const Leaf& b) { return detail::canonical_less(a.box, b.box); });
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

/// The ten root compacts.
inline ProverStats prove_all(const Models& models, const ProverConfig& config) {
  std::vector<Box> roots;
  for (int c = 0; c < static_cast<int>(kAllClasses.size()); ++c) roots.push_back(root_box(models.base.constants.radii, c));
  return prove_boxes(models, config, std::move(roots));
}

/// Lengths of the stretched triangle where vertex z touches the other two
/// circles and the line through their centres, in vertex order.
inline std::array<double, 3> stretched_lengths(const Radii<double>& radii, std::array<CircleSize, 3> sizes, int z) {
  const auto [x, y] = TriangleShape<double>::endpoints(z);
  const auto t = make_stretched(radii, sizes[static_cast<std::size_t>(x)], sizes[static_cast<std::size_t>(y)],
                                sizes[static_cast<std::size_t>(z)]);
  // make_stretched orders vertices (x, y, z)
  std::array<double, 3> out{};
  out[static_cast<std::size_t>(x)] = t.lengths[0].mid();
  out[static_cast<std::size_t>(y)] = t.lengths[1].mid();
  out[static_cast<std::size_t>(z)] = t.lengths[2].mid();
  return out;
}

/// Largest distance from the corners and centre of the box to the nearest stretched configuration.
inline double distance_to_stretched(const Radii<double>& radii, const Box& box) {
  std::vector<std::array<double, 3>> samples;
  for (int corner = 0; corner < 8; ++corner) {
    std::array<double, 3> p{};
    for (int i = 0; i < 3; ++i) p[i] = (corner >> i) & 1 ? box.lengths[i].hi() : box.lengths[i].lo();
    samples.push_back(p);
  }
  samples.push_back({box.lengths[0].mid(), box.lengths[1].mid(), box.lengths[2].mid()});
  double worst = 0;
  for (const auto& p : samples) {
    double best = std::numeric_limits<double>::infinity();
    for (int z = 0; z < 3; ++z) {
      const auto st = stretched_lengths(radii, box.cls().sizes, z);
      double d2 = 0;
      for (int i = 0; i < 3; ++i) d2 += (p[i] - st[i]) * (p[i] - st[i]);
      best = std::min(best, std::sqrt(d2));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

/// Boxes of every class around each stretched configuration, each inside the
/// Euclidean ball of the given radius and clipped to the root compact.
inline std::vector<Box> stretched_neighbourhoods(const Radii<double>& radii, double radius) {
  std::vector<Box> out;
  const double half = radius / std::sqrt(3.0) * (1 - 1e-9);
  for (int c = 0; c < static_cast<int>(kAllClasses.size()); ++c) {
    const auto root = root_box(radii, c);
    for (int z = 0; z < 3; ++z) {
      const auto st = stretched_lengths(radii, kAllClasses[static_cast<std::size_t>(c)].sizes, z);
      Box b = root;
      b.root = z;
      bool inside = true;
      for (int i = 0; i < 3; ++i) {
        const double lo = std::max(st[i] - half, root.lengths[i].lo());
        const double hi = std::min(st[i] + half, root.lengths[i].hi());
        if (!(lo < hi)) {
          inside = false;
          break;
        }
        b.lengths[i] = Interval(lo, hi);
      }
      if (inside) out.push_back(b);
    }
  }
  return out;
}

}  // namespace packcert
