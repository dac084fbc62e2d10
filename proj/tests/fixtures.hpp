#pragma once

#include <random>

#include "packcert/pipeline.hpp"

namespace packcert::testing {

template <std::floating_point F = double>
const Constants<F>& constants() {
  static const auto c = compute_constants<F>();
  return c;
}

template <std::floating_point F = double>
const PotentialTable<F>& table() {
  static const auto t = solve_v_table(constants<F>()).table;
  return t;
}

inline Models models(const PotentialParams& params = {}) {
  Models m{{solve_v_table(constants(), params).table, constants()}, std::nullopt};
  m.wide = Model<long double>{solve_v_table(constants<long double>(), params).table, constants<long double>()};
  return m;
}

inline Interval point(double x) { return Interval(x); }

/// Fixed-seed engine so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20261015);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace packcert::testing
