#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"

namespace packcert {
namespace {

using testing::constants;
using testing::table;

constexpr auto k1 = CircleSize::One;
constexpr auto kR = CircleSize::R;
constexpr auto kS = CircleSize::S;

const Radii<double>& radii() { return constants().radii; }

TEST(Corona, KMax) {
  EXPECT_EQ(k_max(radii().s), 31);
  EXPECT_EQ(k_max(constants<long double>().radii.s), 31);
  EXPECT_EQ(k_max(Interval(1)), 24);
}

TEST(Corona, KMaxMonotone) {
  int previous = k_max(Interval(0.05));
  for (double s = 0.05; s <= 1.0; s += 0.0137) {
    try {
      const int k = k_max(Interval(s));
      EXPECT_LE(k, previous) << s;
      previous = k;
    } catch (const IndeterminateFloor&) {
    }
  }
}

TEST(Corona, CenterAngles) {
  EXPECT_TRUE(tight_center_angle(radii(), k1, k1, k1).contains(std::numbers::pi / 3));
  const auto& s = radii().s;
  const auto expected = acos(1.0 - 2.0 * square(s) / square(1.0 + s));
  EXPECT_TRUE(tight_center_angle(radii(), kS, k1, kS).overlaps(expected));
  for (auto a : kAllSizes)
    for (auto q : kAllSizes)
      for (auto b : kAllSizes)
        EXPECT_EQ(tight_center_angle(radii(), a, q, b), tight_center_angle(radii(), b, q, a));
}

Corona corona(CircleSize center, std::initializer_list<std::pair<const char*, int>> counts) {
  Corona c{center, {}};
  for (auto [name, n] : counts) c.counts[pair_from_name(name).index()] = n;
  return c;
}

TEST(Corona, ConstructionCoronasAreFlat) {
  const auto small = evaluate_corona(table(), radii(), corona(kS, {{"11", 1}, {"1r", 4}}));
  EXPECT_TRUE(small.flat());
  EXPECT_TRUE(small.numerator.contains_zero());
  EXPECT_TRUE(whitelisted(small.corona));
  const auto medium = evaluate_corona(table(), radii(), corona(kR, {{"1r", 2}, {"1s", 4}}));
  EXPECT_TRUE(medium.flat());
  EXPECT_TRUE(whitelisted(medium.corona));
  const auto large = evaluate_corona(table(), radii(), corona(k1, {{"1s", 2}, {"rr", 1}, {"rs", 4}}));
  EXPECT_TRUE(large.flat());
  EXPECT_TRUE(large.numerator.contains_zero());
  EXPECT_TRUE(whitelisted(large.corona));
}

TEST(Corona, EquilateralCoronaIsFlatWithPositiveSum) {
  for (auto q : kAllSizes) {
    Corona six{q, {}};
    six.counts[SizePair(q, q).index()] = 6;
    const auto b = evaluate_corona(table(), radii(), six);
    EXPECT_TRUE(b.flat());
    EXPECT_LT(b.numerator.hi(), 0);  // sum of V is 6 V_qqq > 0
    EXPECT_TRUE(equilateral_corona(six));
  }
}

TEST(Corona, ThreeTrianglesGiveNoConstraint) {
  const auto b = evaluate_corona(table(), radii(), corona(k1, {{"11", 3}}));
  ASSERT_FALSE(b.flat());
  EXPECT_TRUE(b.angle_gap.overlaps(pi<double>()));
  EXPECT_LT(b.ratio->hi(), 0);
}

TEST(Corona, Realizability) {
  EXPECT_TRUE(corona(k1, {{"11", 3}}).realizable());
  EXPECT_FALSE(corona(k1, {{"1r", 3}}).realizable());   // odd degrees
  EXPECT_FALSE(corona(k1, {{"11", 2}, {"rr", 2}}).realizable());  // disconnected
  EXPECT_TRUE(corona(k1, {{"1r", 2}, {"rr", 1}}).realizable());
}

// Canonical cyclic sequences of length k over {1, r, s}, mapped to count vectors.
std::set<std::array<int, 6>> counts_from_sequences(int k) {
  std::set<std::array<int, 6>> out;
  std::vector<int> seq(static_cast<std::size_t>(k), 0);
  while (true) {
    std::array<int, 6> counts{};
    for (int i = 0; i < k; ++i) {
      const auto a = kAllSizes[static_cast<std::size_t>(seq[static_cast<std::size_t>(i)])];
      const auto b = kAllSizes[static_cast<std::size_t>(seq[static_cast<std::size_t>((i + 1) % k)])];
      ++counts[SizePair(a, b).index()];
    }
    out.insert(counts);
    int pos = 0;
    while (pos < k && ++seq[static_cast<std::size_t>(pos)] == 3) seq[static_cast<std::size_t>(pos++)] = 0;
    if (pos == k) break;
  }
  return out;
}

TEST(CoronaProperty, EulerianEnumerationIsComplete) {
  for (int k = 3; k <= 8; ++k) {
    const auto from_sequences = counts_from_sequences(k);
    std::set<std::array<int, 6>> from_counts;
    std::array<int, 6> c{};
    for (c[0] = 0; c[0] <= k; ++c[0])
      for (c[1] = 0; c[0] + c[1] <= k; ++c[1])
        for (c[2] = 0; c[0] + c[1] + c[2] <= k; ++c[2])
          for (c[3] = 0; c[0] + c[1] + c[2] + c[3] <= k; ++c[3])
            for (c[4] = 0; c[0] + c[1] + c[2] + c[3] + c[4] <= k; ++c[4]) {
              c[5] = k - c[0] - c[1] - c[2] - c[3] - c[4];
              if (Corona{k1, c}.realizable()) from_counts.insert(c);
            }
    EXPECT_EQ(from_sequences, from_counts) << "k = " << k;
  }
}

struct Bounds {
  MSearch<double> narrow;
  MSearch<long double> wide;
};

const std::array<Bounds, 3>& searches() {
  static const auto result = [] {
    const auto& wt = table<long double>();
    const auto& wr = constants<long double>().radii;
    std::array<Bounds, 3> out;
    for (auto q : kAllSizes) {
      out[index_of(q)] = {search_m(table(), radii(), q, 31, &wt, &wr), search_m(wt, wr, q, 31, &wt, &wr)};
    }
    return out;
  }();
  return result;
}

TEST(CoronaSearch, LowerBounds) {
  const std::array<Interval, 3> expected{Interval(0.11561089, 0.11561090), Interval(0.02347193, 0.02347194),
                                         Interval(0.02275079, 0.02275080)};
  for (auto q : kAllSizes) {
    const auto& b = searches()[index_of(q)];
    EXPECT_TRUE(b.narrow.bound.subset_of(expected[index_of(q)])) << tag(q) << ' ' << b.narrow.bound;
    EXPECT_TRUE(convert<double>(b.wide.bound).subset_of(expected[index_of(q)])) << tag(q);
    EXPECT_LE(static_cast<double>(b.wide.bound.width()), 1e-12) << tag(q);
    EXPECT_TRUE(convert<double>(b.wide.bound).overlaps(b.narrow.bound));
    EXPECT_GT(b.narrow.coronas, 500000);
  }
  EXPECT_EQ(searches()[0].wide.argmax->name(), "1:2x1s,2xrr,2xrs,1xss");
  EXPECT_EQ(searches()[1].wide.argmax->name(), "r:6x1s");
  EXPECT_EQ(searches()[2].wide.argmax->name(), "s:3x11,2x1s");
}

TEST(CoronaSearch, DefaultSlopesDominate) {
  const PotentialParams defaults;
  for (auto q : kAllSizes) EXPECT_LT(searches()[index_of(q)].narrow.bound.hi(), defaults.m[index_of(q)]);
  EXPECT_GT(searches()[0].narrow.bound.lo(), 0.1);
}

TEST(CoronaSearch, FlatCoronasAreTheFourFamilies) {
  std::vector<FlatCorona<double>> flats;
  for (const auto& b : searches()) flats.insert(flats.end(), b.narrow.flats.begin(), b.narrow.flats.end());
  EXPECT_TRUE(verify_flat_coronas(flats).pass);
  int listed = 0, equilateral = 0;
  for (const auto& f : flats) {
    listed += f.whitelisted;
    equilateral += equilateral_corona(f.corona);
  }
  EXPECT_EQ(listed, 3);
  EXPECT_EQ(equilateral, 3);
  EXPECT_EQ(flats.size(), 6u);
}

TEST(CoronaSearch, UnexpectedFlatCoronaFails) {
  std::vector<FlatCorona<double>> flats{{corona(k1, {{"11", 6}}), Interval(0.001, 0.002), false}};
  EXPECT_FALSE(verify_flat_coronas(flats).pass);
}

TEST(CoronaSearch, SmallerKMaxFindsNoLargerBound) {
  const auto small = search_m(table(), radii(), k1, 12, &table<long double>(), &constants<long double>().radii);
  EXPECT_LE(small.bound.hi(), searches()[0].narrow.bound.hi());
}

}  // namespace
}  // namespace packcert
