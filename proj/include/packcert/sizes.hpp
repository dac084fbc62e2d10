#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <string_view>

namespace packcert {

/// The three circle radii of the packing, ordered by decreasing size.
enum class CircleSize : std::uint8_t { One = 0, R = 1, S = 2 };

inline constexpr std::array<CircleSize, 3> kAllSizes{CircleSize::One, CircleSize::R, CircleSize::S};

inline constexpr int index_of(CircleSize c) { return static_cast<int>(c); }

inline constexpr char tag(CircleSize c) {
  switch (c) {
    case CircleSize::One: return '1';
    case CircleSize::R: return 'r';
    case CircleSize::S: return 's';
  }
  return '?';
}

inline CircleSize size_from_tag(char c) {
  switch (c) {
    case '1': return CircleSize::One;
    case 'r': return CircleSize::R;
    case 's': return CircleSize::S;
  }
  throw std::invalid_argument(std::string("unknown circle size tag '") + c + "'");
}

/// Unordered pair of sizes; six of them index the edge tables.
struct SizePair {
  CircleSize a = CircleSize::One;
  CircleSize b = CircleSize::One;

  constexpr SizePair() = default;
  constexpr SizePair(CircleSize x, CircleSize y) : a(x <= y ? x : y), b(x <= y ? y : x) {}

  /// 0..5 in the order 11, 1r, 1s, rr, rs, ss.
  constexpr int index() const {
    constexpr int offset[3] = {0, 3, 5};
    return offset[index_of(a)] + index_of(b) - index_of(a);
  }

  std::string name() const { return {tag(a), tag(b)}; }

  friend constexpr bool operator==(SizePair, SizePair) = default;
};

inline constexpr std::array<SizePair, 6> kAllPairs{
    SizePair{CircleSize::One, CircleSize::One}, SizePair{CircleSize::One, CircleSize::R},
    SizePair{CircleSize::One, CircleSize::S},   SizePair{CircleSize::R, CircleSize::R},
    SizePair{CircleSize::R, CircleSize::S},     SizePair{CircleSize::S, CircleSize::S}};

inline SizePair pair_from_name(std::string_view name) {
  if (name.size() != 2) throw std::invalid_argument("size pair name must have two tags");
  return {size_from_tag(name[0]), size_from_tag(name[1])};
}

/// Multiset of three sizes, stored sorted (largest circle first).
struct TriangleClass {
  std::array<CircleSize, 3> sizes{};

  constexpr TriangleClass() = default;
  constexpr TriangleClass(CircleSize x, CircleSize y, CircleSize z) : sizes{x, y, z} {
    // three-element sort
    if (sizes[1] < sizes[0]) std::swap(sizes[0], sizes[1]);
    if (sizes[2] < sizes[1]) std::swap(sizes[1], sizes[2]);
    if (sizes[1] < sizes[0]) std::swap(sizes[0], sizes[1]);
  }

  std::string name() const { return {tag(sizes[0]), tag(sizes[1]), tag(sizes[2])}; }

  friend constexpr bool operator==(TriangleClass, TriangleClass) = default;
};

/// The ten tight-triangle classes in lexicographic order.
inline constexpr std::array<TriangleClass, 10> kAllClasses = [] {
  std::array<TriangleClass, 10> out{};
  int n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        out[n++] = TriangleClass(kAllSizes[i], kAllSizes[j], kAllSizes[k]);
  return out;
}();

inline TriangleClass class_from_name(std::string_view name) {
  if (name.size() != 3) throw std::invalid_argument("triangle class name must have three tags");
  return {size_from_tag(name[0]), size_from_tag(name[1]), size_from_tag(name[2])};
}

}  // namespace packcert
