#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace pachner {

/// A permutation of the four vertex labels {0,1,2,3} of a model tetrahedron.
class Perm {
 public:
  constexpr Perm() : image_{0, 1, 2, 3} {}
  constexpr Perm(int a, int b, int c, int d)
      : image_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
               static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

  /// Parses "abcd" digit notation; returns false on anything that is not a
  /// bijection of 0..3.
  static bool parse(const std::string& text, Perm& out);

  /// The permutation with index `i` in the lexicographic list of all 24.
  static Perm from_index(int i);
  /// Swaps two labels.
  static constexpr Perm transposition(int a, int b) {
    Perm p;
    p.image_[a] = static_cast<std::uint8_t>(b);
    p.image_[b] = static_cast<std::uint8_t>(a);
    return p;
  }

  constexpr int operator[](int i) const { return image_[i]; }

  constexpr Perm inverse() const {
    Perm r;
    for (int i = 0; i < 4; ++i) r.image_[image_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  /// Composition: (this * other)(i) = this(other(i)).
  constexpr Perm operator*(const Perm& other) const {
    Perm r;
    for (int i = 0; i < 4; ++i) r.image_[i] = image_[other.image_[i]];
    return r;
  }

  constexpr int sign() const {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (image_[i] > image_[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
  }
  constexpr bool is_odd() const { return sign() < 0; }

  /// Position of this permutation in the lexicographic order of all 24.
  int index() const;

  constexpr bool is_valid() const {
    unsigned seen = 0;
    for (auto v : image_) {
      if (v > 3) return false;
      seen |= 1u << v;
    }
    return seen == 0xF;
  }

  std::string str() const;

  friend constexpr bool operator==(const Perm&, const Perm&) = default;
  friend constexpr auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::array<std::uint8_t, 4> image_;
};

/// The six model edges, enumerated as the vertex pairs 01,02,03,12,13,23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Index 0..5 of the model edge joining vertices a and b (a != b).
constexpr int edge_number(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  if (a == 0) return b - 1;
  if (a == 1) return b + 1;
  return 5;
}

/// A permutation sending 0,1 to the endpoints of model edge k (in increasing
/// order) and 2,3 to the remaining vertices (in increasing order).
Perm edge_ordering(int k);

}  // namespace pachner
