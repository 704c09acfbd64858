#pragma once

#include <cstddef>
#include <numbers>

namespace visco {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Volume of the periodic cell (0, 2pi)^3.
inline constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;

enum class Dealias { TwoThirds, Pad3Half, Pad2x };

/// Uniform grid on the 2pi-periodic 3-torus. Points are stored y1-fastest.
struct Grid {
  int n1 = 16;
  int n2 = 16;
  int n3 = 16;
  Dealias dealias = Dealias::Pad3Half;

  Grid() = default;
  Grid(int a, int b, int c, Dealias d = Dealias::Pad3Half);
  static Grid cube(int n, Dealias d = Dealias::Pad3Half) { return Grid(n, n, n, d); }

  std::size_t points() const { return std::size_t(n1) * n2 * n3; }
  /// Number of stored r2c coefficients (n1/2+1 along the first axis).
  std::size_t modes() const { return std::size_t(n1 / 2 + 1) * n2 * n3; }
  int half1() const { return n1 / 2 + 1; }
  double cell_volume() const { return kBoxVolume / double(points()); }
  double spacing(int axis) const;

  std::size_t index(int i1, int i2, int i3) const {
    return std::size_t(i1) + std::size_t(n1) * (std::size_t(i2) + std::size_t(n2) * i3);
  }

  /// Grid with every axis scaled by num/den (used for zero-padded products).
  Grid scaled(int num, int den) const;
  /// Fine grid used for products of the given polynomial degree under this grid's dealias mode.
  Grid product_grid(int degree) const;

  bool same_shape(const Grid& o) const { return n1 == o.n1 && n2 == o.n2 && n3 == o.n3; }
  friend bool operator==(const Grid& a, const Grid& b) {
    return a.same_shape(b) && a.dealias == b.dealias;
  }
};

/// Signed wavenumber of storage index i on an axis of n points.
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

const char* to_string(Dealias d);
Dealias parse_dealias(const char* s);

}  // namespace visco
