#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "visco/spectral/grid.hpp"

namespace visco {

using Complex = std::complex<double>;

enum class Rank { Scalar = 1, Vector = 3, Tensor = 9 };

inline int components(Rank r) { return static_cast<int>(r); }

/// Tensor component (i, j); for a gradient of a vector v this holds d_j v_i.
inline constexpr int tidx(int i, int j) { return 3 * i + j; }

/// Real grid function in physical space. Components are stored consecutively,
/// each y1-fastest.
class Field {
 public:
  Field() = default;
  Field(const Grid& g, int comps);
  Field(const Grid& g, Rank r) : Field(g, components(r)) {}

  using PointFn = std::function<void(double y1, double y2, double y3, std::span<double> out)>;
  static Field sample(const Grid& g, int comps, const PointFn& fn);

  const Grid& grid() const { return grid_; }
  int comps() const { return comps_; }
  std::size_t points() const { return grid_.points(); }

  std::span<double> comp(int c) { return {data_.data() + c * points(), points()}; }
  std::span<const double> comp(int c) const { return {data_.data() + c * points(), points()}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& at(int c, int i1, int i2, int i3) { return data_[c * points() + grid_.index(i1, i2, i3)]; }
  double at(int c, int i1, int i2, int i3) const {
    return data_[c * points() + grid_.index(i1, i2, i3)];
  }

  double min(int c) const;
  double max(int c) const;
  double max_abs() const;
  /// Quadrature of component c over the box (sum times cell volume).
  double integral(int c) const;

 private:
  Grid grid_;
  int comps_ = 0;
  std::vector<double> data_;
};

/// Fourier coefficients f_k with f(y) = sum_k f_k exp(i k.y), stored in the
/// r2c half layout: index j1 + (n1/2+1) * (i2 + n2 * i3).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(const Grid& g, int comps);
  Spectrum(const Grid& g, Rank r) : Spectrum(g, components(r)) {}

  const Grid& grid() const { return grid_; }
  int comps() const { return comps_; }
  std::size_t modes() const { return grid_.modes(); }

  std::span<Complex> comp(int c) { return {data_.data() + c * modes(), modes()}; }
  std::span<const Complex> comp(int c) const { return {data_.data() + c * modes(), modes()}; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// Coefficient of the mode with signed wavenumbers (k1 >= 0 half space only).
  Complex& mode(int c, int k1, int k2, int k3);
  Complex mode(int c, int k1, int k2, int k3) const;

  /// Mean over the box of component c (the k = 0 coefficient).
  double mean(int c) const { return data_[c * modes()].real(); }

  Spectrum component(int c) const;
  Spectrum& set_component(int c, const Spectrum& s);

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double a);
  Spectrum& axpy(double a, const Spectrum& x);

  friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
  friend Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
  friend Spectrum operator*(double a, Spectrum s) { return s *= a; }

 private:
  Grid grid_;
  int comps_ = 0;
  std::vector<Complex> data_;
};

/// Joins scalar/vector spectra into one multi-component spectrum.
Spectrum stack(std::initializer_list<const Spectrum*> parts);

}  // namespace visco
