#include "visco/spectral/field.hpp"

#include <algorithm>
#include <cmath>

#include "visco/errors.hpp"

namespace visco {

Field::Field(const Grid& g, int comps) : grid_(g), comps_(comps), data_(g.points() * comps, 0.0) {}

Field Field::sample(const Grid& g, int comps, const PointFn& fn) {
  Field f(g, comps);
  std::vector<double> buf(comps);
  for (int i3 = 0; i3 < g.n3; ++i3) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      for (int i1 = 0; i1 < g.n1; ++i1) {
        fn(i1 * g.spacing(0), i2 * g.spacing(1), i3 * g.spacing(2), buf);
        for (int c = 0; c < comps; ++c) f.at(c, i1, i2, i3) = buf[c];
      }
    }
  }
  return f;
}

double Field::min(int c) const {
  auto v = comp(c);
  return *std::min_element(v.begin(), v.end());
}

double Field::max(int c) const {
  auto v = comp(c);
  return *std::max_element(v.begin(), v.end());
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Field::integral(int c) const {
  double s = 0.0;
  for (double v : comp(c)) s += v;
  return s * grid_.cell_volume();
}

Spectrum::Spectrum(const Grid& g, int comps)
    : grid_(g), comps_(comps), data_(g.modes() * comps, Complex(0.0, 0.0)) {}

namespace {
std::size_t mode_index(const Grid& g, int k1, int k2, int k3) {
  if (k1 < 0 || k1 > g.n1 / 2 || std::abs(k2) > g.n2 / 2 || std::abs(k3) > g.n3 / 2) {
    throw OutOfRange("wavenumber outside grid band");
  }
  const int i2 = k2 < 0 ? k2 + g.n2 : k2;
  const int i3 = k3 < 0 ? k3 + g.n3 : k3;
  return std::size_t(k1) + std::size_t(g.half1()) * (std::size_t(i2) + std::size_t(g.n2) * i3);
}
}  // namespace

Complex& Spectrum::mode(int c, int k1, int k2, int k3) {
  return data_[c * modes() + mode_index(grid_, k1, k2, k3)];
}

Complex Spectrum::mode(int c, int k1, int k2, int k3) const {
  return data_[c * modes() + mode_index(grid_, k1, k2, k3)];
}

Spectrum Spectrum::component(int c) const {
  Spectrum s(grid_, 1);
  auto src = comp(c);
  std::copy(src.begin(), src.end(), s.data_.begin());
  return s;
}

Spectrum& Spectrum::set_component(int c, const Spectrum& s) {
  auto src = s.comp(0);
  std::copy(src.begin(), src.end(), comp(c).begin());
  return *this;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double a) {
  for (auto& v : data_) v *= a;
  return *this;
}

Spectrum& Spectrum::axpy(double a, const Spectrum& x) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  return *this;
}

Spectrum stack(std::initializer_list<const Spectrum*> parts) {
  int comps = 0;
  for (const auto* p : parts) comps += p->comps();
  Spectrum out((*parts.begin())->grid(), comps);
  int c0 = 0;
  for (const auto* p : parts) {
    for (int c = 0; c < p->comps(); ++c) out.set_component(c0 + c, p->component(c));
    c0 += p->comps();
  }
  return out;
}

}  // namespace visco
