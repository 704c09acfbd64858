#include "visco/spectral/padded.hpp"

#include <cstdlib>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral/fft.hpp"

namespace visco {

namespace {

bool in_band(const Grid& g, int degree, int k1, int k2, int k3) {
  auto ok = [degree](int k, int n) {
    return degree >= 3 ? 4 * std::abs(k) <= n : 3 * std::abs(k) < n;
  };
  return ok(k1, g.n1) && ok(k2, g.n2) && ok(k3, g.n3);
}

std::size_t fine_index(const Grid& f, int k1, int k2, int k3) {
  const int i2 = k2 < 0 ? k2 + f.n2 : k2;
  const int i3 = k3 < 0 ? k3 + f.n3 : k3;
  return std::size_t(k1) + std::size_t(f.half1()) * (std::size_t(i2) + std::size_t(f.n2) * i3);
}

}  // namespace

ProductSpace::ProductSpace(const Grid& base, int degree)
    : base_(base), fine_(base.product_grid(degree)), degree_(degree) {}

ProductSpace::ProductSpace(const Grid& base, const Grid& fine)
    : base_(base), fine_(fine), degree_(2) {
  if (fine.n1 < base.n1 || fine.n2 < base.n2 || fine.n3 < base.n3) {
    throw ConfigError("product grid must not be coarser than the base grid");
  }
}

Field ProductSpace::lift(const Spectrum& s) const {
  if (fine_.same_shape(base_)) {
    if (base_.dealias == Dealias::TwoThirds) {
      Spectrum t = s;
      band_filter(t, degree_);
      return backward(t);
    }
    return backward(s);
  }
  Spectrum big(fine_, s.comps());
  const std::size_t nb = base_.modes();
  for (int c = 0; c < s.comps(); ++c) {
    const Complex* src = s.comp(c).data();
    Complex* dst = big.comp(c).data();
    for (std::size_t m = 0; m < nb; ++m) {
      const auto k = kernels::decode_mode(base_, m);
      if (k.nyquist) continue;
      dst[fine_index(fine_, k.k1, k.k2, k.k3)] = src[m];
    }
  }
  return backward(big);
}

Spectrum ProductSpace::restrict(const Field& fine) const {
  Spectrum big = forward(fine);
  if (fine_.same_shape(base_)) {
    if (base_.dealias == Dealias::TwoThirds) band_filter(big, degree_);
    zero_nyquist(big);
    return big;
  }
  Spectrum out(base_, fine.comps());
  const std::size_t nb = base_.modes();
  for (int c = 0; c < fine.comps(); ++c) {
    const Complex* src = big.comp(c).data();
    Complex* dst = out.comp(c).data();
    for (std::size_t m = 0; m < nb; ++m) {
      const auto k = kernels::decode_mode(base_, m);
      if (k.nyquist) continue;
      dst[m] = src[fine_index(fine_, k.k1, k.k2, k.k3)];
    }
  }
  return out;
}

void zero_nyquist(Spectrum& s) {
  const Grid& g = s.grid();
  const std::size_t nm = g.modes();
  for (std::size_t m = 0; m < nm; ++m) {
    if (!kernels::decode_mode(g, m).nyquist) continue;
    for (int c = 0; c < s.comps(); ++c) s.comp(c)[m] = 0.0;
  }
}

void band_filter(Spectrum& f, int degree) {
  const Grid& g = f.grid();
  const std::size_t nm = g.modes();
  for (std::size_t m = 0; m < nm; ++m) {
    const auto k = kernels::decode_mode(g, m);
    if (!k.nyquist && in_band(g, degree, k.k1, k.k2, k.k3)) continue;
    for (int c = 0; c < f.comps(); ++c) f.comp(c)[m] = 0.0;
  }
}

Spectrum dealias(const Spectrum& f, int degree) {
  Spectrum out = f;
  if (f.grid().dealias == Dealias::TwoThirds) band_filter(out, degree);
  return out;
}

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
  ProductSpace ps(a.grid(), 2);
  Field fa = ps.lift(a), fb = ps.lift(b);
  Field prod(ps.fine(), 1);
  auto pa = fa.comp(0), pb = fb.comp(0);
  auto out = prod.comp(0);
  kernels::for_each_index(out.size(), kernels::Exec::Parallel,
                          [&](std::size_t i) { out[i] = pa[i] * pb[i]; });
  return ps.restrict(prod);
}

}  // namespace visco
