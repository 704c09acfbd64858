#pragma once

#include "visco/spectral/field.hpp"

namespace visco {

/// Physical space used to form nonlinear products of band-limited fields.
/// Inputs are zero-padded onto a finer grid (or band-filtered on the base grid
/// in two-thirds mode); results are transformed back and truncated to the base
/// band with Nyquist planes cleared.
class ProductSpace {
 public:
  ProductSpace() = default;
  ProductSpace(const Grid& base, int degree);
  ProductSpace(const Grid& base, const Grid& fine);

  const Grid& base() const { return base_; }
  const Grid& fine() const { return fine_; }

  Field lift(const Spectrum& s) const;
  Spectrum restrict(const Field& fine) const;

 private:
  Grid base_;
  Grid fine_;
  int degree_ = 2;
};

/// Clears the Nyquist planes (k = -n/2 on any axis).
void zero_nyquist(Spectrum& s);

/// Keeps the alias-free band for a product of the given degree on the base grid
/// (|k_i| < n_i/3 for degree 2, |k_i| <= n_i/4 for degree 3) when the grid uses
/// two-thirds dealiasing; padded grids form products on the fine grid instead,
/// so the field is returned unchanged.
Spectrum dealias(const Spectrum& f, int degree);

/// Band filter applied unconditionally (used by two-thirds mode and tests).
void band_filter(Spectrum& f, int degree);

/// Pointwise product of two scalar spectra under the grid's dealias mode.
Spectrum multiply(const Spectrum& a, const Spectrum& b);

}  // namespace visco
