#pragma once

#include "visco/spectral/field.hpp"

namespace visco {

/// Physical -> spectral, normalized by the point count. Exact inverse of backward.
Spectrum forward(const Field& f);
/// Spectral -> physical (unnormalized synthesis).
Field backward(const Spectrum& s);

}  // namespace visco
