#pragma once

#include "visco/spectral/field.hpp"

namespace visco {

/// Exact spectral derivative d/dy_axis of every component.
Spectrum partial(const Spectrum& f, int axis);

/// Rank-raising gradient: entry 3c+j holds d_j of component c (for a vector,
/// (i,j) = d_j f_i).
Spectrum gradient(const Spectrum& f);

/// Contracts the last index: vector -> scalar (div v), tensor -> vector (d_k T_ik).
Spectrum divergence(const Spectrum& f);

Spectrum laplacian(const Spectrum& f);

/// Solves Lap(x) = f for zero-mean x. Throws NonZeroMean when the mean of any
/// component exceeds rel_tol * ||f||_0 (relative to the box average).
Spectrum inverse_laplacian(const Spectrum& f, double rel_tol = 1e-12);

/// Projection onto divergence-free fields, P_k = I - k k^T/|k|^2; the mean is kept.
Spectrum leray_project(const Spectrum& v);

/// Full H^k norm: (sum over multi-indices |alpha| <= k of ||d^alpha f||_0^2)^(1/2).
double sobolev_norm(const Spectrum& f, int k);
double sobolev_norm_squared(const Spectrum& f, int k);

/// ||grad^m f||_0^2 with grad^m the full tensor of m-th derivatives (sum |k|^{2m}|f_k|^2).
double gradient_power_squared(const Spectrum& f, int m);

/// sum_{|alpha| = m} int d^alpha a . d^alpha b dy, one term per multi-index.
double multi_index_inner(const Spectrum& a, const Spectrum& b, int m);

/// L2 inner product of two equally shaped spectra.
double inner(const Spectrum& a, const Spectrum& b);

/// ||f||_0 by quadrature in physical space.
double l2_norm_physical(const Field& f);

/// Box average of each component of f.
std::vector<double> box_average(const Spectrum& f);

}  // namespace visco
