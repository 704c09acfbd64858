#pragma once

#include <utility>
#include <vector>

#include "visco/spectral/field.hpp"
#include "visco/spectral/padded.hpp"

namespace visco {

struct PackOptions {
  /// Packs with min J at or below this floor are flagged invalid.
  double j_floor = 0.1;
  /// Volume-preserving flows have J = 1 identically, and A is then exactly the
  /// cofactor matrix. Using it directly keeps d_k A_ik = 0 discretely, and
  /// A-divergences are then formed in conservative form d_k(A_lk X_l).
  bool unit_jacobian = false;
};

/// Geometry of the flow map zeta = y + eta: deformation gradient, Jacobian,
/// and A with A^T = (grad zeta)^{-1}, all band-limited on the base grid.
struct DeformationPack {
  Spectrum eta;        // 3
  Spectrum grad_zeta;  // 9, (i,j) = delta_ij + d_j eta_i
  Spectrum jac;        // 1
  Spectrum cof;        // 9, cofactor matrix of grad zeta (= J A)
  Spectrum amat;       // 9
  Spectrum atilde;     // 9, A - I
  double min_jac = 1.0;
  double max_jac = 1.0;
  bool valid = true;
  PackOptions options;

  /// A and A - I sampled on the degree-2 product grid.
  ProductSpace space;
  Field amat_fine;
  Field atilde_fine;

  const Grid& grid() const { return eta.grid(); }
  /// Soft window 1/2 <= J <= 3/2 used by the analysis of compressible flows.
  bool in_analytic_window() const { return min_jac >= 0.5 && max_jac <= 1.5; }
};

/// Builds the pack. Throws SingularMap when min J <= 0.
DeformationPack build_pack(const Spectrum& eta, const PackOptions& opts = {});

// A-weighted operators. Scalars map to vectors and vectors to tensors with
// entry (i,l) = A_lk d_k f_i; divergence contracts the last index.
Spectrum a_gradient(const DeformationPack& pack, const Spectrum& f);
Spectrum a_divergence(const DeformationPack& pack, const Spectrum& x);
Spectrum a_laplacian(const DeformationPack& pack, const Spectrum& f);

// Same operators with A replaced by A - I.
Spectrum atilde_gradient(const DeformationPack& pack, const Spectrum& f);
Spectrum atilde_divergence(const DeformationPack& pack, const Spectrum& x);

/// Operators with an arbitrary matrix field sampled on a product grid.
Spectrum weighted_gradient(const ProductSpace& ps, const Field& mat, const Spectrum& f);
Spectrum weighted_divergence(const ProductSpace& ps, const Field& mat, const Spectrum& x);

/// max_i ||d_k (J A_ik)||_0 / ||J A||_0, evaluated with 2x padding.
double piola_residual(const DeformationPack& pack);

/// ||det(grad eta + I) - 1 - div eta - r_eta||_0 with
/// r_eta = ((div eta)^2 - tr((grad eta)^2))/2 + det grad eta, on the 2x grid.
double det_expansion_residual(const Spectrum& eta);

/// (||1/J - 1 + div eta||_0, ||grad eta||_2^2).
std::pair<double, double> jinv_expansion_residual(const Spectrum& eta);

/// Axis-aligned shear y -> y + amplitude * sin(wavenumber * y_axis + phase) e_component.
struct Shear {
  int component = 0;
  int axis = 1;
  double amplitude = 0.0;
  int wavenumber = 1;
  double phase = 0.0;
};

enum class EtaKind { Zero, Shear, ComposedShears };

/// Displacement of the composition S_n o ... o S_1 of the given shears,
/// sampled on the grid. Each shear preserves volume, so det(I + grad eta) = 1
/// up to band truncation. Throws SingularMap if the sampled map degenerates.
Spectrum make_volume_preserving_eta(const Grid& g, EtaKind kind, const std::vector<Shear>& shears);

}  // namespace visco
