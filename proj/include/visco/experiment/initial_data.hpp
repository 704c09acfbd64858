#pragma once

#include "visco/experiment/config.hpp"

namespace visco::experiment {

/// Unprojected velocity of the recipe (mean not yet added).
Spectrum velocity_spec(const Grid& g, const VelocityRecipe& r, std::uint64_t seed);

/// Seeded noise with coefficient magnitudes ~ amplitude |k|^-4, |k| <= kmax, zero mean.
Spectrum spectral_noise(const Grid& g, double amplitude, int kmax, std::uint64_t seed);

/// eta0 and u0 for the configured model. Incompressible velocities are projected
/// against the initial geometry; compressible ones are used as given.
InitialData build_initial_data(const ExperimentConfig& c);

FlowState make_incompressible_state(const ExperimentConfig& c, const InitialData& d);
CompressibleState make_compressible_state(const ExperimentConfig& c, const InitialData& d);

}  // namespace visco::experiment
