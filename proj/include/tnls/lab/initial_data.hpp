#pragma once

#include <cstdint>

#include "tnls/field.hpp"
#include "tnls/lab/config.hpp"
#include "tnls/profiles.hpp"

namespace tnls::lab {

/// A e^{i omega(n) . x}.
PhysicalField single_mode_data(const TorusGeometry& geometry, const Mode& mode, cplx amplitude);

/// Complex Gaussian coefficients weighted by <n>^{-3} on |n_i| <= band, rescaled to the
/// requested H1 norm. Deterministic for a given seed.
SpectralField random_h1_data(const TorusGeometry& geometry, int band, double h1_norm, std::uint64_t seed);

EuclideanProfile profile_by_name(const std::string& name, double amplitude, double width);

/// Builds the [data] field of a config: constant, single_mode, random_h1, torus_bubble or sum_of_bubbles.
PhysicalField make_initial_data(const Config& config, const TorusGeometry& geometry);

}  // namespace tnls::lab
