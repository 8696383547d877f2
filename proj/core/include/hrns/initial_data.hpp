/// @file initial_data.hpp
/// @brief Deterministic, seeded field generators for runs and tests.

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "hrns/stokes.hpp"

namespace hrns {

/// Discrete curl of a streamfunction sampled at grid corners:
///   u1 = d(psi)/dy, u2 = -d(psi)/dx.
/// The result is divergence-free to roundoff; if psi vanishes on the boundary
/// the wall-normal faces vanish as well.
VelocityField curl_of_streamfunction(const MacGrid2D& g,
                                     const std::function<double(double, double)>& psi);

struct DataSpec {
    std::string kind = "zero"; // zero | vortex | eigenmode | random_smooth | bump
    double amplitude = 0.0;
};

/// Build a velocity field from a spec.
///   zero          - the zero field (amplitude ignored)
///   vortex        - curl of sin^2(pi x) sin^2(pi y), scaled to L2 norm = amplitude
///   eigenmode     - amplitude * principal Stokes mode (unit L2 norm)
///   random_smooth - curl of a random low-mode sine streamfunction (seeded),
///                   scaled to L2 norm = amplitude
///   bump          - compactly supported radial bump in the u1 component only
///                   (pointwise amplitude; NOT divergence-free, meant for the
///                   penalized model)
/// Seeded generation is bit-reproducible: the same (kind, amplitude, seed, n)
/// always yields the same field.
VelocityField make_initial_field(const StokesContext& ctx, const DataSpec& spec, std::uint64_t seed);

/// Uniform double in [-1, 1) from a 64-bit state; hand-rolled so that streams
/// do not depend on the standard library's distribution implementation.
double next_unit(std::uint64_t& state);

} // namespace hrns
