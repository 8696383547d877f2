/// @file operators.hpp
/// @brief First-order staggered difference operators and the vector Laplacian.
///
/// Conventions:
///   * discrete_divergence maps faces -> centers and discrete_gradient maps
///     centers -> interior faces; they satisfy <grad p, v> = -<p, div v>
///     exactly (summation by parts; boundary faces are zero).
///   * div(grad p) is the standard 5-point Laplacian with homogeneous Neumann
///     closure at the walls (boundary faces of grad are zero).
///   * laplacian_velocity is the componentwise 5-point Laplacian with Dirichlet
///     walls: normal components use the stored zero boundary faces, tangential
///     ghosts use linear reflection u_ghost = -u_inner.

#pragma once

#include "hrns/field.hpp"

namespace hrns {

/// (div v)_{ij} = (u1(i+1,j)-u1(i,j))/h + (u2(i,j+1)-u2(i,j))/h
ScalarField discrete_divergence(const VelocityField& v);

/// (grad p)^1(i,j) = (p(i,j)-p(i-1,j))/h on interior vertical faces, zero on
/// boundary faces; analogously for the second component.
VelocityField discrete_gradient(const ScalarField& p);

/// Componentwise 5-point Laplacian with Dirichlet ghost closure.
VelocityField laplacian_velocity(const VelocityField& v);

/// div(grad p): 5-point Neumann Laplacian on cell centers.
ScalarField laplacian_neumann(const ScalarField& p);

/// Conservative-form advection div(u (x) u) with two-point face averages.
/// For discretely divergence-free u this is skew: <div(u(x)u), u> = 0 up to
/// roundoff and the projection residual.
VelocityField advect_conservative(const VelocityField& u);

/// Symmetric strain rate gamma(u) = (grad u + grad^T u)/2 at cell centers.
/// The shear component is assembled from the natural corner differences
/// (tangential ghosts by linear reflection) and averaged to centers.
SymTensorField strain_rate(const VelocityField& u);

/// Tensor divergence (div sigma) to faces, built as the exact negative adjoint
/// of strain_rate: <div sigma, u> = -<sigma, gamma(u)> in the Frobenius
/// pairing.  This is what makes the Jeffrey energy identity hold in space.
VelocityField div_tensor(const SymTensorField& s);

/// grad(div u): the alpha-penalty operator; <grad(div u), u> = -||div u||^2.
VelocityField grad_div(const VelocityField& u);

} // namespace hrns
