/// @file grid.hpp
/// @brief Staggered (MAC) grid on the unit square and a 1D node grid.
///
/// Velocity components live on cell faces, scalars at cell centers.  With
/// homogeneous Dirichlet walls the normal velocity on boundary faces is
/// identically zero, which is what makes the discrete divergence and gradient
/// exact adjoints in the h^2-weighted inner product.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hrns {

/// Uniform staggered grid on [0,1]^2 with n x n cells, h = 1/n.
///
/// Site layout:
///   u1 (x-velocity): vertical faces,   (n+1) x n,  position (i*h, (j+1/2)*h)
///   u2 (y-velocity): horizontal faces, n x (n+1),  position ((i+1/2)*h, j*h)
///   p  (scalars):    cell centers,     n x n,      position ((i+1/2)*h, (j+1/2)*h)
struct MacGrid2D {
    int n = 0;
    double h = 0.0;

    MacGrid2D() = default;
    explicit MacGrid2D(int n_) : n(n_), h(1.0 / n_) {}

    bool operator==(const MacGrid2D&) const = default;

    std::size_t n_u1() const { return std::size_t(n + 1) * n; }
    std::size_t n_u2() const { return std::size_t(n) * (n + 1); }
    std::size_t n_cells() const { return std::size_t(n) * n; }
    std::size_t n_corners() const { return std::size_t(n + 1) * (n + 1); }
};

/// Build a MAC grid instance.  n must be even and at least 8 (coarser grids
/// cannot resolve the staggered boundary closure meaningfully).
MacGrid2D make_mac_grid(int n);

/// Uniform 1D node grid: n intervals, n+1 nodes x_i = x0 + i*h, h = length/n.
/// End nodes carry Dirichlet values (pinned to zero by the Burgers solver).
struct Grid1D {
    double x0 = 0.0;
    double length = 0.0;
    int n = 0;
    double h = 0.0;

    Grid1D() = default;
    Grid1D(double x0_, double length_, int n_)
        : x0(x0_), length(length_), n(n_), h(length_ / n_) {
        if (n_ < 4) throw std::invalid_argument("Grid1D: need at least 4 intervals");
        if (length_ <= 0.0) throw std::invalid_argument("Grid1D: length must be positive");
    }

    bool operator==(const Grid1D&) const = default;

    int n_nodes() const { return n + 1; }
    double x(int i) const { return x0 + i * h; }
};

} // namespace hrns
