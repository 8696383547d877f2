/// @file field.hpp
/// @brief Value-type fields on the MAC grid: velocities, scalars, symmetric tensors.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hrns/grid.hpp"

namespace hrns {

/// Staggered velocity field.  Boundary faces (normal components on the walls)
/// are kept identically zero; every constructor and every operation that could
/// touch them re-applies the constraint.
class VelocityField {
public:
    VelocityField() = default;
    explicit VelocityField(const MacGrid2D& g)
        : grid_(g), u1_(g.n_u1(), 0.0), u2_(g.n_u2(), 0.0) {}

    const MacGrid2D& grid() const { return grid_; }

    // u1 is (n+1) x n: i in [0,n], j in [0,n-1].  i indexes x, fastest.
    double& u1(int i, int j) { return u1_[std::size_t(j) * (grid_.n + 1) + i]; }
    double u1(int i, int j) const { return u1_[std::size_t(j) * (grid_.n + 1) + i]; }

    // u2 is n x (n+1): i in [0,n-1], j in [0,n].
    double& u2(int i, int j) { return u2_[std::size_t(j) * grid_.n + i]; }
    double u2(int i, int j) const { return u2_[std::size_t(j) * grid_.n + i]; }

    std::vector<double>& u1_data() { return u1_; }
    std::vector<double>& u2_data() { return u2_; }
    const std::vector<double>& u1_data() const { return u1_; }
    const std::vector<double>& u2_data() const { return u2_; }

    /// Zero the wall-normal boundary faces (u1 at i=0,n; u2 at j=0,n).
    void apply_boundary();

    void fill(double v);

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator-=(const VelocityField& o);
    VelocityField& operator*=(double a);

    friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
    friend VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
    friend VelocityField operator*(double a, VelocityField v) { return v *= a; }

private:
    MacGrid2D grid_;
    std::vector<double> u1_, u2_;
};

/// Cell-centered scalar field (n x n).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const MacGrid2D& g) : grid_(g), p_(g.n_cells(), 0.0) {}

    const MacGrid2D& grid() const { return grid_; }

    double& p(int i, int j) { return p_[std::size_t(j) * grid_.n + i]; }
    double p(int i, int j) const { return p_[std::size_t(j) * grid_.n + i]; }

    std::vector<double>& data() { return p_; }
    const std::vector<double>& data() const { return p_; }

    void fill(double v);
    double mean() const;
    void remove_mean();

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

private:
    MacGrid2D grid_;
    std::vector<double> p_;
};

/// Symmetric 2x2 tensor field at cell centers; the off-diagonal entry is
/// stored once (s12 == s21 structurally).
struct SymTensorField {
    MacGrid2D grid;
    std::vector<double> s11, s12, s22;

    SymTensorField() = default;
    explicit SymTensorField(const MacGrid2D& g)
        : grid(g), s11(g.n_cells(), 0.0), s12(g.n_cells(), 0.0), s22(g.n_cells(), 0.0) {}

    SymTensorField& operator+=(const SymTensorField& o);
    SymTensorField& operator*=(double a);
};

// ---- h^2-weighted inner products and norms --------------------------------
// These are the discrete L^2 pairings; all adjointness statements in
// operators.hpp/stokes.hpp are with respect to them.

double dot(const VelocityField& a, const VelocityField& b);
double dot(const ScalarField& a, const ScalarField& b);
double norm_l2(const VelocityField& a);
double norm_l2(const ScalarField& a);
double norm_inf(const VelocityField& a);

/// Frobenius pairing h^2 * sum(s11*t11 + 2*s12*t12 + s22*t22).
double dot(const SymTensorField& a, const SymTensorField& b);
double norm_l2(const SymTensorField& a);

/// y += a*x
void axpy(double a, const VelocityField& x, VelocityField& y);
void axpy(double a, const ScalarField& x, ScalarField& y);
void axpy(double a, const SymTensorField& x, SymTensorField& y);

/// Largest distance from (cx, cy) to a face site carrying |value| above the
/// threshold; 0 when no site does.  Front-speed measurements fit a line
/// through this radius over time.
double support_radius(const VelocityField& v, double cx, double cy, double threshold);

/// Dump all sites as CSV rows "site_type,i,j,value" with deterministic row
/// order: sorted by (site_type, i, j); site_type blocks are u1, u2, p.
void write_field_csv(std::ostream& os, const VelocityField& v, const ScalarField* p = nullptr);

} // namespace hrns
