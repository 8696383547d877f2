/// @file field.cpp

#include "hrns/field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hrns {

void VelocityField::apply_boundary() {
    const int n = grid_.n;
    for (int j = 0; j < n; ++j) {
        u1(0, j) = 0.0;
        u1(n, j) = 0.0;
    }
    for (int i = 0; i < n; ++i) {
        u2(i, 0) = 0.0;
        u2(i, n) = 0.0;
    }
}

void VelocityField::fill(double v) {
    std::fill(u1_.begin(), u1_.end(), v);
    std::fill(u2_.begin(), u2_.end(), v);
    apply_boundary();
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t k = 0; k < u1_.size(); ++k) u1_[k] += o.u1_[k];
    for (std::size_t k = 0; k < u2_.size(); ++k) u2_[k] += o.u2_[k];
    return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t k = 0; k < u1_.size(); ++k) u1_[k] -= o.u1_[k];
    for (std::size_t k = 0; k < u2_.size(); ++k) u2_[k] -= o.u2_[k];
    return *this;
}

VelocityField& VelocityField::operator*=(double a) {
    for (double& x : u1_) x *= a;
    for (double& x : u2_) x *= a;
    return *this;
}

void ScalarField::fill(double v) { std::fill(p_.begin(), p_.end(), v); }

double ScalarField::mean() const {
    double s = 0.0;
    for (double x : p_) s += x;
    return s / double(p_.size());
}

void ScalarField::remove_mean() {
    const double m = mean();
    for (double& x : p_) x -= m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t k = 0; k < p_.size(); ++k) p_[k] += o.p_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t k = 0; k < p_.size(); ++k) p_[k] -= o.p_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (double& x : p_) x *= a;
    return *this;
}

SymTensorField& SymTensorField::operator+=(const SymTensorField& o) {
    assert(grid == o.grid);
    for (std::size_t k = 0; k < s11.size(); ++k) {
        s11[k] += o.s11[k];
        s12[k] += o.s12[k];
        s22[k] += o.s22[k];
    }
    return *this;
}

SymTensorField& SymTensorField::operator*=(double a) {
    for (std::size_t k = 0; k < s11.size(); ++k) {
        s11[k] *= a;
        s12[k] *= a;
        s22[k] *= a;
    }
    return *this;
}

double dot(const VelocityField& a, const VelocityField& b) {
    assert(a.grid() == b.grid());
    const double h2 = a.grid().h * a.grid().h;
    double s = 0.0;
    const auto& a1 = a.u1_data();
    const auto& b1 = b.u1_data();
    for (std::size_t k = 0; k < a1.size(); ++k) s += a1[k] * b1[k];
    const auto& a2 = a.u2_data();
    const auto& b2 = b.u2_data();
    for (std::size_t k = 0; k < a2.size(); ++k) s += a2[k] * b2[k];
    return h2 * s;
}

double dot(const ScalarField& a, const ScalarField& b) {
    assert(a.grid() == b.grid());
    const double h2 = a.grid().h * a.grid().h;
    double s = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
    return h2 * s;
}

double norm_l2(const VelocityField& a) { return std::sqrt(dot(a, a)); }
double norm_l2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const VelocityField& a) {
    double m = 0.0;
    for (double x : a.u1_data()) m = std::max(m, std::abs(x));
    for (double x : a.u2_data()) m = std::max(m, std::abs(x));
    return m;
}

double dot(const SymTensorField& a, const SymTensorField& b) {
    assert(a.grid == b.grid);
    const double h2 = a.grid.h * a.grid.h;
    double s = 0.0;
    for (std::size_t k = 0; k < a.s11.size(); ++k)
        s += a.s11[k] * b.s11[k] + 2.0 * a.s12[k] * b.s12[k] + a.s22[k] * b.s22[k];
    return h2 * s;
}

double norm_l2(const SymTensorField& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const VelocityField& x, VelocityField& y) {
    assert(x.grid() == y.grid());
    const auto& x1 = x.u1_data();
    auto& y1 = y.u1_data();
    for (std::size_t k = 0; k < x1.size(); ++k) y1[k] += a * x1[k];
    const auto& x2 = x.u2_data();
    auto& y2 = y.u2_data();
    for (std::size_t k = 0; k < x2.size(); ++k) y2[k] += a * x2[k];
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
    assert(x.grid() == y.grid());
    for (std::size_t k = 0; k < x.data().size(); ++k) y.data()[k] += a * x.data()[k];
}

void axpy(double a, const SymTensorField& x, SymTensorField& y) {
    assert(x.grid == y.grid);
    for (std::size_t k = 0; k < x.s11.size(); ++k) {
        y.s11[k] += a * x.s11[k];
        y.s12[k] += a * x.s12[k];
        y.s22[k] += a * x.s22[k];
    }
}

double support_radius(const VelocityField& v, double cx, double cy, double threshold) {
    const int n = v.grid().n;
    const double h = v.grid().h;
    double r2 = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i)
            if (std::abs(v.u1(i, j)) > threshold) {
                const double dx = i * h - cx;
                const double dy = (j + 0.5) * h - cy;
                r2 = std::max(r2, dx * dx + dy * dy);
            }
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i)
            if (std::abs(v.u2(i, j)) > threshold) {
                const double dx = (i + 0.5) * h - cx;
                const double dy = j * h - cy;
                r2 = std::max(r2, dx * dx + dy * dy);
            }
    return std::sqrt(r2);
}

void write_field_csv(std::ostream& os, const VelocityField& v, const ScalarField* p) {
    const int n = v.grid().n;
    char buf[64];
    os << "site_type,i,j,value\n";
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", v.u1(i, j));
            os << "u1," << i << ',' << j << ',' << buf << '\n';
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", v.u2(i, j));
            os << "u2," << i << ',' << j << ',' << buf << '\n';
        }
    if (p) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", p->p(i, j));
                os << "p," << i << ',' << j << ',' << buf << '\n';
            }
    }
}

} // namespace hrns
