/// @file operators.cpp

#include "hrns/operators.hpp"

#include <cassert>
#include <vector>

namespace hrns {

ScalarField discrete_divergence(const VelocityField& v) {
    const MacGrid2D& g = v.grid();
    const int n = g.n;
    const double ih = 1.0 / g.h;
    ScalarField d(g);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            d.p(i, j) = ih * (v.u1(i + 1, j) - v.u1(i, j) + v.u2(i, j + 1) - v.u2(i, j));
    return d;
}

VelocityField discrete_gradient(const ScalarField& p) {
    const MacGrid2D& g = p.grid();
    const int n = g.n;
    const double ih = 1.0 / g.h;
    VelocityField grad(g);
    for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i)
            grad.u1(i, j) = ih * (p.p(i, j) - p.p(i - 1, j));
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i)
            grad.u2(i, j) = ih * (p.p(i, j) - p.p(i, j - 1));
    return grad;
}

VelocityField laplacian_velocity(const VelocityField& v) {
    const MacGrid2D& g = v.grid();
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    VelocityField lap(g);
    // u1: interior vertical faces; tangential ghosts reflect across y-walls.
    for (int j = 0; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            const double c = v.u1(i, j);
            const double dn = (j > 0) ? v.u1(i, j - 1) : -c;
            const double up = (j < n - 1) ? v.u1(i, j + 1) : -c;
            lap.u1(i, j) = ih2 * (v.u1(i - 1, j) + v.u1(i + 1, j) + dn + up - 4.0 * c);
        }
    }
    // u2: interior horizontal faces; tangential ghosts reflect across x-walls.
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double c = v.u2(i, j);
            const double lf = (i > 0) ? v.u2(i - 1, j) : -c;
            const double rt = (i < n - 1) ? v.u2(i + 1, j) : -c;
            lap.u2(i, j) = ih2 * (lf + rt + v.u2(i, j - 1) + v.u2(i, j + 1) - 4.0 * c);
        }
    }
    return lap;
}

ScalarField laplacian_neumann(const ScalarField& p) {
    const MacGrid2D& g = p.grid();
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    ScalarField lap(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double c = p.p(i, j);
            double s = 0.0;
            if (i > 0) s += p.p(i - 1, j) - c;
            if (i < n - 1) s += p.p(i + 1, j) - c;
            if (j > 0) s += p.p(i, j - 1) - c;
            if (j < n - 1) s += p.p(i, j + 1) - c;
            lap.p(i, j) = ih2 * s;
        }
    }
    return lap;
}

VelocityField advect_conservative(const VelocityField& u) {
    const MacGrid2D& g = u.grid();
    const int n = g.n;
    const double ih = 1.0 / g.h;
    VelocityField out(g);

    // Corner flux G = (y-avg u1)(x-avg u2); identically zero on wall corners
    // because both averages vanish there (reflection resp. pinned faces).
    std::vector<double> G(g.n_corners(), 0.0);
    auto cidx = [n](int i, int j) { return std::size_t(j) * (n + 1) + i; };
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i)
            G[cidx(i, j)] = 0.5 * (u.u1(i, j - 1) + u.u1(i, j)) *
                            0.5 * (u.u2(i - 1, j) + u.u2(i, j));

    // u1-momentum: d/dx of cell-centered (x-avg u1)^2 plus d/dy of G.
    for (int j = 0; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            const double qr = 0.5 * (u.u1(i, j) + u.u1(i + 1, j));
            const double ql = 0.5 * (u.u1(i - 1, j) + u.u1(i, j));
            out.u1(i, j) = ih * (qr * qr - ql * ql) +
                           ih * (G[cidx(i, j + 1)] - G[cidx(i, j)]);
        }
    }
    // u2-momentum: d/dy of (y-avg u2)^2 plus d/dx of G.
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double qt = 0.5 * (u.u2(i, j) + u.u2(i, j + 1));
            const double qb = 0.5 * (u.u2(i, j - 1) + u.u2(i, j));
            out.u2(i, j) = ih * (qt * qt - qb * qb) +
                           ih * (G[cidx(i + 1, j)] - G[cidx(i, j)]);
        }
    }
    return out;
}

namespace {

/// Natural corner shear 0.5*(dy u1 + dx u2) on the (n+1)^2 corner lattice,
/// with linear-reflection ghosts at the walls.
std::vector<double> corner_shear(const VelocityField& u) {
    const MacGrid2D& g = u.grid();
    const int n = g.n;
    const double ih = 1.0 / g.h;
    std::vector<double> gc(g.n_corners());
    auto cidx = [n](int i, int j) { return std::size_t(j) * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double dyu1;
            if (j == 0) dyu1 = 2.0 * u.u1(i, 0) * ih;
            else if (j == n) dyu1 = -2.0 * u.u1(i, n - 1) * ih;
            else dyu1 = (u.u1(i, j) - u.u1(i, j - 1)) * ih;
            double dxu2;
            if (i == 0) dxu2 = 2.0 * u.u2(0, j) * ih;
            else if (i == n) dxu2 = -2.0 * u.u2(n - 1, j) * ih;
            else dxu2 = (u.u2(i, j) - u.u2(i - 1, j)) * ih;
            gc[cidx(i, j)] = 0.5 * (dyu1 + dxu2);
        }
    }
    return gc;
}

/// Center -> corner interpolation with one-sided closure (mean over the 1, 2
/// or 4 adjacent cells).  Chosen as the exact adjoint of the corner -> center
/// 4-point average under half-weighted wall corners, so that div_tensor and
/// strain_rate pair exactly.
std::vector<double> centers_to_corners(const std::vector<double>& s, int n) {
    std::vector<double> c(std::size_t(n + 1) * (n + 1));
    auto sidx = [n](int i, int j) { return std::size_t(j) * n + i; };
    auto cidx = [n](int i, int j) { return std::size_t(j) * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double sum = 0.0;
            int cnt = 0;
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    const int ci = i + di, cj = j + dj;
                    if (ci >= 0 && ci < n && cj >= 0 && cj < n) {
                        sum += s[sidx(ci, cj)];
                        ++cnt;
                    }
                }
            c[cidx(i, j)] = sum / cnt;
        }
    }
    return c;
}

} // namespace

SymTensorField strain_rate(const VelocityField& u) {
    const MacGrid2D& g = u.grid();
    const int n = g.n;
    const double ih = 1.0 / g.h;
    SymTensorField gam(g);
    auto sidx = [n](int i, int j) { return std::size_t(j) * n + i; };
    auto cidx = [n](int i, int j) { return std::size_t(j) * (n + 1) + i; };
    const std::vector<double> gc = corner_shear(u);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            gam.s11[sidx(i, j)] = ih * (u.u1(i + 1, j) - u.u1(i, j));
            gam.s22[sidx(i, j)] = ih * (u.u2(i, j + 1) - u.u2(i, j));
            gam.s12[sidx(i, j)] = 0.25 * (gc[cidx(i, j)] + gc[cidx(i + 1, j)] +
                                          gc[cidx(i, j + 1)] + gc[cidx(i + 1, j + 1)]);
        }
    }
    return gam;
}

VelocityField div_tensor(const SymTensorField& s) {
    const MacGrid2D& g = s.grid;
    const int n = g.n;
    const double ih = 1.0 / g.h;
    VelocityField out(g);
    auto sidx = [n](int i, int j) { return std::size_t(j) * n + i; };
    auto cidx = [n](int i, int j) { return std::size_t(j) * (n + 1) + i; };
    const std::vector<double> s12c = centers_to_corners(s.s12, n);
    for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i)
            out.u1(i, j) = ih * (s.s11[sidx(i, j)] - s.s11[sidx(i - 1, j)]) +
                           ih * (s12c[cidx(i, j + 1)] - s12c[cidx(i, j)]);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.u2(i, j) = ih * (s12c[cidx(i + 1, j)] - s12c[cidx(i, j)]) +
                           ih * (s.s22[sidx(i, j)] - s.s22[sidx(i, j - 1)]);
    return out;
}

VelocityField grad_div(const VelocityField& u) {
    return discrete_gradient(discrete_divergence(u));
}

} // namespace hrns
