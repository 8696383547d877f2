/// @file initial_data.cpp

#include "hrns/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace hrns {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double next_unit(std::uint64_t& state) {
    // splitmix64 step; top 53 bits -> [0,1), then shift to [-1,1).
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    const double u = double(z >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

VelocityField curl_of_streamfunction(const MacGrid2D& g,
                                     const std::function<double(double, double)>& psi) {
    const int n = g.n;
    const double h = g.h;
    VelocityField v(g);
    for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i)
            v.u1(i, j) = (psi(i * h, (j + 1) * h) - psi(i * h, j * h)) / h;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i)
            v.u2(i, j) = -(psi((i + 1) * h, j * h) - psi(i * h, j * h)) / h;
    return v;
}

VelocityField make_initial_field(const StokesContext& ctx, const DataSpec& spec, std::uint64_t seed) {
    const MacGrid2D& g = ctx.grid();

    if (spec.kind == "zero") return VelocityField(g);

    if (spec.kind == "vortex") {
        VelocityField v = curl_of_streamfunction(g, [](double x, double y) {
            const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
            return sx * sx * sy * sy;
        });
        const double nv = norm_l2(v);
        if (nv > 0.0) v *= spec.amplitude / nv;
        return v;
    }

    if (spec.kind == "eigenmode") {
        VelocityField v = estimate_lambda1(ctx).mode;
        v *= spec.amplitude;
        return v;
    }

    if (spec.kind == "random_smooth") {
        // Low-mode random streamfunction; 1/(k^2+l^2) keeps it smooth in H^2.
        std::uint64_t st = seed ^ 0xA5A5A5A55A5A5A5Aull;
        double c[4][4];
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
                c[k][l] = next_unit(st) / double((k + 1) * (k + 1) + (l + 1) * (l + 1));
        VelocityField v = curl_of_streamfunction(g, [&c](double x, double y) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    s += c[k][l] * std::sin((k + 1) * kPi * x) * std::sin((l + 1) * kPi * y);
            return s;
        });
        const double nv = norm_l2(v);
        if (nv > 0.0) v *= spec.amplitude / nv;
        return v;
    }

    if (spec.kind == "bump") {
        VelocityField v(g);
        const double cx = 0.5, cy = 0.5, r0 = 0.15;
        const int n = g.n;
        for (int j = 0; j < n; ++j)
            for (int i = 1; i < n; ++i) {
                const double x = i * g.h, y = (j + 0.5) * g.h;
                const double r = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy)) / r0;
                if (r < 1.0) {
                    const double q = 1.0 - r * r;
                    v.u1(i, j) = spec.amplitude * q * q * q;
                }
            }
        return v;
    }

    throw std::invalid_argument("make_initial_field: unknown kind '" + spec.kind + "'");
}

} // namespace hrns
