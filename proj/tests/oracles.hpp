#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include "softwg/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

struct ClosestPoint {
    double s = 0.0;
    double distance = 0.0;
};

// closest point on the curve by dense sampling plus golden-section refinement
inline ClosestPoint closest_on_curve(const softwg::WaveguideGeometry& g, softwg::Vec2 p) {
    const double reach = std::hypot(p.x, p.y) + 12.0 * g.R + 50.0;
    const int samples = 40001;
    const double step = 2.0 * reach / (samples - 1);
    double best_s = -reach, best_d = (p - g.point(-reach)).norm();
    for (int i = 1; i < samples; ++i) {
        const double s = -reach + i * step;
        const double d = (p - g.point(s)).norm();
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    double lo = best_s - step, hi = best_s + step;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = (p - g.point(c)).norm(), fd = (p - g.point(d)).norm();
    while (hi - lo > 1e-13 * (1.0 + std::abs(best_s))) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = (p - g.point(c)).norm();
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = (p - g.point(d)).norm();
        }
    }
    const double s = 0.5 * (lo + hi);
    return {s, (p - g.point(s)).norm()};
}

// ground energy of the even bound state of a square well of depth V0 and
// half-width a: root of sqrt(-E) = sqrt(V0+E) tan(sqrt(V0+E) a) in (-V0, 0)
inline double square_well_ground_energy(double V0, double a) {
    auto f = [&](double e) {
        const double k = std::sqrt(V0 + e);
        return std::sqrt(-e) - k * std::tan(k * a);
    };
    // keep k*a below pi/2 so tan stays on the first branch
    const double cap = (M_PI / 2.0 - 1e-9) / a;
    double lo = -V0 + 1e-13 * V0;
    double hi = std::min(-1e-300, cap * cap - V0);
    if (f(lo) <= 0.0 || f(hi) >= 0.0) throw std::runtime_error("square well bracket failed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// matching tail amplitude of that analytic square-well ground state
inline double square_well_tail_amplitude(double V0, double a) {
    const double e = square_well_ground_energy(V0, a);
    const double k = std::sqrt(V0 + e), kap = std::sqrt(-e);
    // inside B cos(kt), outside N e^{-kap|t|}, matched at |t| = a, L2 norm 1
    const double inside = a + std::sin(2.0 * k * a) / (2.0 * k);
    const double cos_ka = std::cos(k * a);
    const double B = 1.0 / std::sqrt(inside + cos_ka * cos_ka / kap);
    return B * cos_ka * std::exp(kap * a);
}

// ground energy of twin delta wells of strength alpha at +-R:
// kappa = (|alpha|/2) (1 + e^{-2 kappa R}), E = -kappa^2
inline double twin_delta_ground_energy(double alpha, double R) {
    const double half = 0.5 * std::abs(alpha);
    double kappa = half;
    for (int it = 0; it < 200; ++it) {
        const double next = half * (1.0 + std::exp(-2.0 * kappa * R));
        if (std::abs(next - kappa) < 1e-16 * next) {
            kappa = next;
            break;
        }
        kappa = next;
    }
    return -kappa * kappa;
}

// eigenvalues of the 1D discrete Dirichlet Laplacian (n interior nodes,
// spacing h): (2 - 2 cos(k pi / (n+1))) / h^2, k = 1..n
inline std::vector<double> dirichlet_laplacian_1d(int n, double h) {
    std::vector<double> v;
    for (int k = 1; k <= n; ++k)
        v.push_back((2.0 - 2.0 * std::cos(k * M_PI / (n + 1))) / (h * h));
    return v;
}

} // namespace oracle
