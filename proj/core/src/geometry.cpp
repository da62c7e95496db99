#include "softwg/geometry.hpp"

#include "softwg/errors.hpp"

#include <cmath>

namespace softwg {

WaveguideGeometry::WaveguideGeometry(double R_, double theta_, double a_)
    : R(R_), theta(theta_), a(a_) {
    if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("geometry: R must be positive");
    if (!(theta >= 0.0 && theta <= M_PI)) throw ConfigError("geometry: theta must lie in [0, pi]");
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("geometry: a must be positive");
    if (theta > 0.0 && !(a < R))
        throw ConfigError("geometry: a < R required for a bent curve (a*|curvature| < 1)");
}

Vec2 WaveguideGeometry::point(double s) const {
    const double s0 = junction_s();
    const double tau = 0.5 * theta;
    if (s <= -s0) {
        const double u = s + s0;
        return {u * std::cos(tau) - R * std::sin(tau), -u * std::sin(tau) + R * (1.0 - std::cos(tau))};
    }
    if (s >= s0) {
        const double u = s - s0;
        return {u * std::cos(tau) + R * std::sin(tau), u * std::sin(tau) + R * (1.0 - std::cos(tau))};
    }
    return {R * std::sin(s / R), R * (1.0 - std::cos(s / R))};
}

Vec2 WaveguideGeometry::tangent(double s) const {
    const double s0 = junction_s();
    const double tau = 0.5 * theta;
    if (s <= -s0) return {std::cos(tau), -std::sin(tau)};
    if (s >= s0) return {std::cos(tau), std::sin(tau)};
    return {std::cos(s / R), std::sin(s / R)};
}

Vec2 WaveguideGeometry::normal(double s) const {
    const Vec2 T = tangent(s);
    return {-T.y, T.x};
}

double WaveguideGeometry::curvature(double s) const {
    const double s0 = junction_s();
    return (s > -s0 && s < s0) ? 1.0 / R : 0.0;
}

Vec2 WaveguideGeometry::fermi(const FermiCoordinate& c) const {
    return point(c.s) + normal(c.s) * c.t;
}

double WaveguideGeometry::jacobian(const FermiCoordinate& c) const {
    return 1.0 - curvature(c.s) * c.t;
}

CutRadius WaveguideGeometry::cut_radius_plus(double s) const {
    if (theta == 0.0) return CutRadius::infinity();
    if (theta == M_PI) return CutRadius::finite(R);
    const double s0 = junction_s();
    if (std::abs(s) < s0) return CutRadius::finite(R);
    const double tau = 0.5 * theta;
    const double tt = std::tan(tau);
    return CutRadius::finite((std::abs(s) + R * (tt - tau)) / tt);
}

bool WaveguideGeometry::on_cut_locus(const Vec2& p, double tol) const {
    if (theta == 0.0) return false;
    return std::abs(p.x) <= tol && p.y >= R - tol;
}

std::optional<FermiCoordinate> WaveguideGeometry::invert(const Vec2& p) const {
    if (theta == 0.0) return FermiCoordinate{p.x, p.y};

    const double tol = 1e-12 * std::max(1.0, R);
    if (on_cut_locus(p, tol)) return std::nullopt;

    const Vec2 d = p - arc_center();
    const double r = d.norm();
    if (r <= tol) return std::nullopt; // the focal point Cut_0

    const double tau = 0.5 * theta;
    // polar angle about the arc center, measured from straight down (the
    // direction of the arc's midpoint), increasing toward +x
    const double beta = std::atan2(d.x, -d.y);
    if (std::abs(beta) <= tau) return FermiCoordinate{R * beta, R - r};

    const double ct = std::cos(tau), st = std::sin(tau);
    const double s0 = junction_s();
    if (beta > tau) {
        const Vec2 u = p - Vec2{R * st, R * (1.0 - ct)};
        return FermiCoordinate{s0 + u.x * ct + u.y * st, -(u.x * st) + u.y * ct};
    }
    const Vec2 u = p - Vec2{-(R * st), R * (1.0 - ct)};
    return FermiCoordinate{-s0 + u.x * ct - u.y * st, u.x * st + u.y * ct};
}

} // namespace softwg
