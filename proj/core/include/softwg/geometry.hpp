#pragma once

#include <cmath>
#include <optional>

namespace softwg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

using PlanePoint = Vec2;

/// Arc-length coordinate s along the curve, signed offset t along the normal.
struct FermiCoordinate {
    double s = 0.0;
    double t = 0.0;
};

/// Positive length with an explicit +infinity, so callers can switch to
/// analytic tail formulas instead of integrating to a huge float.
struct CutRadius {
    static CutRadius finite(double v) { return {v, false}; }
    static CutRadius infinity() { return {0.0, true}; }

    double value = 0.0;
    bool infinite = false;

    bool contains(double offset) const { return infinite || offset < value; }
};

/// Planar curve made of a circular arc of radius R and opening angle theta,
/// continued by two straight semi-lines, with a channel of half-width a
/// around it. The arc starts at the origin with horizontal tangent and bends
/// toward +y; the whole curve is mirror-symmetric in x.
///
/// Everything here is exact closed-form geometry; all members are pure and
/// the struct is immutable after construction.
class WaveguideGeometry {
  public:
    /// Throws ConfigError unless R > 0, theta in [0,pi], a > 0, and
    /// (for theta > 0) a < R so the channel cannot reach the cut-locus.
    WaveguideGeometry(double R, double theta, double a);

    double R;     ///< arc radius
    double theta; ///< bending angle, 0 = straight line, pi = U-turn
    double a;     ///< channel half-width

    /// Arc-length of the bent section is theta*R; junctions at +-theta*R/2.
    double junction_s() const { return 0.5 * theta * R; }

    Vec2 point(double s) const;
    Vec2 tangent(double s) const;
    Vec2 normal(double s) const; ///< (-tangent.y, tangent.x); points to the arc center on the arc

    /// 1/R strictly between the junctions, 0 outside and at the junctions.
    double curvature(double s) const;

    /// Phi(s,t) = point(s) + t * normal(s)
    Vec2 fermi(const FermiCoordinate& c) const;

    /// Jacobian of the Fermi map, 1 - curvature(s) * t.
    double jacobian(const FermiCoordinate& c) const;

    CutRadius cut_radius_plus(double s) const;
    CutRadius cut_radius_minus(double s) const { (void)s; return CutRadius::infinity(); }

    /// Whether (s,t) lies in the domain U where the Fermi map is injective.
    bool in_domain(const FermiCoordinate& c) const {
        return cut_radius_plus(c.s).contains(c.t);
    }

    /// The cut-locus is the vertical ray {(0,y): y >= R} for theta > 0,
    /// empty for theta = 0.
    bool on_cut_locus(const Vec2& p, double tol) const;

    /// Inverse of the Fermi map: the unique (s,t) in U with fermi(s,t) == p,
    /// or empty when p lies on (within ~1e-12 of) the cut-locus.
    std::optional<FermiCoordinate> invert(const Vec2& p) const;

    /// Center of the arc's osculating circle, (0, R).
    Vec2 arc_center() const { return {0.0, R}; }
};

} // namespace softwg
