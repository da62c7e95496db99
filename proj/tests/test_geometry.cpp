#include "softwg/errors.hpp"
#include "softwg/geometry.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace softwg;

namespace {

const WaveguideGeometry kBent{4.0, M_PI / 2.0, 0.5};
const WaveguideGeometry kStraight{4.0, 0.0, 0.5};
const WaveguideGeometry kUturn{4.0, M_PI, 0.5};

// s samples across all three branches, staying clear of the junctions where
// the curvature jumps (the C1 check handles those separately)
std::vector<double> s_samples(const WaveguideGeometry& g) {
    std::vector<double> out;
    const double s0 = g.junction_s();
    for (double s = -3.0 * g.R - 2.1; s <= 3.0 * g.R + 2.1; s += 0.37) {
        if (std::abs(std::abs(s) - s0) < 1e-3) continue;
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("curve points on all three branches") {
    CHECK(kBent.point(0.0).x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kBent.point(0.0).y == doctest::Approx(0.0).epsilon(1e-15));

    const double s_junction = kBent.junction_s(); // theta R / 2 = pi
    const Vec2 j = kBent.point(s_junction);
    CHECK(j.x == doctest::Approx(4.0 * std::sin(M_PI / 4.0)).epsilon(1e-14));
    CHECK(j.y == doctest::Approx(4.0 * (1.0 - std::cos(M_PI / 4.0))).epsilon(1e-14));
    CHECK(j.x == doctest::Approx(2.8284271247461903).epsilon(1e-12));
    CHECK(j.y == doctest::Approx(1.1715728752538097).epsilon(1e-12));

    const Vec2 line = kStraight.point(7.0);
    CHECK(line.x == doctest::Approx(7.0));
    CHECK(line.y == doctest::Approx(0.0));
}

TEST_CASE("tangent and normal frames") {
    CHECK(kBent.tangent(0.0).x == doctest::Approx(1.0));
    CHECK(kBent.tangent(0.0).y == doctest::Approx(0.0));
    CHECK(kBent.normal(0.0).x == doctest::Approx(0.0));
    CHECK(kBent.normal(0.0).y == doctest::Approx(1.0));

    const Vec2 t_left = kBent.tangent(-kBent.junction_s());
    CHECK(t_left.x == doctest::Approx(std::cos(M_PI / 4.0)).epsilon(1e-14));
    CHECK(t_left.y == doctest::Approx(-std::sin(M_PI / 4.0)).epsilon(1e-14));

    for (const auto& g : {kBent, kStraight, kUturn})
        for (double s : s_samples(g)) {
            CHECK(std::abs(g.tangent(s).dot(g.normal(s))) < 1e-15);
            CHECK(g.tangent(s).norm() == doctest::Approx(1.0).epsilon(1e-15));
        }
}

TEST_CASE("curvature is 1/R strictly inside the arc, 0 outside and at junctions") {
    CHECK(kBent.curvature(0.0) == doctest::Approx(0.25));
    CHECK(kBent.curvature(10.0) == 0.0);
    CHECK(kBent.curvature(kBent.junction_s()) == 0.0);
    CHECK(kBent.curvature(-kBent.junction_s()) == 0.0);
    for (double s : s_samples(kStraight)) CHECK(kStraight.curvature(s) == 0.0);

    // Frenet relation on the arc: second difference equals curvature * normal
    const double eps = 1e-4;
    for (double s : {-2.0, 0.0, 1.5}) {
        const Vec2 dd = (kBent.point(s + eps) - kBent.point(s) * 2.0 + kBent.point(s - eps)) *
                        (1.0 / (eps * eps));
        const Vec2 n = kBent.normal(s);
        CHECK(std::abs(dd.x - 0.25 * n.x) < 1e-6);
        CHECK(std::abs(dd.y - 0.25 * n.y) < 1e-6);
    }
}

TEST_CASE("fermi map and jacobian") {
    const Vec2 center = kBent.fermi({0.0, 4.0});
    CHECK(center.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(center.y == doctest::Approx(4.0).epsilon(1e-15));

    const Vec2 below = kBent.fermi({0.0, -1.0});
    CHECK(below.x == doctest::Approx(0.0));
    CHECK(below.y == doctest::Approx(-1.0));

    for (const auto& g : {kBent, kStraight, kUturn})
        for (double s : s_samples(g)) {
            const Vec2 on = g.fermi({s, 0.0});
            const Vec2 gamma = g.point(s);
            CHECK((on - gamma).norm() < 1e-14);
            const double off = 1.7;
            CHECK((g.fermi({s, off}) - gamma).norm() == doctest::Approx(off).epsilon(1e-14));
            CHECK(g.jacobian({s, 0.0}) == 1.0);
        }

    CHECK(kBent.jacobian({0.0, 4.0}) == doctest::Approx(0.0));
    CHECK(kBent.jacobian({10.0, 3.0}) == doctest::Approx(1.0));
}

TEST_CASE("cut radii") {
    CHECK(kBent.cut_radius_minus(0.0).infinite);
    CHECK(kBent.cut_radius_minus(100.0).infinite);

    CHECK_FALSE(kBent.cut_radius_plus(0.0).infinite);
    CHECK(kBent.cut_radius_plus(0.0).value == doctest::Approx(4.0));

    // the two branch formulas agree at the junction (value R)
    const double s0 = kBent.junction_s();
    CHECK(kBent.cut_radius_plus(s0).value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(kBent.cut_radius_plus(s0 - 1e-9).value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(kBent.cut_radius_plus(s0 + 1e-9).value == doctest::Approx(4.0).epsilon(1e-9));

    // affine growth on the straight section
    const double tau = M_PI / 4.0;
    const double s = s0 + 3.1;
    CHECK(kBent.cut_radius_plus(s).value ==
          doctest::Approx((3.1 + s0 + 4.0 * (std::tan(tau) - tau)) / std::tan(tau)).epsilon(1e-14));
    CHECK(kBent.cut_radius_plus(-s).value == doctest::Approx(kBent.cut_radius_plus(s).value));

    CHECK(kStraight.cut_radius_plus(5.0).infinite);
    CHECK(kUturn.cut_radius_plus(123.0).value == doctest::Approx(4.0));
    CHECK(kUturn.cut_radius_plus(0.0).value == doctest::Approx(4.0));
}

TEST_CASE("cut locus membership") {
    CHECK(kBent.on_cut_locus({0.0, 4.0}, 1e-12));
    CHECK(kBent.on_cut_locus({0.0, 9.0}, 1e-12));
    CHECK_FALSE(kBent.on_cut_locus({0.0, 3.9}, 1e-12));
    CHECK_FALSE(kBent.on_cut_locus({0.3, 9.0}, 1e-12));
    CHECK_FALSE(kStraight.on_cut_locus({0.0, 100.0}, 1e-12));
    CHECK(kUturn.on_cut_locus({0.0, 4.0}, 1e-12));
}

TEST_CASE("inverse fermi map: examples") {
    const auto below = kBent.invert({0.0, -1.0});
    REQUIRE(below.has_value());
    CHECK(below->s == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(below->t == doctest::Approx(-1.0).epsilon(1e-14));

    CHECK_FALSE(kBent.invert({0.0, 5.0}).has_value());
    CHECK_FALSE(kBent.invert({0.0, 4.0}).has_value()); // the focal point

    const auto far = kBent.invert({10.0, 1.0});
    REQUIRE(far.has_value());
    const Vec2 back = kBent.fermi(*far);
    CHECK((back - Vec2{10.0, 1.0}).norm() < 1e-10);

    const auto line = kStraight.invert({3.0, -2.0});
    REQUIRE(line.has_value());
    CHECK(line->s == doctest::Approx(3.0));
    CHECK(line->t == doctest::Approx(-2.0));
}

TEST_CASE("unit speed along all branches") {
    for (const auto& g : {kBent, kStraight, kUturn}) {
        const double eps = 1e-6 * g.R;
        for (double s : s_samples(g)) {
            const Vec2 diff = (g.point(s + eps) - g.point(s - eps)) * (1.0 / (2.0 * eps));
            CHECK(diff.norm() == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("C1 continuity at the junctions") {
    for (const auto& g : {kBent, kUturn}) {
        const double s0 = g.junction_s();
        for (double sj : {s0, -s0}) {
            // arc-branch formulas evaluated at the junction
            const Vec2 arc_point{g.R * std::sin(sj / g.R), g.R * (1.0 - std::cos(sj / g.R))};
            const Vec2 arc_tangent{std::cos(sj / g.R), std::sin(sj / g.R)};
            CHECK((g.point(sj) - arc_point).norm() < 1e-12);
            CHECK((g.tangent(sj) - arc_tangent).norm() < 1e-12);
        }
    }
}

TEST_CASE("round trip and distance law on the injectivity domain") {
    for (const auto& g : {kBent, kUturn}) {
        for (double s : s_samples(g)) {
            const CutRadius cp = g.cut_radius_plus(s);
            const double top = cp.infinite ? 5.0 * g.R : std::min(0.95 * cp.value, 5.0 * g.R);
            for (int k = 0; k <= 6; ++k) {
                const double t = -5.0 * g.R + k * (top + 5.0 * g.R) / 6.0;
                const Vec2 p = g.fermi({s, t});
                const auto back = g.invert(p);
                REQUIRE(back.has_value());
                CHECK(std::abs(back->s - s) < 1e-9 * (1.0 + std::abs(s)));
                CHECK(std::abs(back->t - t) < 1e-9 * (1.0 + std::abs(t)));

                const auto nearest = oracle::closest_on_curve(g, p);
                CHECK(std::abs(nearest.distance - std::abs(t)) < 1e-9 * (1.0 + std::abs(t)));
            }
        }
    }
}

TEST_CASE("jacobian sign on the domain and on the cut boundary") {
    const auto& g = kBent;
    for (double s : s_samples(g)) {
        const CutRadius cp = g.cut_radius_plus(s);
        const double top = cp.infinite ? 5.0 * g.R : 0.95 * cp.value;
        for (int k = 0; k <= 6; ++k) {
            const double t = -5.0 * g.R + k * (top + 5.0 * g.R) / 6.0;
            CHECK(g.jacobian({s, t}) > 0.0);
        }
        if (!cp.infinite) {
            const double f_at_cut = g.jacobian({s, cp.value});
            if (std::abs(s) < g.junction_s())
                CHECK(f_at_cut == doctest::Approx(0.0).epsilon(1e-15));
            else
                CHECK(f_at_cut == 1.0);
        }
    }
}

TEST_CASE("geometry invariants are enforced") {
    CHECK_THROWS_AS(WaveguideGeometry(-1.0, 0.5, 0.1), ConfigError);
    CHECK_THROWS_AS(WaveguideGeometry(4.0, -0.1, 0.1), ConfigError);
    CHECK_THROWS_AS(WaveguideGeometry(4.0, 4.0, 0.1), ConfigError);
    CHECK_THROWS_AS(WaveguideGeometry(4.0, 0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(WaveguideGeometry(4.0, 0.5, 4.0), ConfigError);  // a < R required
    CHECK_NOTHROW(WaveguideGeometry(4.0, 0.0, 17.0));                // any a when straight
}
