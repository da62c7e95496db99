#include "softwg/variational.hpp"

#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace softwg {

namespace {

// decay rate in s of the boundary terms along the straight sections,
// where c_+(s) grows like (s - s0)/tan(theta/2)
double ext_decay_rate(const WaveguideGeometry& g, const TransverseGroundState& gs) {
    if (g.theta <= 0.0 || g.theta >= M_PI) return 0.0;
    return 2.0 * gs.decay_rate() / std::tan(0.5 * g.theta);
}

double cut_plus(const WaveguideGeometry& g, double s) {
    const CutRadius c = g.cut_radius_plus(s);
    return c.infinite ? std::numeric_limits<double>::infinity() : c.value;
}

// ---------------------------------------------------------------------------
// transverse moments over (-inf, c]: plain and t-weighted mass, and the
// energy density xi'^2 + (W - E1) xi^2. Tails beyond |t| = tail_start are the
// exact exponentials of the evaluator, integrated in closed form.

struct TransverseMoments {
    const TransverseGroundState& gs;
    const TransverseProfile* profile; // null: only tail/kinetic terms (no W)
    int gauss_order;

    double kappa() const { return gs.decay_rate(); }

    // ∫_{-inf}^{-T} e^{2k t} dt-type primitives, T = tail_start
    double lower_tail_mass() const {
        const double k = kappa(), T = gs.tail_start;
        return gs.N_minus * gs.N_minus * std::exp(-2.0 * k * T) / (2.0 * k);
    }
    double lower_tail_mass_t() const {
        const double k = kappa(), T = gs.tail_start;
        return gs.N_minus * gs.N_minus * std::exp(-2.0 * k * T) *
               (-T / (2.0 * k) - 1.0 / (4.0 * k * k));
    }
    // ∫_{T}^{c} of the upper tail, c >= T
    double upper_mass(double c) const {
        const double k = kappa(), T = gs.tail_start;
        const double hi = std::isinf(c) ? 0.0 : std::exp(-2.0 * k * c);
        return gs.N_plus * gs.N_plus * (std::exp(-2.0 * k * T) - hi) / (2.0 * k);
    }
    double upper_mass_t(double c) const {
        const double k = kappa(), T = gs.tail_start;
        auto anti = [&](double t) { // -e^{-2kt}(t/(2k) + 1/(4k^2))
            return -std::exp(-2.0 * k * t) * (t / (2.0 * k) + 1.0 / (4.0 * k * k));
        };
        const double hi = std::isinf(c) ? 0.0 : anti(c);
        return gs.N_plus * gs.N_plus * (hi - anti(T));
    }

    // Gauss panels over the core [-T, min(c, T)], aligned to the potential
    // breakpoints and the kink at t = 0
    template <class F>
    double core(double c, F&& integrand) const {
        const double T = gs.tail_start;
        const double hi = std::min(c, T);
        if (!(hi > -T)) return 0.0;
        std::vector<double> pts{-T, T};
        const double a = profile ? support_half_width(*profile) : 0.0;
        pts.insert(pts.end(), {-a, 0.0, a});
        return integrate_panels(integrand, clip_breakpoints(std::move(pts), -T, hi),
                                gauss_order);
    }

    double mass(double c) const {
        if (c <= -gs.tail_start) {
            const double k = kappa();
            return gs.N_minus * gs.N_minus * std::exp(2.0 * k * c) / (2.0 * k);
        }
        double acc = lower_tail_mass();
        acc += core(c, [&](double t) {
            const double x = gs.xi(t);
            return x * x;
        });
        if (c > gs.tail_start) acc += upper_mass(c);
        return acc;
    }

    double mass_t(double c) const {
        double acc = lower_tail_mass_t();
        acc += core(c, [&](double t) {
            const double x = gs.xi(t);
            return t * x * x;
        });
        if (c > gs.tail_start) acc += upper_mass_t(c);
        return acc;
    }

    // ∫ (xi'^2 + (W - E1) xi^2) over (-inf, c], plus the point term of a
    // delta profile (weighted value at t = 0 is xi(0)^2 since f(s,0) = 1)
    double energy(double c) const {
        const double k = kappa();
        const double two_k_sq = 2.0 * k * k; // xi'^2 - E1 xi^2 on the tails
        double acc = two_k_sq * lower_tail_mass();
        acc += core(c, [&](double t) {
            const double x = gs.xi(t);
            const double dx = gs.xi_prime(t);
            const double w = (profile && !is_delta(*profile)) ? bounded_value(*profile, t) : 0.0;
            return dx * dx + (w - gs.E1) * x * x;
        });
        if (c > gs.tail_start) acc += two_k_sq * upper_mass(c);
        if (profile && is_delta(*profile) && c > 0.0) {
            const double x0 = gs.xi(0.0);
            acc += std::get<DeltaWell>(*profile).alpha * x0 * x0;
        }
        return acc;
    }

    double energy_t(double c) const {
        const double k = kappa();
        const double two_k_sq = 2.0 * k * k;
        double acc = two_k_sq * lower_tail_mass_t();
        acc += core(c, [&](double t) {
            const double x = gs.xi(t);
            const double dx = gs.xi_prime(t);
            const double w = (profile && !is_delta(*profile)) ? bounded_value(*profile, t) : 0.0;
            return t * (dx * dx + (w - gs.E1) * x * x);
        });
        if (c > gs.tail_start) acc += two_k_sq * upper_mass_t(c);
        return acc; // a centered delta contributes nothing at weight t = 0
    }
};

} // namespace

double mollifier_value(const Mollifier& m, double s) {
    if (m.n < 1) throw Error("mollifier: n must be a positive integer");
    const double n = static_cast<double>(m.n);
    const double as = std::abs(s);
    if (as <= n) return 1.0;
    if (as >= 2.0 * n) return 0.0;
    return (2.0 * n - as) / n;
}

double q_tilde_1(const WaveguideGeometry& g, const TransverseGroundState& gs,
                 const Mollifier& m, const QuadratureSpec& quad) {
    const double s0 = g.junction_s();
    if (static_cast<double>(m.n) < s0)
        throw MollifierTooNarrow("q_tilde_1: plateau must cover the bent section (n >= theta*R/2)");
    const double n = static_cast<double>(m.n);
    const double inv_n_sq = 1.0 / (n * n);

    if (g.theta == 0.0) return (2.0 / n) * gs.norm_check;

    auto mass_inside = [&](double s) {
        return gs.norm_check - xi_mass_above(gs, cut_plus(g, s));
    };
    const double rate = ext_decay_rate(g, gs);
    const auto breaks = graded_breakpoints(n, 2.0 * n, rate);
    const double half =
        integrate_panels([&](double s) { return inv_n_sq * mass_inside(s); }, breaks,
                         quad.gauss_order);
    return 2.0 * half;
}

double q_tilde_2_int_closed(const WaveguideGeometry& g, const TransverseGroundState& gs) {
    const double x = gs.xi(g.R);
    return x * x * 0.5 * g.theta;
}

double q_tilde_2_int_bracket(const WaveguideGeometry& g, const TransverseGroundState& gs,
                             const QuadratureSpec& quad) {
    const double s0 = g.junction_s();
    if (s0 == 0.0) return 0.0;
    auto bracket = [&](double s) {
        const double k = 1.0 / g.R; // curvature on the open bent section
        const double c = cut_plus(g, s);
        const double x = gs.xi(c), dx = gs.xi_prime(c);
        return 0.5 * x * x * k + x * dx * (1.0 - k * c);
    };
    return integrate_panels(bracket, {-s0, 0.0, s0}, quad.gauss_order);
}

double q_tilde_2_ext(const WaveguideGeometry& g, const TransverseGroundState& gs,
                     const Mollifier& m, const QuadratureSpec& quad) {
    if (g.theta == 0.0) return 0.0;
    const double s0 = g.junction_s();
    const double n = static_cast<double>(m.n);
    if (2.0 * n <= s0) return 0.0; // cutoff vanishes on the whole exterior
    const double rate = ext_decay_rate(g, gs);
    auto integrand = [&](double s) {
        const double phi = mollifier_value(m, s);
        const double c = cut_plus(g, s);
        return phi * phi * gs.xi(c) * gs.xi_prime(c);
    };
    std::vector<double> pts = graded_breakpoints(s0, 2.0 * n, rate);
    pts.push_back(n); // slope of the cutoff starts here
    const double half =
        integrate_panels(integrand, clip_breakpoints(std::move(pts), s0, 2.0 * n),
                         quad.gauss_order);
    return 2.0 * half;
}

double q_tilde_2_ext_limit(const WaveguideGeometry& g, const TransverseGroundState& gs) {
    if (g.theta >= M_PI)
        throw DivergentExt("q_tilde_2_ext_limit: diverges to -infinity for theta = pi");
    if (g.theta == 0.0) return 0.0;
    const double x = gs.xi(g.R);
    return -x * x * std::tan(0.5 * g.theta);
}

double variational_limit(const WaveguideGeometry& g, const TransverseGroundState& gs) {
    if (g.theta >= M_PI)
        throw DivergentExt("variational_limit: diverges to -infinity for theta = pi");
    const double x = gs.xi(g.R);
    const double tau = 0.5 * g.theta;
    return x * x * (tau - std::tan(tau));
}

namespace {

FormBreakdown evaluate_form(const WaveguideGeometry& g, const TransverseProfile& profile,
                            const TransverseGroundState& gs, const Mollifier& m,
                            const QuadratureSpec& quad) {
    const double s0 = g.junction_s();
    const double n = static_cast<double>(m.n);
    const TransverseMoments mom{gs, &profile, quad.gauss_order};

    FormBreakdown out;
    out.n = m.n;

    // longitudinal gradient part (cutoff slope region; weight 1/f = 1 there)
    if (g.theta == 0.0) {
        out.q1 = (2.0 / n) * gs.norm_check;
    } else {
        const double rate = ext_decay_rate(g, gs);
        out.q1 = 2.0 * integrate_panels(
                           [&](double s) { return mom.mass(cut_plus(g, s)) / (n * n); },
                           graded_breakpoints(n, 2.0 * n, rate), quad.gauss_order);
    }

    // bent section: weight (1 - t/R), cutoff is 1 there
    if (g.theta > 0.0) {
        const double c = g.R; // cut radius on the bent section
        out.q2_int = 2.0 * s0 * (mom.energy(c) - mom.energy_t(c) / g.R);
    }

    // straight sections: weight 1, cut radius grows affinely
    {
        const double rate = ext_decay_rate(g, gs);
        auto integrand = [&](double s) {
            const double phi = mollifier_value(m, s);
            return phi * phi * mom.energy(cut_plus(g, s));
        };
        std::vector<double> pts = graded_breakpoints(s0, 2.0 * n, rate);
        pts.push_back(n);
        out.q2_ext = 2.0 * integrate_panels(
                               integrand, clip_breakpoints(std::move(pts), s0, 2.0 * n),
                               quad.gauss_order);
    }

    out.total = out.q1 + out.q2_int + out.q2_ext;
    return out;
}

} // namespace

FormBreakdown q_tilde_full_quadrature(const WaveguideGeometry& g,
                                      const TransverseProfile& profile,
                                      const TransverseGroundState& gs, const Mollifier& m,
                                      const QuadratureSpec& quad) {
    const double s0 = g.junction_s();
    if (static_cast<double>(m.n) < s0)
        throw MollifierTooNarrow(
            "q_tilde_full_quadrature: plateau must cover the bent section (n >= theta*R/2)");

    const FormBreakdown coarse = evaluate_form(g, profile, gs, m, quad);
    const FormBreakdown fine = evaluate_form(g, profile, gs, m, quad.refined());
    const double scale = std::max({std::abs(fine.q1), std::abs(fine.q2_int),
                                   std::abs(fine.q2_ext), 1e-300});
    if (std::abs(fine.total - coarse.total) > 1e-6 * scale)
        throw QuadratureNotConverged("q_tilde_full_quadrature: rule refinement moved the total");
    return fine;
}

Certificate bound_state_certificate(const WaveguideGeometry& g, const TransverseProfile& profile) {
    const double search_limit = 1e6 * g.theta * g.R;
    const TransverseGroundState gs = solve_ground_state(profile);
    const double q2i = q_tilde_2_int_closed(g, gs);

    long long n = std::max(1ll, static_cast<long long>(std::ceil(g.junction_s())));
    while (true) {
        if (static_cast<double>(n) > search_limit || n > (1ll << 30))
            throw CertificateNotFound("bound_state_certificate: no negative form value found");
        const Mollifier m{static_cast<int>(n)};
        const double value = q_tilde_1(g, gs, m) + q2i + q_tilde_2_ext(g, gs, m);
        if (value < -1e-12) return {static_cast<int>(n), value};
        n *= 2;
    }
}

} // namespace softwg
