#include "softwg/transverse.hpp"

#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace softwg {

namespace {

constexpr double kAttractiveTol = 1e-10; // E1 must be below -kAttractiveTol

// ---------------------------------------------------------------------------
// symmetric tridiagonal eigen tools (Sturm bisection + inverse iteration)

// number of eigenvalues of tridiag(d, e) strictly below x (LDL^T sign count)
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    const double tiny = 1e-300;
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (std::abs(q) < tiny) q = (q < 0.0 ? -tiny : tiny);
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th smallest eigenvalue (k = 1, 2, ...) by bisection
double sturm_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int k) {
    double emax = 0.0;
    for (double v : e) emax = std::max(emax, std::abs(v));
    double lo = d[0], hi = d[0];
    for (double v : d) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    lo -= 2.0 * emax;
    hi += 2.0 * emax;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(d, e, mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// solve (T - shift) x = b, tridiagonal LU with partial pivoting (fill-in of
// one extra superdiagonal); safe for nearly singular shifts
void tridiag_shifted_solve(const std::vector<double>& d, const std::vector<double>& e,
                           double shift, std::vector<double>& x) {
    const std::size_t n = d.size();
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0); // diag, super1, super2
    std::vector<double> sub(n, 0.0);                // subdiagonal (of T)
    for (std::size_t i = 0; i < n; ++i) a[i] = d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b[i] = e[i];
        sub[i + 1] = e[i];
    }
    // forward elimination with row swaps
    std::vector<int> swapped(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i + 1]) > std::abs(a[i])) {
            std::swap(a[i], sub[i + 1]);
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            std::swap(x[i], x[i + 1]);
            swapped[i] = 1;
        }
        if (a[i] == 0.0) a[i] = 1e-300;
        const double m = sub[i + 1] / a[i];
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * c[i];
        x[i + 1] -= m * x[i];
    }
    if (a[n - 1] == 0.0) a[n - 1] = 1e-300;
    // back substitution
    x[n - 1] /= a[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
    for (std::size_t ii = n; ii >= 3; --ii) {
        const std::size_t i = ii - 3;
        x[i] = (x[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i];
    }
}

struct TridiagPair {
    double value;
    double gap; // to the next eigenvalue
    std::vector<double> vector;
};

TridiagPair lowest_pair(const std::vector<double>& d, const std::vector<double>& e) {
    TridiagPair out;
    out.value = sturm_eigenvalue(d, e, 1);
    out.gap = sturm_eigenvalue(d, e, 2) - out.value;

    const std::size_t n = d.size();
    std::vector<double> x(n, 1.0);
    const double scale = std::max(std::abs(out.value), 1.0);
    for (int it = 0; it < 3; ++it) {
        tridiag_shifted_solve(d, e, out.value + 1e-12 * scale, x);
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
    }
    // fix the overall sign: ground state has none of its own
    double mass = 0.0;
    for (double v : x) mass += v;
    if (mass < 0.0)
        for (double& v : x) v = -v;
    out.vector = std::move(x);
    return out;
}

// ---------------------------------------------------------------------------

double snap_unit_fraction(double h) {
    const int q = std::max(1, static_cast<int>(std::llround(1.0 / h)));
    return 1.0 / q;
}

// spacing such that `anchor` is (as nearly as possible) an integer number of
// steps; exact whenever anchor is a multiple of a unit fraction
double snap_spacing(double h_target, double anchor) {
    if (anchor <= 0.0) return snap_unit_fraction(h_target);
    const double h = snap_unit_fraction(h_target);
    const double steps = anchor / h;
    if (std::abs(steps - std::llround(steps)) < 1e-9) return h;
    const int m = std::max(1, static_cast<int>(std::llround(anchor / h_target)));
    return anchor / m;
}

struct Grid1D {
    double L;
    double h;
    int interior; // nodes at -L + i*h, i = 1..interior
    double node(int i) const { return -L + (i + 1) * h; }
};

Grid1D make_grid(double half_length, double h) {
    const long k = std::lround(std::ceil(half_length / h - 1e-12));
    Grid1D g;
    g.h = h;
    g.L = static_cast<double>(k) * h;
    g.interior = static_cast<int>(2 * k - 1);
    return g;
}

// assemble and solve the lowest pair for one grid
TridiagPair solve_on_grid(const TransverseProfile& profile, const Grid1D& grid,
                          bool double_well, double R) {
    const std::size_t n = grid.interior;
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0, -1.0 / (grid.h * grid.h));
    const double diag0 = 2.0 / (grid.h * grid.h);
    if (is_delta(profile)) {
        const double alpha = std::get<DeltaWell>(profile).alpha;
        for (std::size_t i = 0; i < n; ++i) d[i] = diag0;
        auto add_site = [&](double center) {
            const long i = std::lround((center + grid.L) / grid.h) - 1;
            d[std::clamp<long>(i, 0, static_cast<long>(n) - 1)] += alpha / grid.h;
        };
        if (double_well) {
            add_site(-R);
            add_site(R);
        } else {
            add_site(0.0);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = grid.node(static_cast<int>(i));
            d[i] = diag0 + (double_well
                                ? bounded_value(profile, t - R) + bounded_value(profile, -t - R)
                                : bounded_value(profile, t));
        }
    }
    return lowest_pair(d, e);
}

struct FdSolution {
    double E1;      // Richardson over h, h/2
    double grid_E1; // fine grid value
    double gap;
    Grid1D grid; // fine grid
    std::vector<double> v;
};

FdSolution solve_fd(const TransverseProfile& profile, double half_length, double h,
                    bool double_well, double R) {
    const Grid1D coarse = make_grid(half_length, h);
    const Grid1D fine = make_grid(half_length, 0.5 * h);
    const TridiagPair pc = solve_on_grid(profile, coarse, double_well, R);
    TridiagPair pf = solve_on_grid(profile, fine, double_well, R);

    if (std::abs(pf.value - pc.value) > 0.1 * std::abs(pf.value))
        throw DiscretizationTooCoarse("transverse: E1 moved by more than 10% under h -> h/2");

    FdSolution out;
    out.E1 = (4.0 * pf.value - pc.value) / 3.0;
    out.grid_E1 = pf.value;
    out.gap = pf.gap;
    out.grid = fine;
    out.v = std::move(pf.vector);

    if (!(out.E1 < -kAttractiveTol) || !(out.grid_E1 < -kAttractiveTol))
        throw NoBoundState("transverse: lowest eigenvalue is not negative");
    return out;
}

// 4-point Lagrange interpolation on a uniform grid (value and derivative)
double lagrange4(const TransverseGroundState::Sampled& s, double t, bool derivative) {
    const long n = static_cast<long>(s.v.size());
    auto at = [&](long i) { return (i < 0 || i >= n) ? 0.0 : s.v[i]; };
    const double u = (t - s.t0) / s.h;
    long i1 = static_cast<long>(std::floor(u));
    long i0 = std::clamp(i1 - 1, -1L, n - 3L);
    const double x = u - i0;
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        double num = 1.0, den = 1.0, dnum = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            den *= (j - k);
            if (!derivative) {
                num *= (x - k);
            } else {
                double part = 1.0;
                for (int l = 0; l < 4; ++l) {
                    if (l == j || l == k) continue;
                    part *= (x - l);
                }
                dnum += part;
            }
        }
        if (!derivative)
            acc += at(i0 + j) * num / den;
        else
            acc += at(i0 + j) * dnum / den;
    }
    return derivative ? acc / s.h : acc;
}

// exact integral of the interpolant squared: per-cell 4-point Gauss (degree 6)
double interp_sq_integral(const TransverseGroundState::Sampled& s, double lo, double hi) {
    const GaussLegendre& rule = gauss_rule(4);
    const long n = static_cast<long>(s.v.size());
    double acc = 0.0;
    const long c0 = static_cast<long>(std::floor((lo - s.t0) / s.h));
    const long c1 = static_cast<long>(std::ceil((hi - s.t0) / s.h));
    for (long c = std::max(c0, -1L); c < std::min(c1, n); ++c) {
        const double a = std::max(lo, s.t0 + c * s.h);
        const double b = std::min(hi, s.t0 + (c + 1) * s.h);
        if (b <= a) continue;
        acc += rule.integrate(
            [&](double t) {
                const double x = lagrange4(s, t, false);
                return x * x;
            },
            a, b);
    }
    return acc;
}

std::pair<double, double> raw_tail_constants(const TransverseGroundState::Sampled& s,
                                             double kappa, double a) {
    auto anchor = [&](double t) {
        return lagrange4(s, t, false) * std::exp(kappa * std::abs(t));
    };
    const double np1 = anchor(a + 1.0), np2 = anchor(a + 2.0);
    const double nm1 = anchor(-(a + 1.0)), nm2 = anchor(-(a + 2.0));
    if (!(np1 > 0.0) || !(nm1 > 0.0) || std::abs(np2 - np1) > 1e-4 * std::abs(np1) ||
        std::abs(nm2 - nm1) > 1e-4 * std::abs(nm1))
        throw TailNotExponential("transverse: tail anchors at a+1 and a+2 disagree");
    return {np1, nm1};
}

} // namespace

// ---------------------------------------------------------------------------
// profile helpers

void validate(const TransverseProfile& profile) {
    if (const auto* d = std::get_if<DeltaWell>(&profile)) {
        if (!(d->alpha < 0.0) || !std::isfinite(d->alpha))
            throw ConfigError("profile: delta coupling alpha must be negative");
        return;
    }
    if (const auto* w = std::get_if<SquareWell>(&profile)) {
        if (!(w->depth > 0.0) || !std::isfinite(w->depth))
            throw ConfigError("profile: square well depth V0 must be positive");
        if (!(w->half_width > 0.0) || !std::isfinite(w->half_width))
            throw ConfigError("profile: square well half-width must be positive");
        return;
    }
    const auto& t = std::get<TabulatedWell>(profile);
    if (t.knots.size() < 2 || t.knots.size() != t.values.size())
        throw ConfigError("profile: tabulated well needs matching knots/values, at least two");
    for (std::size_t i = 0; i + 1 < t.knots.size(); ++i)
        if (!(t.knots[i] < t.knots[i + 1]))
            throw ConfigError("profile: tabulated knots must be strictly increasing");
    for (double v : t.values)
        if (!std::isfinite(v)) throw ConfigError("profile: tabulated values must be finite");
}

double support_half_width(const TransverseProfile& profile) {
    if (std::holds_alternative<DeltaWell>(profile)) return 0.0;
    if (const auto* w = std::get_if<SquareWell>(&profile)) return w->half_width;
    const auto& t = std::get<TabulatedWell>(profile);
    return std::max(std::abs(t.knots.front()), std::abs(t.knots.back()));
}

bool is_delta(const TransverseProfile& profile) {
    return std::holds_alternative<DeltaWell>(profile);
}

double bounded_value(const TransverseProfile& profile, double t) {
    if (const auto* w = std::get_if<SquareWell>(&profile)) {
        const double eps = 1e-12 * std::max(1.0, w->half_width);
        const double d = std::abs(t) - w->half_width;
        if (d < -eps) return -w->depth;
        if (d <= eps) return -0.5 * w->depth; // midpoint value at the jump
        return 0.0;
    }
    const auto& tab = std::get<TabulatedWell>(profile);
    if (t <= tab.knots.front() || t >= tab.knots.back()) {
        // edges: midpoint of the inside/outside values
        const double eps = 1e-12 * std::max(1.0, support_half_width(profile));
        if (std::abs(t - tab.knots.front()) <= eps) return 0.5 * tab.values.front();
        if (std::abs(t - tab.knots.back()) <= eps) return 0.5 * tab.values.back();
        return 0.0;
    }
    const auto it = std::upper_bound(tab.knots.begin(), tab.knots.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - tab.knots.begin()) - 1;
    const double w = (t - tab.knots[i]) / (tab.knots[i + 1] - tab.knots[i]);
    return (1.0 - w) * tab.values[i] + w * tab.values[i + 1];
}

Discretization1D Discretization1D::recommended(const TransverseProfile& profile,
                                               double extra_reach) {
    validate(profile);
    const double a = support_half_width(profile);
    if (is_delta(profile)) {
        const double kappa = 0.5 * std::abs(std::get<DeltaWell>(profile).alpha);
        return {extra_reach + 20.0 / kappa, 1.0 / 256.0};
    }
    double wmax = 1.0;
    if (const auto* w = std::get_if<SquareWell>(&profile)) {
        wmax = w->depth;
    } else {
        for (double v : std::get<TabulatedWell>(profile).values) wmax = std::max(wmax, std::abs(v));
    }
    double h = std::min({a / 16.0, 0.125 / std::sqrt(1.0 + wmax), 1.0 / 128.0});
    h = snap_spacing(h, a);

    // coarse pass for the decay rate
    double kappa = 0.25;
    try {
        const FdSolution coarse = solve_fd(profile, a + 25.0, 4.0 * h, false, 0.0);
        kappa = std::sqrt(-coarse.E1);
    } catch (const Error&) {
        // keep the fallback reach; the real solve reports NoBoundState properly
    }
    kappa = std::max(kappa, 0.05);
    return {a + 20.0 / kappa + extra_reach, h};
}

// ---------------------------------------------------------------------------
// ground-state evaluators

double TransverseGroundState::xi(double t) const {
    if (const auto* an = std::get_if<Analytic>(&form)) {
        const double amp = std::sqrt(0.25 * std::abs(an->alpha));
        return amp * std::exp(0.5 * an->alpha * std::abs(t));
    }
    if (t >= tail_start) return N_plus * std::exp(-decay_rate() * t);
    if (t <= -tail_start) return N_minus * std::exp(decay_rate() * t);
    return interp_raw(t);
}

double TransverseGroundState::xi_prime(double t) const {
    if (const auto* an = std::get_if<Analytic>(&form)) {
        if (t == 0.0) return 0.0;
        const double amp = std::sqrt(0.25 * std::abs(an->alpha));
        return 0.5 * an->alpha * (t > 0.0 ? 1.0 : -1.0) * amp *
               std::exp(0.5 * an->alpha * std::abs(t));
    }
    const double k = decay_rate();
    if (t >= tail_start) return -k * N_plus * std::exp(-k * t);
    if (t <= -tail_start) return k * N_minus * std::exp(k * t);
    return lagrange4(std::get<Sampled>(form), t, true);
}

double TransverseGroundState::interp_raw(double t) const {
    if (const auto* an = std::get_if<Analytic>(&form)) {
        (void)an;
        return xi(t);
    }
    return lagrange4(std::get<Sampled>(form), t, false);
}

double xi_mass_above(const TransverseGroundState& gs, double c) {
    const double k = gs.decay_rate();
    if (c >= gs.tail_start) return gs.N_plus * gs.N_plus * std::exp(-2.0 * k * c) / (2.0 * k);
    if (c <= -gs.tail_start)
        return gs.norm_check - gs.N_minus * gs.N_minus * std::exp(2.0 * k * c) / (2.0 * k);
    // core piece by quadrature plus the analytic upper tail
    const auto& s = std::get<TransverseGroundState::Sampled>(gs.form);
    return interp_sq_integral(s, c, gs.tail_start) + xi_mass_above(gs, gs.tail_start);
}

// ---------------------------------------------------------------------------
// solvers

TransverseGroundState solve_ground_state(const TransverseProfile& profile,
                                         const Discretization1D& disc) {
    validate(profile);
    if (!(disc.half_length > 0.0) || !(disc.spacing > 0.0))
        throw ConfigError("discretization: half_length and spacing must be positive");

    TransverseGroundState gs;
    if (is_delta(profile)) {
        const double alpha = std::get<DeltaWell>(profile).alpha;
        gs.E1 = -0.25 * alpha * alpha;
        gs.grid_E1 = gs.E1;
        const double amp = std::sqrt(0.25 * std::abs(alpha));
        gs.N_plus = gs.N_minus = amp;
        gs.norm_check = amp * amp / (0.5 * std::abs(alpha)); // = 1/2, any alpha
        gs.gap_to_second = -gs.E1;                           // rest of the spectrum is [0, inf)
        gs.tail_start = 0.0;
        gs.form = TransverseGroundState::Analytic{alpha};
        return gs;
    }

    const double a = support_half_width(profile);
    const double h = snap_spacing(disc.spacing, a);
    const double L = std::max(disc.half_length, a + 4.0);
    FdSolution sol = solve_fd(profile, L, h, false, 0.0);

    gs.E1 = sol.E1;
    gs.grid_E1 = sol.grid_E1;
    gs.gap_to_second = sol.gap;
    gs.tail_start = a + 1.0;
    TransverseGroundState::Sampled samples{sol.grid.node(0), sol.grid.h, std::move(sol.v)};

    // l2 -> L2 scaling first so the tail anchors are order one
    double nrm = 0.0;
    for (double v : samples.v) nrm += v * v * samples.h;
    const double pre = 1.0 / std::sqrt(nrm);
    for (double& v : samples.v) v *= pre;

    const double kappa = std::sqrt(-gs.E1);
    auto [np, nm] = raw_tail_constants(samples, kappa, a);

    // exact normalization of the realized evaluator: interpolant core plus
    // analytic tails
    const double core = interp_sq_integral(samples, -gs.tail_start, gs.tail_start);
    const double tails = (np * np + nm * nm) * std::exp(-2.0 * kappa * gs.tail_start) / (2.0 * kappa);
    const double scale = 1.0 / std::sqrt(core + tails);
    for (double& v : samples.v) v *= scale;
    gs.N_plus = np * scale;
    gs.N_minus = nm * scale;
    gs.form = std::move(samples);
    gs.norm_check =
        interp_sq_integral(std::get<TransverseGroundState::Sampled>(gs.form), -gs.tail_start,
                           gs.tail_start) +
        (gs.N_plus * gs.N_plus + gs.N_minus * gs.N_minus) *
            std::exp(-2.0 * kappa * gs.tail_start) / (2.0 * kappa);
    return gs;
}

TransverseGroundState solve_ground_state(const TransverseProfile& profile) {
    return solve_ground_state(profile, Discretization1D::recommended(profile));
}

std::pair<double, double> tail_constants(const TransverseGroundState& gs, double a) {
    if (std::holds_alternative<TransverseGroundState::Analytic>(gs.form)) {
        (void)a;
        return {gs.N_plus, gs.N_minus};
    }
    return raw_tail_constants(std::get<TransverseGroundState::Sampled>(gs.form),
                              gs.decay_rate(), a);
}

double double_well_upper_bound(const TransverseGroundState& gs, double R) {
    const double kappa = gs.decay_rate();
    const double boundary = -2.0 * kappa * gs.N_minus * gs.N_minus * std::exp(-2.0 * kappa * R);
    const double norm_sq = 2.0 * xi_mass_above(gs, -R); // 2 ∫_{-R}^∞ xi^2
    return gs.E1 + boundary / norm_sq;
}

DoubleWellResult solve_double_well(const TransverseProfile& profile, double R,
                                   const Discretization1D& disc) {
    validate(profile);
    const double a = support_half_width(profile);
    if (!(R > a)) throw ConfigError("double well: R must exceed the support half-width");

    const TransverseGroundState gs = solve_ground_state(profile);

    const double h = snap_spacing(disc.spacing, R);
    const double L = std::max(disc.half_length, R + a + 4.0);
    FdSolution sol = solve_fd(profile, L, h, true, R);

    DoubleWellResult out;
    out.E1R = sol.E1;
    out.upper_bound = double_well_upper_bound(gs, R);
    double nrm = 0.0;
    for (double v : sol.v) nrm += v * v * sol.grid.h;
    const double pre = 1.0 / std::sqrt(nrm);
    for (double& v : sol.v) v *= pre;
    out.samples = {sol.grid.node(0), sol.grid.h, std::move(sol.v)};
    return out;
}

DoubleWellResult solve_double_well(const TransverseProfile& profile, double R) {
    Discretization1D disc = Discretization1D::recommended(profile, R);
    return solve_double_well(profile, R, disc);
}

double DoubleWellResult::xi(double t) const {
    const double lo = samples.t0, hi = samples.t0 + (samples.v.size() - 1) * samples.h;
    if (t < lo || t > hi) return 0.0;
    return lagrange4(samples, t, false);
}

double rayleigh_quotient_1d(const TransverseProfile& profile, std::span<const double> psi,
                            double t0, double h, WellArrangement arrangement, double R) {
    validate(profile);
    if (psi.empty()) throw ZeroTestFunction("rayleigh: empty test function");

    double norm_sq = 0.0;
    for (double v : psi) norm_sq += v * v * h;
    if (!(norm_sq > 0.0)) throw ZeroTestFunction("rayleigh: test function has zero norm");

    // forward-difference kinetic energy with Dirichlet zeros beyond both ends
    double kinetic = psi[0] * psi[0] + psi[psi.size() - 1] * psi[psi.size() - 1];
    for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
        const double dv = psi[i + 1] - psi[i];
        kinetic += dv * dv;
    }
    kinetic /= h;

    double potential = 0.0;
    if (is_delta(profile)) {
        const double alpha = std::get<DeltaWell>(profile).alpha;
        auto site = [&](double center) {
            const long i = std::clamp<long>(std::lround((center - t0) / h), 0,
                                            static_cast<long>(psi.size()) - 1);
            return psi[i] * psi[i];
        };
        potential = (arrangement == WellArrangement::single)
                        ? alpha * site(0.0)
                        : alpha * (site(-R) + site(R));
    } else {
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double t = t0 + static_cast<double>(i) * h;
            const double w = (arrangement == WellArrangement::single)
                                 ? bounded_value(profile, t)
                                 : bounded_value(profile, t - R) + bounded_value(profile, -t - R);
            potential += w * psi[i] * psi[i] * h;
        }
    }
    return (kinetic + potential) / norm_sq;
}

} // namespace softwg
