#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace softwg {

// Cross-section potentials W(t). Support must stay inside [-a, a] of the
// geometry the profile is paired with; that pairing is checked at config
// level, the profile itself only knows its own support.

/// alpha * delta(t), alpha < 0 (leaky wire cross-section)
struct DeltaWell {
    double alpha = -1.0;
    bool operator==(const DeltaWell&) const = default;
};

/// -depth on (-half_width, half_width), 0 outside; the jump points take the
/// midpoint value -depth/2 (keeps the finite-difference sampling O(h^2)).
struct SquareWell {
    double depth = 1.0;
    double half_width = 1.0;
    bool operator==(const SquareWell&) const = default;
};

/// Piecewise-linear W through (knots, values), 0 outside [knots.front(), knots.back()].
struct TabulatedWell {
    std::vector<double> knots;
    std::vector<double> values;
    bool operator==(const TabulatedWell&) const = default;
};

using TransverseProfile = std::variant<DeltaWell, SquareWell, TabulatedWell>;

void validate(const TransverseProfile& profile); ///< throws ConfigError
double support_half_width(const TransverseProfile& profile);
bool is_delta(const TransverseProfile& profile);
/// W(t) for the bounded kinds; must not be called on DeltaWell.
double bounded_value(const TransverseProfile& profile, double t);

/// Symmetric finite-difference grid on [-half_length, half_length] with
/// Dirichlet walls. Solvers snap the spacing so that the profile's support
/// edges (and double-well centers) land exactly on nodes.
struct Discretization1D {
    double half_length = 30.0;
    double spacing = 1.0 / 128.0;

    /// Two-pass default: coarse solve to estimate the decay rate, then
    /// L = a + 20/sqrt(-E1_coarse) + extra_reach.
    static Discretization1D recommended(const TransverseProfile& profile,
                                        double extra_reach = 0.0);
};

/// Ground state of  -d^2/dt^2 + W  on the line: eigenvalue E1 < 0, the
/// positive eigenfunction xi1, and the amplitudes N± of its exponential
/// tails xi1(t) = N± e^{∓ sqrt(-E1) t} for ±t beyond the support.
///
/// The delta profile is solved in closed form (E1 = -alpha^2/4,
/// xi1 = sqrt(|alpha|/4) e^{alpha|t|/2}); bounded profiles are solved on the
/// grid with Richardson extrapolation over h and h/2, and the evaluator
/// interpolates the grid vector inside |t| <= tail_start and uses the
/// analytic tails outside.
struct TransverseGroundState {
    double E1 = 0.0;
    double N_plus = 0.0;
    double N_minus = 0.0;
    double norm_check = 0.0; ///< ∫ xi1^2 as realized (1 for grid solves; |alpha|-independent 1/2 for the delta closed form)
    double grid_E1 = 0.0;    ///< fine-grid eigenvalue before extrapolation (== E1 for the delta branch)
    double gap_to_second = 0.0; ///< distance to the next grid eigenvalue (simplicity margin)
    double tail_start = 0.0;    ///< |t| >= tail_start evaluates via N± tails

    struct Analytic {
        double alpha;
    };
    struct Sampled {
        double t0 = 0.0; ///< first node
        double h = 0.0;
        std::vector<double> v; ///< node values, Dirichlet zeros not stored
    };
    std::variant<Analytic, Sampled> form = Analytic{-1.0};

    double decay_rate() const { return std::sqrt(-E1); }
    double xi(double t) const;
    double xi_prime(double t) const; ///< sign(t)-sided at the delta kink; 0 at t = 0

    /// Grid interpolation without the tail switch (tail calibration, tests).
    double interp_raw(double t) const;
};

/// ∫_c^∞ xi1^2 — analytic beyond tail_start, Gauss panels inside.
double xi_mass_above(const TransverseGroundState& gs, double c);

TransverseGroundState solve_ground_state(const TransverseProfile& profile,
                                         const Discretization1D& disc);
TransverseGroundState solve_ground_state(const TransverseProfile& profile);

/// N± from the tail anchor t* = a + 1, cross-checked at t* = a + 2.
/// Throws TailNotExponential if the two anchors disagree beyond 1e-4 relative.
std::pair<double, double> tail_constants(const TransverseGroundState& gs, double a);

/// Lowest eigenpair of the double well  -d^2/dt^2 + W(t-R) + W(-t-R).
struct DoubleWellResult {
    double E1R = 0.0;
    double upper_bound = 0.0; ///< test-function bound: E1R <= upper_bound < E1
    TransverseGroundState::Sampled samples;

    double xi(double t) const; ///< interpolated eigenfunction, 0 outside the grid
};

DoubleWellResult solve_double_well(const TransverseProfile& profile, double R,
                                   const Discretization1D& disc);
DoubleWellResult solve_double_well(const TransverseProfile& profile, double R);

/// E1 + [xi1 xi1']-jump boundary term / ||psi||^2 for the reflected-shifted
/// test function psi(t) = xi1(|t| - R); always strictly below E1.
double double_well_upper_bound(const TransverseGroundState& gs, double R);

enum class WellArrangement { single, double_well };

/// Rayleigh quotient of a sampled function psi living on the grid
/// t_i = t0 + i*h (Dirichlet beyond both ends): forward-difference kinetic
/// energy plus trapezoid potential term; the delta potential contributes
/// alpha * psi(center)^2 per well. Throws ZeroTestFunction on ||psi|| = 0.
double rayleigh_quotient_1d(const TransverseProfile& profile, std::span<const double> psi,
                            double t0, double h,
                            WellArrangement arrangement = WellArrangement::single,
                            double R = 0.0);

} // namespace softwg
