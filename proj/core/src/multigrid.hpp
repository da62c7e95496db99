#pragma once

#include "softwg/eigensolve.hpp"

#include <cstddef>
#include <vector>

namespace softwg {

/// Geometric-multigrid V(2,2) cycle for the 5-point operator
/// -Laplace_h + (V - sigma) on a rectangle of interior nodes with Dirichlet
/// walls; used as an SPD preconditioner for the inner CG solves. Requires
/// V - sigma >= 0, which holds whenever sigma sits below the Gershgorin
/// lower bound. Damped-Jacobi smoothing, full-weighting restriction,
/// bilinear prolongation, injected coarse potentials, dense Cholesky on the
/// coarsest level. Deterministic; not reentrant (per-level workspace).
class GridVCycle final : public LinearOperator {
  public:
    GridVCycle(int nx, int ny, double h, std::vector<double> potential_minus_sigma);

    void apply(std::span<const double> x, std::span<double> y) const override;

    /// Whether a hierarchy with a reasonably small coarsest level exists.
    static bool feasible(int nx, int ny);

  private:
    struct Level {
        int nx, ny;
        double h;
        std::vector<double> pot; // V - sigma
        mutable std::vector<double> sol, rhs, res;
    };
    std::vector<Level> levels_;
    std::vector<double> chol_; // coarsest factor, row-major lower triangle
    int coarse_dim_ = 0;

    void smooth(const Level& lv, int sweeps) const;
    void residual(const Level& lv) const;
    void vcycle(std::size_t l) const;
    void coarse_solve(const Level& lv) const;
};

} // namespace softwg
