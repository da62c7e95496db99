#pragma once

#include "softwg/eigensolve.hpp"
#include "softwg/geometry.hpp"
#include "softwg/sparse.hpp"
#include "softwg/transverse.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace softwg {

/// Rectangle of interior finite-difference nodes with Dirichlet walls on the
/// box boundary; (x_max-x_min)/h and (y_max-y_min)/h must be integral.
struct Grid2D {
    Grid2D(double x_min, double x_max, double y_min, double y_max, double h);

    double x_min, x_max, y_min, y_max, h;

    int cells_x() const;
    int cells_y() const;
    int nx() const { return cells_x() - 1; } ///< interior nodes per row
    int ny() const { return cells_y() - 1; }
    std::size_t size() const { return static_cast<std::size_t>(nx()) * ny(); }
    double node_x(int i) const { return x_min + (i + 1) * h; }
    double node_y(int j) const { return y_min + (j + 1) * h; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx() + i; }

    Grid2D refined() const { return {x_min, x_max, y_min, y_max, 0.5 * h}; }
};

/// V sampled at the interior nodes; for a delta profile the channel is the
/// squeezed square well of depth |alpha|/(2 eps) and half-width
/// eps = regularization_eps (preserves the integral of W).
struct PotentialField {
    std::vector<double> values;
    double regularization_eps = 0.0; ///< 0 for bounded profiles
};

/// Per node p: V(p) = W(t) where (s,t) = inverse Fermi coordinates of p,
/// 0 when p is outside the channel or on the cut-locus. eps_override > 0
/// forces the delta regularization width (default 4h); GridTooCoarse if the
/// resulting eps < 2h.
PotentialField sample_potential(const WaveguideGeometry& g, const TransverseProfile& profile,
                                const Grid2D& grid, int threads = 1,
                                double eps_override = 0.0);

/// 5-point Laplacian plus the potential on the diagonal.
SparseSymMatrix assemble(const Grid2D& grid, const PotentialField& field);

/// Bottom of the essential spectrum: E1 for theta in [0, pi), the double-well
/// ground energy E_{1,R} for theta = pi.
double essential_threshold(const WaveguideGeometry& g, const TransverseProfile& profile,
                           const Discretization1D& disc);
double essential_threshold(const WaveguideGeometry& g, const TransverseProfile& profile);

struct SpectralReport {
    struct Level {
        double h = 0.0;
        std::vector<double> eigenvalues;
        int iterations = 0;
    };

    std::vector<double> eigenvalues; ///< Richardson-extrapolated over the two levels
    double threshold = 0.0;          ///< essential-spectrum bottom
    int binding_count = 0;           ///< eigenvalues below threshold - 3*disagreement
    std::vector<double> margins;     ///< threshold - eigenvalue (per pair)
    std::vector<double> disagreement; ///< |lambda_i(h/2) - lambda_i(h)|
    std::vector<Level> levels;       ///< coarse then fine
};

/// k lowest eigenvalues on `levels` nested grids (grid.h, grid.h/2, ...),
/// Richardson-extrapolated from the finest two; an eigenvalue counts as
/// binding when it clears the threshold by three times its own refinement
/// disagreement. Throws NotConverged when the first pair's disagreement
/// exceeds `tol`.
SpectralReport discrete_spectrum(const WaveguideGeometry& g, const TransverseProfile& profile,
                                 const Grid2D& grid, int k, double tol,
                                 std::uint64_t seed = 1, int threads = 1, int levels = 2);

/// Multigrid preconditioner factory for matrices assembled on `grid`
/// (empty factory when the grid cannot be coarsened).
PreconditionerFactory grid_preconditioner_factory(const Grid2D& grid,
                                                  const PotentialField& field);

} // namespace softwg
