#include "softwg/hamiltonian2d.hpp"

#include "multigrid.hpp"
#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <cmath>

namespace softwg {

namespace {

int checked_cells(double lo, double hi, double h, const char* axis) {
    if (!(hi > lo)) throw ConfigError(std::string("grid: empty extent along ") + axis);
    if (!(h > 0.0)) throw ConfigError("grid: spacing must be positive");
    const double cells = (hi - lo) / h;
    const long rounded = std::lround(cells);
    if (rounded < 2 || std::abs(cells - static_cast<double>(rounded)) > 1e-9 * cells)
        throw ConfigError(std::string("grid: extent along ") + axis +
                          " must be an integral (>= 2) number of cells");
    return static_cast<int>(rounded);
}

} // namespace

Grid2D::Grid2D(double x_min_, double x_max_, double y_min_, double y_max_, double h_)
    : x_min(x_min_), x_max(x_max_), y_min(y_min_), y_max(y_max_), h(h_) {
    checked_cells(x_min, x_max, h, "x");
    checked_cells(y_min, y_max, h, "y");
}

int Grid2D::cells_x() const { return checked_cells(x_min, x_max, h, "x"); }
int Grid2D::cells_y() const { return checked_cells(y_min, y_max, h, "y"); }

PotentialField sample_potential(const WaveguideGeometry& g, const TransverseProfile& profile,
                                const Grid2D& grid, int threads, double eps_override) {
    validate(profile);
    PotentialField field;
    field.values.assign(grid.size(), 0.0);

    TransverseProfile effective = profile;
    if (is_delta(profile)) {
        const double eps = eps_override > 0.0 ? eps_override : 4.0 * grid.h;
        if (eps < 2.0 * grid.h)
            throw GridTooCoarse("sample_potential: delta regularization needs eps >= 2h");
        const double alpha = std::get<DeltaWell>(profile).alpha;
        effective = SquareWell{std::abs(alpha) / (2.0 * eps), eps};
        field.regularization_eps = eps;
    }
    const int nx = grid.nx(), ny = grid.ny();
    parallel_for(static_cast<std::size_t>(ny), threads, [&](std::size_t jb, std::size_t je) {
        for (std::size_t j = jb; j < je; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 p{grid.node_x(i), grid.node_y(static_cast<int>(j))};
                const auto fc = g.invert(p);
                if (!fc) continue; // cut-locus points lie outside the channel
                field.values[grid.index(i, static_cast<int>(j))] =
                    bounded_value(effective, fc->t);
            }
        }
    });
    return field;
}

SparseSymMatrix assemble(const Grid2D& grid, const PotentialField& field) {
    if (field.values.size() != grid.size())
        throw ConfigError("assemble: potential field does not match the grid");
    const int nx = grid.nx(), ny = grid.ny();
    const double ih2 = 1.0 / (grid.h * grid.h);

    SparseSymMatrix A(grid.size());
    A.reserve(3 * grid.size());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t r = grid.index(i, j);
            A.add(r, r, 4.0 * ih2 + field.values[r]);
            if (i + 1 < nx) A.add(r, r + 1, -ih2);
            if (j + 1 < ny) A.add(r, r + nx, -ih2);
        }
    }
    A.finalize();
    return A;
}

double essential_threshold(const WaveguideGeometry& g, const TransverseProfile& profile,
                           const Discretization1D& disc) {
    if (g.theta == M_PI) return solve_double_well(profile, g.R, disc).E1R;
    return solve_ground_state(profile, disc).E1;
}

double essential_threshold(const WaveguideGeometry& g, const TransverseProfile& profile) {
    if (g.theta == M_PI) return solve_double_well(profile, g.R).E1R;
    return solve_ground_state(profile).E1;
}

PreconditionerFactory grid_preconditioner_factory(const Grid2D& grid,
                                                  const PotentialField& field) {
    if (!GridVCycle::feasible(grid.nx(), grid.ny())) return {};
    const int nx = grid.nx(), ny = grid.ny();
    const double h = grid.h;
    const std::vector<double> values = field.values;
    return [nx, ny, h, values](double sigma) -> std::unique_ptr<LinearOperator> {
        std::vector<double> shifted(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) shifted[i] = values[i] - sigma;
        return std::make_unique<GridVCycle>(nx, ny, h, std::move(shifted));
    };
}

SpectralReport discrete_spectrum(const WaveguideGeometry& g, const TransverseProfile& profile,
                                 const Grid2D& grid, int k, double tol, std::uint64_t seed,
                                 int threads, int levels) {
    if (k < 1) throw ConfigError("discrete_spectrum: k must be positive");
    if (levels < 2) throw ConfigError("discrete_spectrum: at least two refinement levels");
    SpectralReport report;
    report.threshold = essential_threshold(g, profile);

    Grid2D level_grid = grid;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const PotentialField field = sample_potential(g, profile, level_grid, threads);
        const SparseSymMatrix A = assemble(level_grid, field);
        EigenRequest req;
        req.k = k;
        req.tol = 1e-9;
        req.max_iterations = 800;
        req.seed = seed;
        const EigenResult sol =
            lowest_eigenpairs(A, req, threads, grid_preconditioner_factory(level_grid, field));
        report.levels.push_back({level_grid.h, sol.values, sol.iterations});
        if (lvl + 1 < levels) level_grid = level_grid.refined();
    }

    const auto& coarse = report.levels[report.levels.size() - 2].eigenvalues;
    const auto& fine = report.levels.back().eigenvalues;
    for (int i = 0; i < k; ++i) {
        const double extrapolated = (4.0 * fine[i] - coarse[i]) / 3.0;
        const double dis = std::abs(fine[i] - coarse[i]);
        report.eigenvalues.push_back(extrapolated);
        report.disagreement.push_back(dis);
        report.margins.push_back(report.threshold - extrapolated);
        if (extrapolated < report.threshold - 3.0 * dis) ++report.binding_count;
    }
    if (report.disagreement[0] > tol)
        throw NotConverged("discrete_spectrum: refinement disagreement above tolerance",
                           report.eigenvalues, report.disagreement, 0);
    return report;
}

} // namespace softwg
