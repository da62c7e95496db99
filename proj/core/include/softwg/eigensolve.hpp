#pragma once

#include "softwg/sparse.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace softwg {

struct EigenRequest {
    int k = 1;                ///< number of lowest eigenpairs
    double tol = 1e-10;       ///< residual tolerance relative to the spectral scale
    int max_iterations = 400; ///< budget of shift-inverted operator applications
    std::uint64_t seed = 1;   ///< deterministic start vector
};

struct EigenResult {
    std::vector<double> values;               ///< ascending
    std::vector<std::vector<double>> vectors; ///< orthonormal, matching order
    std::vector<double> residuals; ///< ||A v - lambda v|| / (||v|| * spectral scale)
    int iterations = 0;            ///< operator applications spent
};

/// Fixed SPD linear operator (used for preconditioning the inner solves).
class LinearOperator {
  public:
    virtual ~LinearOperator() = default;
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
};

/// Called once the spectral shift sigma is chosen; returns an approximate
/// inverse of A - sigma*I, or nullptr for plain CG.
using PreconditionerFactory =
    std::function<std::unique_ptr<LinearOperator>(double sigma)>;

/// k smallest eigenpairs of a symmetric sparse matrix.
///
/// Realization: shift-invert Lanczos with thick restarts and full
/// reorthogonalization. The shift sits below the Gershgorin lower bound, so
/// A - sigma*I is positive definite and the inner solves run (preconditioned)
/// conjugate gradients. Deterministic for a fixed seed: the start vector is
/// counter-based and every reduction has a fixed order, independent of the
/// thread count used for the matrix products.
///
/// Throws NotConverged (carrying best-so-far values/residuals) if the
/// iteration budget runs out.
EigenResult lowest_eigenpairs(const SparseSymMatrix& A, const EigenRequest& req,
                              int threads = 1,
                              const PreconditionerFactory& make_preconditioner = {});

/// Full eigendecomposition of a small dense symmetric matrix (row-major,
/// n x n) by cyclic Jacobi sweeps; off-diagonal Frobenius mass is driven
/// below 1e-12 * ||A||_F. Values ascending, vectors[i] matches values[i].
struct DenseEig {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
DenseEig dense_eig(std::vector<double> a, std::size_t n);

} // namespace softwg
