#include "multigrid.hpp"

#include "softwg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace softwg {

namespace {

constexpr int kCoarseTarget = 2000; // stop coarsening below this many unknowns
constexpr double kOmega = 0.8;      // Jacobi damping

} // namespace

bool GridVCycle::feasible(int nx, int ny) {
    // one proper coarsening step at least, i.e. both cell counts even
    return nx >= 7 && ny >= 7 && (nx + 1) % 2 == 0 && (ny + 1) % 2 == 0;
}

GridVCycle::GridVCycle(int nx, int ny, double h, std::vector<double> potential_minus_sigma) {
    if (static_cast<std::size_t>(nx) * ny != potential_minus_sigma.size())
        throw Error("multigrid: potential size mismatch");
    Level fine{nx, ny, h, std::move(potential_minus_sigma), {}, {}, {}};
    levels_.push_back(std::move(fine));
    while (true) {
        const Level& lv = levels_.back();
        const long unknowns = static_cast<long>(lv.nx) * lv.ny;
        const bool halvable = (lv.nx + 1) % 2 == 0 && (lv.ny + 1) % 2 == 0 && lv.nx >= 7 &&
                              lv.ny >= 7;
        if (!halvable || unknowns <= kCoarseTarget) break;
        Level c;
        c.nx = (lv.nx + 1) / 2 - 1;
        c.ny = (lv.ny + 1) / 2 - 1;
        c.h = 2.0 * lv.h;
        c.pot.resize(static_cast<std::size_t>(c.nx) * c.ny);
        for (int J = 0; J < c.ny; ++J)
            for (int I = 0; I < c.nx; ++I)
                c.pot[static_cast<std::size_t>(J) * c.nx + I] =
                    lv.pot[static_cast<std::size_t>(2 * J + 1) * lv.nx + (2 * I + 1)];
        levels_.push_back(std::move(c));
    }
    for (Level& lv : levels_) {
        const std::size_t n = static_cast<std::size_t>(lv.nx) * lv.ny;
        lv.sol.assign(n, 0.0);
        lv.rhs.assign(n, 0.0);
        lv.res.assign(n, 0.0);
    }

    // dense Cholesky of the coarsest operator
    const Level& lv = levels_.back();
    coarse_dim_ = lv.nx * lv.ny;
    const double ih2 = 1.0 / (lv.h * lv.h);
    std::vector<double> a(static_cast<std::size_t>(coarse_dim_) * coarse_dim_, 0.0);
    auto at = [&](int r, int c) -> double& {
        return a[static_cast<std::size_t>(r) * coarse_dim_ + c];
    };
    for (int j = 0; j < lv.ny; ++j) {
        for (int i = 0; i < lv.nx; ++i) {
            const int r = j * lv.nx + i;
            at(r, r) = 4.0 * ih2 + lv.pot[r];
            if (i + 1 < lv.nx) at(r, r + 1) = at(r + 1, r) = -ih2;
            if (j + 1 < lv.ny) at(r, r + lv.nx) = at(r + lv.nx, r) = -ih2;
        }
    }
    chol_.assign(a.size(), 0.0);
    for (int i = 0; i < coarse_dim_; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = at(i, j);
            for (int k = 0; k < j; ++k)
                sum -= chol_[static_cast<std::size_t>(i) * coarse_dim_ + k] *
                       chol_[static_cast<std::size_t>(j) * coarse_dim_ + k];
            if (i == j) {
                if (!(sum > 0.0)) throw Error("multigrid: coarsest operator not positive definite");
                chol_[static_cast<std::size_t>(i) * coarse_dim_ + j] = std::sqrt(sum);
            } else {
                chol_[static_cast<std::size_t>(i) * coarse_dim_ + j] =
                    sum / chol_[static_cast<std::size_t>(j) * coarse_dim_ + j];
            }
        }
    }
}

void GridVCycle::smooth(const Level& lv, int sweeps) const {
    const double ih2 = 1.0 / (lv.h * lv.h);
    const int nx = lv.nx, ny = lv.ny;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        residual(lv);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t r = static_cast<std::size_t>(j) * nx + i;
                lv.sol[r] += kOmega * lv.res[r] / (4.0 * ih2 + lv.pot[r]);
            }
        }
    }
}

void GridVCycle::residual(const Level& lv) const {
    const double ih2 = 1.0 / (lv.h * lv.h);
    const int nx = lv.nx, ny = lv.ny;
    const std::vector<double>& x = lv.sol;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t r = static_cast<std::size_t>(j) * nx + i;
            double ax = (4.0 * ih2 + lv.pot[r]) * x[r];
            if (i > 0) ax -= ih2 * x[r - 1];
            if (i + 1 < nx) ax -= ih2 * x[r + 1];
            if (j > 0) ax -= ih2 * x[r - nx];
            if (j + 1 < ny) ax -= ih2 * x[r + nx];
            lv.res[r] = lv.rhs[r] - ax;
        }
    }
}

void GridVCycle::coarse_solve(const Level& lv) const {
    // forward/back substitution with the prefactored Cholesky
    const int n = coarse_dim_;
    std::vector<double>& x = lv.sol;
    std::copy(lv.rhs.begin(), lv.rhs.end(), x.begin());
    for (int i = 0; i < n; ++i) {
        double sum = x[i];
        for (int k = 0; k < i; ++k)
            sum -= chol_[static_cast<std::size_t>(i) * n + k] * x[k];
        x[i] = sum / chol_[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = x[i];
        for (int k = i + 1; k < n; ++k)
            sum -= chol_[static_cast<std::size_t>(k) * n + i] * x[k];
        x[i] = sum / chol_[static_cast<std::size_t>(i) * n + i];
    }
}

void GridVCycle::vcycle(std::size_t l) const {
    const Level& lv = levels_[l];
    std::fill(lv.sol.begin(), lv.sol.end(), 0.0);
    if (l + 1 == levels_.size()) {
        coarse_solve(lv);
        return;
    }
    smooth(lv, 2);
    residual(lv);

    // full-weighting restriction of the residual
    const Level& cv = levels_[l + 1];
    auto rf = [&](int i, int j) -> double {
        if (i < 0 || j < 0 || i >= lv.nx || j >= lv.ny) return 0.0;
        return lv.res[static_cast<std::size_t>(j) * lv.nx + i];
    };
    for (int J = 0; J < cv.ny; ++J) {
        for (int I = 0; I < cv.nx; ++I) {
            const int i = 2 * I + 1, j = 2 * J + 1;
            cv.rhs[static_cast<std::size_t>(J) * cv.nx + I] =
                (4.0 * rf(i, j) +
                 2.0 * (rf(i - 1, j) + rf(i + 1, j) + rf(i, j - 1) + rf(i, j + 1)) +
                 rf(i - 1, j - 1) + rf(i + 1, j - 1) + rf(i - 1, j + 1) + rf(i + 1, j + 1)) /
                16.0;
        }
    }
    vcycle(l + 1);

    // bilinear prolongation of the coarse correction
    auto cc = [&](int I, int J) -> double {
        if (I < 0 || J < 0 || I >= cv.nx || J >= cv.ny) return 0.0;
        return cv.sol[static_cast<std::size_t>(J) * cv.nx + I];
    };
    for (int j = 0; j < lv.ny; ++j) {
        const int J = (j - 1) / 2;
        const bool j_on = (j % 2 == 1);
        for (int i = 0; i < lv.nx; ++i) {
            const int I = (i - 1) / 2;
            const bool i_on = (i % 2 == 1);
            double e;
            if (i_on && j_on) {
                e = cc(I, J);
            } else if (i_on) {
                const int Jl = j / 2 - 1, Jr = j / 2;
                e = 0.5 * (cc(I, Jl) + cc(I, Jr));
            } else if (j_on) {
                const int Il = i / 2 - 1, Ir = i / 2;
                e = 0.5 * (cc(Il, J) + cc(Ir, J));
            } else {
                const int Il = i / 2 - 1, Ir = i / 2;
                const int Jl = j / 2 - 1, Jr = j / 2;
                e = 0.25 * (cc(Il, Jl) + cc(Ir, Jl) + cc(Il, Jr) + cc(Ir, Jr));
            }
            lv.sol[static_cast<std::size_t>(j) * lv.nx + i] += e;
        }
    }
    smooth(lv, 2);
}

void GridVCycle::apply(std::span<const double> x, std::span<double> y) const {
    const Level& fine = levels_.front();
    std::copy(x.begin(), x.end(), fine.rhs.begin());
    vcycle(0);
    std::copy(fine.sol.begin(), fine.sol.end(), y.begin());
}

} // namespace softwg
