#include "softwg/eigensolve.hpp"

#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace softwg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double c, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

// y = (A - sigma) x
void shifted_multiply(const SparseSymMatrix& A, double sigma, std::span<const double> x,
                      std::span<double> y, int threads) {
    A.multiply(x, y, threads);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] -= sigma * x[i];
}

// (preconditioned) conjugate gradients for the SPD operator A - sigma I
void pcg_solve(const SparseSymMatrix& A, double sigma, const LinearOperator* prec,
               std::span<const double> b, std::span<double> x, int threads) {
    const std::size_t n = b.size();
    std::fill(x.begin(), x.end(), 0.0);
    std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return;
    const double target = 1e-12 * bnorm;

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (prec)
            prec->apply(in, out);
        else
            std::copy(in.begin(), in.end(), out.begin());
    };

    precondition(r, z);
    std::copy(z.begin(), z.end(), p.begin());
    double rz = dot(r, z);

    const int max_it = 50000;
    for (int it = 1; it <= max_it; ++it) {
        shifted_multiply(A, sigma, p, q, threads);
        const double pq = dot(p, q);
        if (!(pq > 0.0))
            throw NotConverged("eigensolve: inner system lost positive definiteness", {}, {}, it);
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        if (norm2(r) <= target) return;
        precondition(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NotConverged("eigensolve: inner conjugate-gradient solve stalled", {}, {}, max_it);
}

} // namespace

DenseEig dense_eig(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw Error("dense_eig: matrix size mismatch");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double norm_f = 0.0;
    for (double x : a) norm_f += x * x;
    norm_f = std::sqrt(norm_f);
    const double target = 1e-12 * std::max(norm_f, 1e-300);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i * n + p], viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

    DenseEig out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a[order[k] * n + order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i * n + order[k]];
    }
    return out;
}

EigenResult lowest_eigenpairs(const SparseSymMatrix& A, const EigenRequest& req, int threads,
                              const PreconditionerFactory& make_preconditioner) {
    const std::size_t n = A.dimension();
    if (req.k < 1 || static_cast<std::size_t>(req.k) > n)
        throw Error("eigensolve: k out of range");
    if (!(req.tol > 0.0)) throw Error("eigensolve: tol must be positive");
    const int k = req.k;

    const auto bounds = A.gershgorin();
    const double scale = std::max({std::abs(bounds.low), std::abs(bounds.high), 1e-30});
    const double spread = std::max(bounds.high - bounds.low, 1e-30);
    const double sigma =
        bounds.low - std::max({0.25 * std::abs(bounds.low), 1e-3 * spread, 1e-8 * scale});

    std::unique_ptr<LinearOperator> prec;
    if (make_preconditioner) prec = make_preconditioner(sigma);

    const int m_max =
        static_cast<int>(std::min<std::size_t>(n, std::max(3 * std::size_t(k) + 24, std::size_t{30})));
    const int keep = std::min(2 * k + 6, std::max(m_max - 8, 1));

    std::vector<std::vector<double>> basis; // processed columns + one trailing vector
    basis.reserve(m_max + 1);
    std::vector<double> T((m_max + 1) * (m_max + 1), 0.0);
    auto t_at = [&](int i, int j) -> double& { return T[i * (m_max + 1) + j]; };

    {
        std::vector<double> v0(n);
        for (std::size_t i = 0; i < n; ++i) v0[i] = uniform01(req.seed, i) - 0.5;
        const double nv = norm2(v0);
        for (double& x : v0) x /= nv;
        basis.push_back(std::move(v0));
    }

    int applied = 0;
    std::vector<double> w(n);

    while (true) {
        // --- expand: process trailing columns until the space is full -----
        const int start = static_cast<int>(basis.size()) - 1;
        int m = start;
        double beta = -1.0;
        for (int j = start; j < m_max; ++j) {
            pcg_solve(A, sigma, prec.get(), basis[j], w, threads);
            ++applied;
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const double h = dot(basis[i], w);
                    axpy(-h, basis[i], w);
                    if (pass == 0)
                        t_at(i, j) = h;
                    else
                        t_at(i, j) += h;
                }
            }
            for (int i = 0; i <= j; ++i) t_at(j, i) = t_at(i, j);
            m = j + 1;
            beta = norm2(w);
            const double op_scale = std::max(std::abs(t_at(j, j)), 1e-30);
            if (beta <= 1e-13 * op_scale || m >= static_cast<int>(n)) {
                beta = 0.0;
                break;
            }
            if (applied >= req.max_iterations) break;
            std::vector<double> v_next(w);
            for (double& x : v_next) x /= beta;
            t_at(j, j + 1) = beta;
            t_at(j + 1, j) = beta;
            basis.push_back(std::move(v_next));
        }

        // --- Ritz pairs of the projected operator ------------------------
        std::vector<double> tm(m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) tm[i * m + j] = t_at(i, j);
        const DenseEig small = dense_eig(std::move(tm), m);

        const int avail = std::min(k, m);
        bool all_pass = avail == k;
        for (int i = 0; i < avail && all_pass; ++i) {
            const int src = m - 1 - i; // descending nu = ascending lambda
            const double nu = std::max(small.values[src], 1e-300);
            const double b_res = beta * std::abs(small.vectors[src][m - 1]);
            if ((bounds.high - sigma) * b_res / nu > req.tol * scale) all_pass = false;
        }

        const bool budget_out = applied >= req.max_iterations;
        if (all_pass || beta == 0.0 || budget_out) {
            // assemble candidates and verify against true residuals
            std::vector<std::pair<double, int>> lam;
            for (int i = 0; i < avail; ++i) {
                const int src = m - 1 - i;
                lam.emplace_back(sigma + 1.0 / std::max(small.values[src], 1e-300), src);
            }
            std::sort(lam.begin(), lam.end());
            EigenResult out;
            out.iterations = applied;
            bool ok = avail == k;
            for (auto [lambda, src] : lam) {
                std::vector<double> x(n, 0.0);
                for (int c = 0; c < m; ++c) axpy(small.vectors[src][c], basis[c], x);
                const double xn = norm2(x);
                for (double& c : x) c /= xn;
                std::vector<double> ax(n);
                A.multiply(x, ax, threads);
                axpy(-lambda, x, ax);
                const double res = norm2(ax) / scale;
                out.values.push_back(lambda);
                out.vectors.push_back(std::move(x));
                out.residuals.push_back(res);
                if (res > req.tol) ok = false;
            }
            if (ok) return out;
            if (budget_out || beta == 0.0)
                throw NotConverged("eigensolve: iteration budget exhausted", out.values,
                                   out.residuals, applied);
        }

        // --- thick restart ------------------------------------------------
        const int kp = std::max(1, std::min(keep, m - 1));
        std::vector<std::vector<double>> new_basis;
        new_basis.reserve(kp + 1);
        std::fill(T.begin(), T.end(), 0.0);
        for (int i = 0; i < kp; ++i) {
            const int src = m - 1 - i;
            std::vector<double> x(n, 0.0);
            for (int c = 0; c < m; ++c) axpy(small.vectors[src][c], basis[c], x);
            new_basis.push_back(std::move(x));
            t_at(i, i) = small.values[src];
            const double arrow = beta * small.vectors[src][m - 1];
            t_at(i, kp) = arrow;
            t_at(kp, i) = arrow;
        }
        std::vector<double> v_res(n);
        if (beta > 0.0) {
            for (std::size_t i = 0; i < n; ++i) v_res[i] = w[i] / beta;
        } else {
            for (std::size_t i = 0; i < n; ++i) v_res[i] = uniform01(req.seed + 1, i) - 0.5;
            for (const auto& b : new_basis) axpy(-dot(b, v_res), b, v_res);
            const double nv = norm2(v_res);
            for (double& x : v_res) x /= nv;
            for (int i = 0; i < kp; ++i) {
                t_at(i, kp) = 0.0;
                t_at(kp, i) = 0.0;
            }
        }
        new_basis.push_back(std::move(v_res));
        basis = std::move(new_basis);
    }
}

} // namespace softwg
