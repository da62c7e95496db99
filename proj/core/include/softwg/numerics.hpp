#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace softwg {

/// Gauss-Legendre rule on [-1,1]. Nodes computed once by Newton iteration on
/// the Legendre recurrence; accurate to machine precision for order <= 64.
class GaussLegendre {
  public:
    explicit GaussLegendre(int order);

    int order() const { return static_cast<int>(nodes_.size()); }

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            acc += weights_[i] * f(mid + half * nodes_[i]);
        return half * acc;
    }

  private:
    std::vector<double> nodes_, weights_;
};

/// Shared, lazily built rule cache (orders are few and small).
const GaussLegendre& gauss_rule(int order);

/// Composite integration over consecutive panels [b0,b1],[b1,b2],...
/// Summation runs left to right in a fixed order.
template <class F>
double integrate_panels(F&& f, const std::vector<double>& breaks, int order) {
    const GaussLegendre& rule = gauss_rule(order);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) acc += rule.integrate(f, breaks[i], breaks[i + 1]);
    return acc;
}

/// Breakpoints covering [a,b] graded for integrands that decay like
/// e^{-rate*(x-a)}: panels of width ~2/rate until the factor is dead
/// (~1e-20), then a single closing panel. rate <= 0 gives {a,b}.
std::vector<double> graded_breakpoints(double a, double b, double rate);

/// Merge, sort and deduplicate breakpoints, keeping only values in [a,b].
std::vector<double> clip_breakpoints(std::vector<double> pts, double a, double b);

/// Counter-based generator (splitmix64): value i of stream `seed` in [0,1).
/// Bit-reproducible regardless of threading or call order.
double uniform01(std::uint64_t seed, std::uint64_t index);

/// Fixed 17-significant-digit decimal formatting ("%.17g").
std::string format_g17(double x);

/// Resolve a requested thread count: n > 0 is taken as is, n <= 0 means
/// hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Static-partition parallel loop over [0,n); fn(begin,end) per chunk.
/// With threads == 1 runs inline. Chunk boundaries depend only on `threads`.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace softwg
