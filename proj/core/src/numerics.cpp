#include "softwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

namespace softwg {

GaussLegendre::GaussLegendre(int order) {
    nodes_.resize(order);
    weights_.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n(x)
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes_[i] = -x;
        nodes_[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights_[i] = w;
        weights_[order - 1 - i] = w;
    }
}

const GaussLegendre& gauss_rule(int order) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
    return it->second;
}

std::vector<double> graded_breakpoints(double a, double b, double rate) {
    std::vector<double> pts{a};
    if (rate > 0.0 && b > a) {
        const double width = 2.0 / rate;
        const double reach = 46.0 / rate; // e^{-46} ~ 1e-20
        double x = a;
        while (x + width < b && x + width < a + reach) {
            x += width;
            pts.push_back(x);
        }
    }
    if (b > pts.back()) pts.push_back(b);
    return pts;
}

std::vector<double> clip_breakpoints(std::vector<double> pts, double a, double b) {
    pts.push_back(a);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts) {
        if (p < a || p > b) continue;
        if (out.empty() || p > out.back()) out.push_back(p);
    }
    return out;
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(threads, n);
    const std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace softwg
