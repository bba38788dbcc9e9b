// gauss_legendre.hpp
// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// three-term recurrence.  Nodes converge to machine precision for the small
// orders used here (<= 64).

#ifndef TORUS_GAUSS_LEGENDRE_HPP
#define TORUS_GAUSS_LEGENDRE_HPP

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "torus/common.hpp"

namespace torus {

struct Quadrature {
    std::vector<double> nodes;    // in (-1, 1)
    std::vector<double> weights;  // sum to 2
};

inline Quadrature gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess for the i-th root of P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = x;
        q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

// Cached accessor; quadrature tables are immutable once built.
inline const Quadrature& gauss_legendre_cached(int n) {
    static std::mutex mutex;
    static std::unordered_map<int, Quadrature> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

}  // namespace torus

#endif  // TORUS_GAUSS_LEGENDRE_HPP
