// common.hpp
// Shared scalar types, wrap-around metrics on the torus [0,1)^d, and
// multi-index boxes {-n..n}^d used throughout the library.

#ifndef TORUS_COMMON_HPP
#define TORUS_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

using cplx = std::complex<double>;

inline constexpr double tau = 2.0 * std::numbers::pi_v<double>;
inline constexpr double pi = std::numbers::pi_v<double>;

// Wrap a coordinate into [0,1).
inline double wrap01(double x) {
    double f = x - std::floor(x);
    return (f == 1.0) ? 0.0 : f;
}

// Signed representative of x mod 1 in [-1/2, 1/2).
inline double wrap_half(double x) {
    double f = x - std::floor(x + 0.5);
    return (f >= 0.5) ? f - 1.0 : f;
}

enum class Norm { L1, L2, Linf };

// Wrap-around p-distance |x-y|_p = min_{k in Z^d} ||x-y+k||_p.  The minimum
// separates per coordinate for all three norms.
inline double wrap_dist(std::span<const double> x, std::span<const double> y,
                        Norm p = Norm::L2) {
    if (x.size() != y.size())
        throw std::invalid_argument("wrap_dist: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double di = std::abs(wrap_half(x[i] - y[i]));
        switch (p) {
            case Norm::L1: acc += di; break;
            case Norm::L2: acc += di * di; break;
            case Norm::Linf: acc = std::max(acc, di); break;
        }
    }
    return (p == Norm::L2) ? std::sqrt(acc) : acc;
}

inline double wrap_dist_inf(std::span<const double> x, std::span<const double> y) {
    return wrap_dist(x, y, Norm::Linf);
}

// Symmetric index box {-n..n}^d, row-major with the last axis fastest.
struct IndexBox {
    int dim = 1;
    int order = 0;

    int side() const { return 2 * order + 1; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(side());
        return s;
    }

    std::size_t flatten(std::span<const int> k) const {
        std::size_t idx = 0;
        for (int i = 0; i < dim; ++i) {
            if (k[i] < -order || k[i] > order)
                throw std::out_of_range("IndexBox: index outside box");
            idx = idx * static_cast<std::size_t>(side()) +
                  static_cast<std::size_t>(k[i] + order);
        }
        return idx;
    }

    void unflatten(std::size_t idx, std::span<int> k) const {
        for (int i = dim - 1; i >= 0; --i) {
            k[i] = static_cast<int>(idx % static_cast<std::size_t>(side())) - order;
            idx /= static_cast<std::size_t>(side());
        }
    }
};

// One-sided box [n] = {0..n}^d used for moment-matrix rows/columns.
struct OneSidedBox {
    int dim = 1;
    int order = 0;

    int side() const { return order + 1; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(side());
        return s;
    }
    void unflatten(std::size_t idx, std::span<int> k) const {
        for (int i = dim - 1; i >= 0; --i) {
            k[i] = static_cast<int>(idx % static_cast<std::size_t>(side()));
            idx /= static_cast<std::size_t>(side());
        }
    }
};

inline std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace torus

#endif  // TORUS_COMMON_HPP
