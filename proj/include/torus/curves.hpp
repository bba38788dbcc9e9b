// curves.hpp
// Parametrizations of the supported 1-dimensional supports in T^2: circles
// and the oval level set cos(2pi x)cos(2pi y) + cos(2pi x) + cos(2pi y) = 1/4.
// A parametrization maps t in [0,1) to a point (coordinates may be returned
// in R^d; they are interpreted mod 1) together with the speed ||gamma'(t)||.

#ifndef TORUS_CURVES_HPP
#define TORUS_CURVES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/gauss_legendre.hpp"

namespace torus {

struct CurvePoint {
    std::vector<double> x;
    double speed = 0.0;
};

using CurveFn = std::function<CurvePoint(double)>;

inline CurveFn circle_curve_fn(std::array<double, 2> center, double radius) {
    if (!(radius > 0.0) || !(radius < 0.5))
        throw std::invalid_argument("circle_curve_fn: radius must lie in (0, 1/2)");
    return [center, radius](double t) {
        double a = tau * t;
        CurvePoint p;
        p.x = {center[0] + radius * std::cos(a), center[1] + radius * std::sin(a)};
        p.speed = tau * radius;
        return p;
    };
}

// Degenerate single-point "curve"; integrates like a Dirac with unit speed.
inline CurveFn constant_curve_fn(std::vector<double> x0) {
    return [x0](double) {
        CurvePoint p;
        p.x = x0;
        p.speed = 1.0;
        return p;
    };
}

namespace detail {

struct OvalEval {
    double value;   // F(rho, theta)
    double d_rho;   // dF/drho
    double d_theta; // dF/dtheta
};

inline OvalEval oval_level(double rho, double ct, double st) {
    double a = tau * rho * ct;
    double b = tau * rho * st;
    double ca = std::cos(a), sa = std::sin(a);
    double cb = std::cos(b), sb = std::sin(b);
    OvalEval e;
    e.value = ca * cb + ca + cb - 0.25;
    e.d_rho = -tau * (ct * sa * (cb + 1.0) + st * sb * (ca + 1.0));
    e.d_theta = tau * rho * (st * sa * (cb + 1.0) - ct * sb * (ca + 1.0));
    return e;
}

// Radial solve: the level set is star-shaped around the origin and each term
// of F decreases in rho on the bracket below, so the root is unique.
inline double oval_radius(double ct, double st, double* d_rho = nullptr,
                          double* d_theta = nullptr) {
    double lo = 0.25, hi = 0.35;
    double rho = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
        double mid = 0.5 * (lo + hi);
        if (oval_level(mid, ct, st).value > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    rho = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        OvalEval e = oval_level(rho, ct, st);
        double step = e.value / e.d_rho;
        rho -= step;
        if (std::abs(step) < 1e-15) break;
    }
    OvalEval e = oval_level(rho, ct, st);
    if (d_rho) *d_rho = e.d_rho;
    if (d_theta) *d_theta = e.d_theta;
    return rho;
}

}  // namespace detail

// The implicitly defined oval, parametrized by the polar angle around the
// origin: gamma(t) = rho(2 pi t) (cos, sin).
inline CurveFn trig_oval_curve_fn() {
    return [](double t) {
        double theta = tau * t;
        double ct = std::cos(theta), st = std::sin(theta);
        double d_rho = 0.0, d_theta = 0.0;
        double rho = detail::oval_radius(ct, st, &d_rho, &d_theta);
        double rho_prime = -d_theta / d_rho;
        CurvePoint p;
        p.x = {rho * ct, rho * st};
        p.speed = tau * std::hypot(rho, rho_prime);
        return p;
    };
}

// Arc length by composite Gauss-Legendre over [0,1).
inline double curve_arclength(const CurveFn& gamma, int panels = 1024, int nodes = 8) {
    const Quadrature& q = gauss_legendre_cached(nodes);
    double total = 0.0;
    double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = (p + 0.5) * h;
        for (int i = 0; i < nodes; ++i)
            total += 0.5 * h * q.weights[i] * gamma(mid + 0.5 * h * q.nodes[i]).speed;
    }
    return total;
}

}  // namespace torus

#endif  // TORUS_CURVES_HPP
