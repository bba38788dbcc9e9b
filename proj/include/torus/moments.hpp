// moments.hpp
// Moment generation: exact sums for discrete measures, the Bessel closed
// form for circles, panel-doubling Gauss-Legendre quadrature for parametric
// curves, FFT sampling for grid densities, and closed forms (plus one smooth
// 1-D quadrature) for the built-in singular test measure.

#ifndef TORUS_MOMENTS_HPP
#define TORUS_MOMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "torus/bessel.hpp"
#include "torus/common.hpp"
#include "torus/fft.hpp"
#include "torus/gauss_legendre.hpp"
#include "torus/measure.hpp"
#include "torus/moment_table.hpp"
#include "torus/parallel.hpp"

namespace torus {

struct MomentOptions {
    double curve_tol = 1e-10;  // absolute target per normalized moment
    int curve_min_level = 3;   // 2^level panels
    int curve_max_level = 12;
    int curve_nodes = 32;      // Gauss-Legendre points per panel
    unsigned workers = 0;
};

inline MomentTable moments_discrete(const Discrete& atoms, int dim, int n) {
    for (const auto& p : atoms.points)
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("moments_discrete: dimension mismatch");
    if (atoms.points.empty())
        throw std::invalid_argument("moments_discrete: empty support");
    MomentTable table(dim, n);
    const int side = 2 * n + 1;
    const std::size_t natoms = atoms.points.size();
    // Per-atom, per-axis phase tables e^{-2 pi i k x}.
    std::vector<cplx> phases(natoms * static_cast<std::size_t>(dim) * side);
    for (std::size_t j = 0; j < natoms; ++j)
        for (int a = 0; a < dim; ++a) {
            cplx* row = &phases[(j * dim + a) * side];
            double x = atoms.points[j][a];
            for (int k = -n; k <= n; ++k) row[k + n] = std::polar(1.0, -tau * k * x);
        }
    IndexBox box = table.box();
    std::vector<int> k(dim);
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
        box.unflatten(idx, k);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < natoms; ++j) {
            cplx term = atoms.weights[j];
            for (int a = 0; a < dim; ++a)
                term *= phases[(j * dim + a) * side + (k[a] + n)];
            acc += term;
        }
        table.values[idx] = acc;
    }
    return table;
}

inline MomentTable moments_circle(const CircleUniform& c, int n) {
    if (!(c.radius > 0.0) || !(c.radius < 0.5))
        throw std::invalid_argument("moments_circle: radius outside (0, 1/2)");
    MomentTable table(2, n);
    IndexBox box = table.box();
    std::vector<int> k(2);
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
        box.unflatten(idx, k);
        double knorm = std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
        double phase = -tau * (k[0] * c.center[0] + k[1] * c.center[1]);
        table.values[idx] = std::polar(1.0, phase) * bessel_j0(tau * c.radius * knorm);
    }
    return table;
}

namespace detail {

// Nodes shared by every moment of one curve: per dyadic level, the quadrature
// abscissae with weights already multiplied by the local speed.
struct CurveLevels {
    int dim;
    int nodes;
    std::vector<std::vector<double>> pts;  // level -> dim-interleaved points
    std::vector<std::vector<double>> wts;  // level -> weight * speed
    std::vector<double> mass;              // level -> sum of weights
    std::mutex mutex;

    CurveLevels(int d, int max_level, int gl_nodes)
        : dim(d), nodes(gl_nodes), pts(max_level + 1), wts(max_level + 1),
          mass(max_level + 1, 0.0) {}

    void ensure(const CurveFn& gamma, int level) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!wts[level].empty()) return;
        const Quadrature& q = gauss_legendre_cached(nodes);
        int panels = 1 << level;
        double h = 1.0 / panels;
        auto& w = wts[level];
        auto& x = pts[level];
        w.reserve(static_cast<std::size_t>(panels) * nodes);
        x.reserve(static_cast<std::size_t>(panels) * nodes * dim);
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            double mid = (p + 0.5) * h;
            for (int i = 0; i < nodes; ++i) {
                CurvePoint cp = gamma(mid + 0.5 * h * q.nodes[i]);
                if (static_cast<int>(cp.x.size()) != dim)
                    throw std::invalid_argument("moments_curve: curve dimension mismatch");
                double wi = 0.5 * h * q.weights[i] * cp.speed;
                w.push_back(wi);
                total += wi;
                for (int a = 0; a < dim; ++a) x.push_back(cp.x[a]);
            }
        }
        mass[level] = total;
    }
};

inline cplx curve_moment_at_level(const CurveLevels& lv, int level,
                                  std::span<const int> k) {
    const auto& w = lv.wts[level];
    const auto& x = lv.pts[level];
    const int d = lv.dim;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += k[a] * x[i * d + a];
        acc += w[i] * std::polar(1.0, -tau * phase);
    }
    return acc / lv.mass[level];
}

}  // namespace detail

// Moments of the arclength-normalized measure carried by a parametric curve.
// Panels double per level until two successive normalized estimates agree
// within tol; levels start high enough that each panel sees at most a few
// oscillation cycles.
inline MomentTable moments_curve(const ParametricCurve& curve, int dim, int n,
                                 const MomentOptions& opts = {}) {
    if (!(opts.curve_tol > 0.0)) throw std::invalid_argument("moments_curve: tol > 0");
    MomentTable table(dim, n);
    detail::CurveLevels levels(dim, opts.curve_max_level, opts.curve_nodes);
    double arclen = curve.arclength > 0.0 ? curve.arclength : curve_arclength(curve.gamma);

    IndexBox box = table.box();
    const std::size_t total = box.size();
    std::atomic<std::size_t> failures{0};

    // Conjugate symmetry: curve measures are real, fill half the box.
    const std::size_t half = total / 2;
    parallel_for(half + 1, [&](std::size_t idx) {
        std::vector<int> k(dim);
        box.unflatten(idx, k);
        double knorm = 0.0;
        for (int a = 0; a < dim; ++a) knorm += static_cast<double>(k[a]) * k[a];
        knorm = std::sqrt(knorm);
        double cycles = knorm * arclen;
        int start = opts.curve_min_level;
        while ((1 << start) * 4.0 < cycles && start < opts.curve_max_level) ++start;

        levels.ensure(curve.gamma, start);
        cplx prev = detail::curve_moment_at_level(levels, start, k);
        bool done = false;
        for (int lvl = start + 1; lvl <= opts.curve_max_level; ++lvl) {
            levels.ensure(curve.gamma, lvl);
            cplx cur = detail::curve_moment_at_level(levels, lvl, k);
            if (std::abs(cur - prev) < opts.curve_tol) {
                table.values[idx] = cur;
                done = true;
                break;
            }
            prev = cur;
        }
        if (!done) {
            table.values[idx] = prev;
            failures.fetch_add(1);
        }
    }, opts.workers);

    if (failures.load() > 0)
        throw std::runtime_error("moments_curve: " + std::to_string(failures.load()) +
                                 " moments did not converge within the panel budget");

    std::vector<int> k(dim), mk(dim);
    for (std::size_t idx = half + 1; idx < total; ++idx) {
        box.unflatten(idx, k);
        for (int a = 0; a < dim; ++a) mk[a] = -k[a];
        table.values[idx] = std::conj(table.at(mk));
    }
    return table;
}

inline MomentTable moments_grid_density(const GridDensity& g, int dim, int n) {
    int m = g.grid;
    if (m < 2 * n + 1)
        throw std::invalid_argument("moments_grid_density: grid must be >= 2n+1");
    std::vector<int> shape(dim, m);
    std::size_t total = ipow(static_cast<std::size_t>(m), dim);
    FftBuffer in(total), out(total);
    for (std::size_t i = 0; i < total; ++i) in[i] = g.values[i];
    dft(shape, in, out, FFTW_FORWARD);

    MomentTable table(dim, n);
    IndexBox box = table.box();
    std::vector<int> k(dim);
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
        box.unflatten(idx, k);
        std::size_t src = 0;
        for (int a = 0; a < dim; ++a) {
            int ka = ((k[a] % m) + m) % m;
            src = src * static_cast<std::size_t>(m) + static_cast<std::size_t>(ka);
        }
        table.values[idx] = out[src] / static_cast<double>(total);
    }
    return table;
}

inline MomentTable moments_lebesgue(int dim, int n) {
    MomentTable table(dim, n);
    std::vector<int> zero(dim, 0);
    table.at(zero) = 1.0;
    return table;
}

namespace detail {

// int_a^b exp(-2 pi i k x) dx
inline cplx segment_moment(double a, double b, int k) {
    if (k == 0) return cplx(b - a);
    cplx den(0.0, -tau * k);
    return (std::exp(den * b) - std::exp(den * a)) / den;
}

// int_0^{1/sqrt 8} cos(2 pi k u^2) du, analytic integrand.
inline double fresnel_like(int k, int nodes = 32) {
    const double upper = 1.0 / std::sqrt(8.0);
    int panels = std::max(4, (std::abs(k) + 23) / 24);
    const Quadrature& q = gauss_legendre_cached(nodes);
    double h = upper / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        double mid = (p + 0.5) * h;
        for (int i = 0; i < nodes; ++i) {
            double u = mid + 0.5 * h * q.nodes[i];
            acc += 0.5 * h * q.weights[i] * std::cos(tau * k * u * u);
        }
    }
    return acc;
}

}  // namespace detail

// Closed-form moments of the built-in singular test measure.  The pole is
// removed exactly by the substitution u^2 = |x - 7/8|, which leaves an
// analytic cosine integral.
inline MomentTable moments_singular_mix(int n) {
    MomentTable table(1, n);
    const double s2 = std::sqrt(2.0);
    for (int k = -n; k <= n; ++k) {
        cplx atom = std::polar(1.0 / 3.0, -tau * k * 0.125);
        cplx block = (8.0 / 9.0) * detail::segment_moment(0.25, 0.625, k);
        cplx flat = -(4.0 / 3.0) * detail::segment_moment(0.75, 1.0, k);
        cplx pole = (s2 / 3.0) * 4.0 * detail::fresnel_like(k) *
                    std::polar(1.0, -tau * k * 0.875);
        table.values[static_cast<std::size_t>(k + n)] = atom + block + flat + pole;
    }
    return table;
}

// Dispatcher covering every measure shape, including mixtures.
inline MomentTable moments(const Measure& m, int n, const MomentOptions& opts = {}) {
    if (n < 0) throw std::invalid_argument("moments: order must be >= 0");
    MomentTable table = std::visit(
        [&](const auto& s) -> MomentTable {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Discrete>) {
                return moments_discrete(s, m.dim, n);
            } else if constexpr (std::is_same_v<T, CircleUniform>) {
                return moments_circle(s, n);
            } else if constexpr (std::is_same_v<T, ParametricCurve>) {
                return moments_curve(s, m.dim, n, opts);
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                return moments_grid_density(s, m.dim, n);
            } else if constexpr (std::is_same_v<T, Lebesgue>) {
                return moments_lebesgue(m.dim, n);
            } else if constexpr (std::is_same_v<T, SingularMix>) {
                return moments_singular_mix(n);
            } else {
                MomentTable acc(m.dim, n);
                for (const auto& t : s.terms) {
                    MomentTable part = moments(*t.part, n, opts);
                    acc = axpy(1.0, acc, t.coeff, part);
                }
                return acc;
            }
        },
        m.shape);
    if (m.normalized && std::abs(table.moment_zero() - 1.0) > 1e-10)
        throw std::runtime_error("moments: normalized measure has moment_zero != 1");
    return table;
}

// Equal-measure sampling of a circle or parametric curve into s atoms of
// weight 1/s placed at the starting parameter of each piece.
inline Measure sample_curve(const Measure& m, int s) {
    if (s < 1) throw std::invalid_argument("sample_curve: s >= 1 required");
    Discrete atoms;
    atoms.points.reserve(s);
    atoms.weights.assign(s, cplx(1.0 / s));

    if (const auto* c = std::get_if<CircleUniform>(&m.shape)) {
        for (int l = 0; l < s; ++l) {
            double a = tau * l / s;
            atoms.points.push_back({wrap01(c->center[0] + c->radius * std::cos(a)),
                                    wrap01(c->center[1] + c->radius * std::sin(a))});
        }
        return Measure(2, std::move(atoms));
    }
    const auto* pc = std::get_if<ParametricCurve>(&m.shape);
    if (pc == nullptr)
        throw std::invalid_argument("sample_curve: measure is not a curve");

    // Cumulative arclength on a fine trapezoidal table, then inverse lookup.
    const int fine = 1 << 18;
    std::vector<double> cum(fine + 1, 0.0);
    double prev_speed = pc->gamma(0.0).speed;
    for (int i = 1; i <= fine; ++i) {
        double sp = pc->gamma(static_cast<double>(i) / fine).speed;
        cum[i] = cum[i - 1] + 0.5 * (prev_speed + sp) / fine;
        prev_speed = sp;
    }
    double total = cum[fine];
    for (int l = 0; l < s; ++l) {
        double target = total * l / s;
        auto it = std::upper_bound(cum.begin(), cum.end(), target);
        std::size_t hi = std::min<std::size_t>(cum.size() - 1,
                                               static_cast<std::size_t>(it - cum.begin()));
        std::size_t lo = hi - (hi > 0 ? 1 : 0);
        double t;
        if (hi == lo || cum[hi] == cum[lo]) {
            t = static_cast<double>(lo) / fine;
        } else {
            double frac = (target - cum[lo]) / (cum[hi] - cum[lo]);
            t = (static_cast<double>(lo) + frac) / fine;
        }
        CurvePoint cp = pc->gamma(t);
        std::vector<double> x(cp.x.size());
        for (std::size_t a = 0; a < cp.x.size(); ++a) x[a] = wrap01(cp.x[a]);
        atoms.points.push_back(std::move(x));
    }
    return Measure(m.dim, std::move(atoms));
}

}  // namespace torus

#endif  // TORUS_MOMENTS_HPP
