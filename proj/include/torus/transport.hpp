// transport.hpp
// Wasserstein-1 front end: exact 1-D route through the Bernoulli spline,
// semidiscrete route for 2-D density-vs-discrete pairs, curve targets
// sampled into equal-weight atoms first.

#ifndef TORUS_TRANSPORT_HPP
#define TORUS_TRANSPORT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "torus/bernoulli.hpp"
#include "torus/kernels.hpp"
#include "torus/measure.hpp"
#include "torus/moments.hpp"
#include "torus/semidiscrete.hpp"
#include "torus/trig_poly.hpp"

namespace torus {

struct TransportOptions {
    int grid = 502;      // density evaluation grid per axis
    int samples = 3000;  // curve sampling count
    Norm metric = Norm::L2;
    BfgsOptions bfgs;
    unsigned workers = 0;
};

struct W1Result {
    double w1 = 0.0;
    std::string route;        // "bernoulli" | "semidiscrete"
    int iterations = 0;
    double grad_inf_norm = 0.0;
    std::string termination = "exact";
    bool converged = true;
    Eigen::VectorXd weights;  // dual weights when the semidiscrete route ran
};

using W1Input = std::variant<Measure, TrigPolynomial>;

namespace detail {

inline int input_dim(const W1Input& in) {
    return std::holds_alternative<Measure>(in) ? std::get<Measure>(in).dim
                                               : std::get<TrigPolynomial>(in).dim;
}

inline std::optional<Discrete> as_discrete_target(const Measure& m, int samples) {
    if (std::holds_alternative<Discrete>(m.shape)) return std::get<Discrete>(m.shape);
    if (std::holds_alternative<CircleUniform>(m.shape) ||
        std::holds_alternative<ParametricCurve>(m.shape)) {
        Measure sampled = sample_curve(m, samples);
        return std::get<Discrete>(sampled.shape);
    }
    return std::nullopt;
}

inline std::optional<std::vector<double>> as_density_grid(const W1Input& in, int grid) {
    if (const auto* p = std::get_if<TrigPolynomial>(&in))
        return eval_grid_real(*p, grid, /*warn=*/false);
    const Measure& m = std::get<Measure>(in);
    if (const auto* g = std::get_if<GridDensity>(&m.shape)) {
        std::vector<double> values(g->values.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = g->values[i].real();
        if (g->grid != grid && grid > 0) {
            // keep the stored resolution; grids need not match the request
        }
        return values;
    }
    if (std::holds_alternative<Lebesgue>(m.shape))
        return std::vector<double>(static_cast<std::size_t>(grid) * grid, 1.0);
    return std::nullopt;
}

inline int stored_grid(const W1Input& in, int fallback) {
    if (const auto* m = std::get_if<Measure>(&in))
        if (const auto* g = std::get_if<GridDensity>(&m->shape)) return g->grid;
    return fallback;
}

}  // namespace detail

inline W1Result w1_auto(const W1Input& a, const W1Input& b,
                        const TransportOptions& opts = {}) {
    int d = detail::input_dim(a);
    if (d != detail::input_dim(b))
        throw std::invalid_argument("w1_auto: dimension mismatch");

    W1Result res;
    if (d == 1) {
        double v = std::visit([](const auto& x, const auto& y) { return w1_1d(x, y); },
                              a, b);
        res.w1 = v;
        res.route = "bernoulli";
        return res;
    }
    if (d != 2)
        throw std::invalid_argument("w1_auto: only d = 1 and d = 2 are supported");

    // 2-D: one side must provide a density grid, the other a discrete target
    // (curves are sampled).
    for (int swap = 0; swap < 2; ++swap) {
        const W1Input& da = swap ? b : a;
        const W1Input& db = swap ? a : b;
        auto density = detail::as_density_grid(da, opts.grid);
        if (!density) continue;
        if (!std::holds_alternative<Measure>(db)) continue;
        auto target = detail::as_discrete_target(std::get<Measure>(db), opts.samples);
        if (!target) continue;

        int grid = detail::stored_grid(da, opts.grid);
        std::vector<std::array<double, 2>> atoms(target->points.size());
        std::vector<double> lambda(target->points.size());
        for (std::size_t j = 0; j < target->points.size(); ++j) {
            atoms[j] = {target->points[j][0], target->points[j][1]};
            if (std::abs(target->weights[j].imag()) > 1e-12)
                throw std::invalid_argument("w1_auto: target weights must be real");
            lambda[j] = target->weights[j].real();
        }
        SemidiscreteProblem prob = make_semidiscrete_problem(
            grid, std::move(*density), std::move(atoms), std::move(lambda), opts.metric);
        SemidiscreteResult sr = w1_semidiscrete(prob, opts.bfgs, opts.workers);
        res.w1 = sr.w1;
        res.route = "semidiscrete";
        res.iterations = sr.iterations;
        res.grad_inf_norm = sr.grad_inf_norm;
        res.termination = sr.termination;
        res.converged = sr.converged;
        res.weights = sr.weights;
        return res;
    }
    throw std::invalid_argument(
        "w1_auto: unsupported 2-D pairing (discrete-vs-discrete transport is not "
        "implemented; compare a density against a discrete or sampled target)");
}

}  // namespace torus

#endif  // TORUS_TRANSPORT_HPP
