// semidiscrete.hpp
// Semidiscrete optimal transport on T^2 between a grid density and a
// discrete target: Laguerre cells Omega_j(w) = {y : |x_j-y| - w_j minimal}
// under the wrap-around metric, the concave dual objective
// f(w) = sum_j lambda_j w_j + sum_j int_{Omega_j}(|x_j-y| - w_j) p(y) dy,
// and its maximization by dense-inverse BFGS with Armijo backtracking.
//
// Cell masses are midpoint Riemann sums on the grid.  The per-node argmin is
// accelerated by 16x16 node blocks: an atom can win inside a block only if
// its optimistic distance beats the best pessimistic one, which prunes the
// candidate list to the local competitors.

#ifndef TORUS_SEMIDISCRETE_HPP
#define TORUS_SEMIDISCRETE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "torus/common.hpp"
#include "torus/parallel.hpp"

namespace torus {

struct SemidiscreteProblem {
    int grid = 502;              // nodes per axis; node (i,j) sits at (i/m, j/m)
    std::vector<double> density; // grid*grid, row-major, nonnegative, mean 1
    std::vector<std::array<double, 2>> atoms;
    std::vector<double> lambda;  // nonnegative, sums to one
    Norm metric = Norm::L2;
};

inline SemidiscreteProblem make_semidiscrete_problem(
    int grid, std::vector<double> density, std::vector<std::array<double, 2>> atoms,
    std::vector<double> lambda, Norm metric = Norm::L2, double mass_tol = 1e-6) {
    if (grid < 2) throw std::invalid_argument("semidiscrete: grid too small");
    if (density.size() != static_cast<std::size_t>(grid) * grid)
        throw std::invalid_argument("semidiscrete: density size mismatch");
    if (atoms.empty() || atoms.size() != lambda.size())
        throw std::invalid_argument("semidiscrete: atoms/weights mismatch");

    double mass = 0.0;
    for (double& v : density) {
        if (v < -1e-7)
            throw std::invalid_argument("semidiscrete: density has negative mass");
        if (v < 0.0) v = 0.0;  // clip FFT rounding
        mass += v;
    }
    mass /= static_cast<double>(density.size());
    if (std::abs(mass - 1.0) > mass_tol)
        throw std::invalid_argument("semidiscrete: density mass differs from 1");
    for (double& v : density) v /= mass;

    double lsum = 0.0;
    for (double l : lambda) {
        if (l < 0.0) throw std::invalid_argument("semidiscrete: negative target weight");
        lsum += l;
    }
    if (std::abs(lsum - 1.0) > mass_tol)
        throw std::invalid_argument("semidiscrete: target weights must sum to 1");
    for (double& l : lambda) l /= lsum;

    return SemidiscreteProblem{grid, std::move(density), std::move(atoms),
                               std::move(lambda), metric};
}

struct LaguerrePartition {
    std::vector<std::int32_t> assign;                // node -> atom index
    std::vector<double> mass;                        // per-cell density mass
    std::vector<std::array<double, 2>> first_moment; // per-cell sum pos * mass
    double weighted_cost = 0.0;   // sum (dist - w_j) p / m^d
    double transport_cost = 0.0;  // sum dist p / m^d
};

namespace detail {

inline double torus_dist2(double ax, double ay, double bx, double by, Norm metric) {
    double dx = std::abs(wrap_half(ax - bx));
    double dy = std::abs(wrap_half(ay - by));
    switch (metric) {
        case Norm::L1: return dx + dy;
        case Norm::Linf: return std::max(dx, dy);
        case Norm::L2: default: return std::sqrt(dx * dx + dy * dy);
    }
}

}  // namespace detail

inline LaguerrePartition laguerre_partition(const SemidiscreteProblem& prob,
                                            const Eigen::VectorXd& w,
                                            unsigned workers = 0) {
    const int m = prob.grid;
    const std::size_t s = prob.atoms.size();
    if (static_cast<std::size_t>(w.size()) != s)
        throw std::invalid_argument("laguerre_partition: weight length mismatch");

    LaguerrePartition part;
    part.assign.assign(static_cast<std::size_t>(m) * m, 0);
    part.mass.assign(s, 0.0);
    part.first_moment.assign(s, {0.0, 0.0});

    const int block = 16;
    const int nblocks = (m + block - 1) / block;
    const double cell = 1.0 / m;
    // Pessimistic/optimistic bounds use dist(center) -/+ half-diagonal, which
    // holds for all three wrap metrics by the triangle inequality.
    const double halfdiag = [&] {
        double h = 0.5 * (block - 1) * cell;
        switch (prob.metric) {
            case Norm::L1: return 2.0 * h;
            case Norm::Linf: return h;
            case Norm::L2: default: return h * std::sqrt(2.0);
        }
    }();

    unsigned nw = workers == 0 ? worker_count() : workers;
    std::vector<std::vector<double>> mass_acc(nw, std::vector<double>(s, 0.0));
    std::vector<std::vector<std::array<double, 2>>> fm_acc(
        nw, std::vector<std::array<double, 2>>(s, {0.0, 0.0}));
    std::vector<double> cost_acc(nw, 0.0), tcost_acc(nw, 0.0);

    std::size_t total_blocks = static_cast<std::size_t>(nblocks) * nblocks;
    parallel_chunks(total_blocks, [&](std::size_t b0, std::size_t b1, unsigned tid) {
        std::vector<std::int32_t> cand;
        cand.reserve(64);
        for (std::size_t bidx = b0; bidx < b1; ++bidx) {
            int bi = static_cast<int>(bidx) / nblocks;
            int bj = static_cast<int>(bidx) % nblocks;
            int i0 = bi * block, i1 = std::min(m, i0 + block);
            int j0 = bj * block, j1 = std::min(m, j0 + block);
            double cx = 0.5 * (i0 + i1 - 1) * cell;
            double cy = 0.5 * (j0 + j1 - 1) * cell;

            cand.clear();
            double best_pess = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < s; ++j) {
                double dc = detail::torus_dist2(cx, cy, prob.atoms[j][0],
                                                prob.atoms[j][1], prob.metric);
                best_pess = std::min(best_pess, dc + halfdiag - w(static_cast<Eigen::Index>(j)));
            }
            for (std::size_t j = 0; j < s; ++j) {
                double dc = detail::torus_dist2(cx, cy, prob.atoms[j][0],
                                                prob.atoms[j][1], prob.metric);
                double opt = std::max(0.0, dc - halfdiag) - w(static_cast<Eigen::Index>(j));
                if (opt <= best_pess + 1e-14) cand.push_back(static_cast<std::int32_t>(j));
            }

            for (int i = i0; i < i1; ++i) {
                double px = i * cell;
                for (int j = j0; j < j1; ++j) {
                    double py = j * cell;
                    double best = std::numeric_limits<double>::infinity();
                    std::int32_t arg = cand.empty() ? 0 : cand[0];
                    double bestdist = 0.0;
                    for (std::int32_t cj : cand) {
                        double dist = detail::torus_dist2(px, py, prob.atoms[cj][0],
                                                          prob.atoms[cj][1], prob.metric);
                        double score = dist - w(cj);
                        if (score < best) {
                            best = score;
                            arg = cj;
                            bestdist = dist;
                        }
                    }
                    std::size_t node = static_cast<std::size_t>(i) * m + j;
                    part.assign[node] = arg;
                    double p = prob.density[node];
                    if (p != 0.0) {
                        mass_acc[tid][static_cast<std::size_t>(arg)] += p;
                        fm_acc[tid][static_cast<std::size_t>(arg)][0] += p * px;
                        fm_acc[tid][static_cast<std::size_t>(arg)][1] += p * py;
                        cost_acc[tid] += (bestdist - w(arg)) * p;
                        tcost_acc[tid] += bestdist * p;
                    }
                }
            }
        }
    }, nw);

    double inv = 1.0 / (static_cast<double>(m) * m);
    for (unsigned t = 0; t < nw; ++t) {
        for (std::size_t j = 0; j < s; ++j) {
            part.mass[j] += mass_acc[t][j] * inv;
            part.first_moment[j][0] += fm_acc[t][j][0] * inv;
            part.first_moment[j][1] += fm_acc[t][j][1] * inv;
        }
        part.weighted_cost += cost_acc[t] * inv;
        part.transport_cost += tcost_acc[t] * inv;
    }
    return part;
}

// Dual objective and its gradient grad_j = lambda_j - mass(Omega_j(w)).
inline std::pair<double, Eigen::VectorXd> semidiscrete_objective(
    const SemidiscreteProblem& prob, const Eigen::VectorXd& w, unsigned workers = 0) {
    LaguerrePartition part = laguerre_partition(prob, w, workers);
    double f = part.weighted_cost;
    Eigen::VectorXd grad(static_cast<Eigen::Index>(prob.atoms.size()));
    for (std::size_t j = 0; j < prob.atoms.size(); ++j) {
        f += prob.lambda[j] * w(static_cast<Eigen::Index>(j));
        grad(static_cast<Eigen::Index>(j)) = prob.lambda[j] - part.mass[j];
    }
    return {f, grad};
}

struct BfgsOptions {
    int max_iterations = 100;
    double objective_tol = 1e-9;  // stop when |f_{k+1} - f_k| drops below
    double gradient_tol = 1e-5;   // stop when ||grad f||_inf drops below
    double armijo_c = 1e-4;
    int max_backtracks = 60;
};

struct SemidiscreteResult {
    double w1 = 0.0;
    Eigen::VectorXd weights;
    int iterations = 0;
    double grad_inf_norm = 0.0;
    std::string termination;  // gradient | objective-change | max-iterations | line-search
    bool converged = false;
};

// Maximize f by BFGS on -f with a dense inverse-Hessian estimate, starting
// from w = 0.  f is invariant under constant shifts of w, so the positivity
// constraint of the primal formulation is immaterial here.
inline SemidiscreteResult w1_semidiscrete(const SemidiscreteProblem& prob,
                                          const BfgsOptions& opts = {},
                                          unsigned workers = 0) {
    const Eigen::Index s = static_cast<Eigen::Index>(prob.atoms.size());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(s);
    auto [f, gradf] = semidiscrete_objective(prob, w, workers);
    Eigen::VectorXd g = -gradf;  // gradient of phi = -f
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(s, s);

    SemidiscreteResult res;
    res.weights = w;
    res.w1 = f;
    res.termination = "max-iterations";

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        res.grad_inf_norm = gradf.lpNorm<Eigen::Infinity>();
        if (res.grad_inf_norm < opts.gradient_tol) {
            res.termination = "gradient";
            res.converged = true;
            break;
        }

        Eigen::VectorXd p = -(H * g);
        double slope = g.dot(p);
        if (slope >= 0.0) {  // stale curvature, restart from steepest ascent
            H.setIdentity();
            p = -g;
            slope = g.dot(p);
        }

        double alpha = 1.0;
        double f_new = f;
        Eigen::VectorXd w_new;
        bool accepted = false;
        for (int ls = 0; ls < opts.max_backtracks; ++ls) {
            w_new = w + alpha * p;
            auto [ft, gt] = semidiscrete_objective(prob, w_new, workers);
            if (-ft <= -f + opts.armijo_c * alpha * slope) {
                f_new = ft;
                gradf = gt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            res.termination = "line-search";
            break;
        }

        Eigen::VectorXd g_new = -gradf;
        Eigen::VectorXd step = alpha * p;
        Eigen::VectorXd y = g_new - g;
        double ys = y.dot(step);
        if (ys > 1e-12 * y.norm() * step.norm()) {
            double rho = 1.0 / ys;
            Eigen::VectorXd Hy = H * y;
            double yHy = y.dot(Hy);
            H.noalias() -= rho * (step * Hy.transpose() + Hy * step.transpose());
            H.noalias() += (rho * rho * yHy + rho) * (step * step.transpose());
        }

        double delta = std::abs(f_new - f);
        w = w_new;
        f = f_new;
        g = g_new;
        res.weights = w;
        res.w1 = f;
        res.iterations = it + 1;
        if (delta < opts.objective_tol) {
            res.termination = "objective-change";
            res.converged = true;
            break;
        }
    }
    res.grad_inf_norm = gradf.lpNorm<Eigen::Infinity>();
    if (res.termination == "gradient" || res.termination == "objective-change")
        res.converged = true;
    return res;
}

}  // namespace torus

#endif  // TORUS_SEMIDISCRETE_HPP
