// svd.hpp
// Singular value decompositions of moment matrices: dense through a
// Hermitian eigendecomposition (or Jacobi SVD for non-Hermitian input) and
// iterative Golub-Kahan-Lanczos bidiagonalization on the fast matvec with
// full reorthogonalization.  Columns of U are coefficient vectors of the
// polynomials u_j(x) = e_n(x)^* u_j.

#ifndef TORUS_SVD_HPP
#define TORUS_SVD_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "torus/moment_matrix.hpp"

namespace torus {

struct SvdFactors {
    Eigen::VectorXd sigma;  // nonincreasing
    Eigen::MatrixXcd U;     // left singular vectors, one column per sigma
    Eigen::MatrixXcd V;     // right singular vectors
    std::size_t matrix_size = 0;  // N
    int rank = 0;
    double rank_tol = 1e-8;
    bool complete = true;  // false when only leading triplets were computed
};

inline int numerical_rank(const Eigen::VectorXd& sigma, double tau_rel = 1e-8) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    double cut = tau_rel * sigma(0);
    int r = 0;
    while (r < sigma.size() && sigma(r) > cut) ++r;
    return r;
}

// Alternative rank rule: cut at the largest relative gap sigma_j/sigma_{j+1}.
inline int rank_by_largest_gap(const Eigen::VectorXd& sigma, double floor = 1e-14) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    int best = static_cast<int>(sigma.size());
    double best_ratio = 1.0;
    for (int j = 0; j + 1 < sigma.size(); ++j) {
        double lo = std::max(sigma(j + 1), floor * sigma(0));
        double ratio = sigma(j) / lo;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = j + 1;
        }
    }
    return best;
}

struct SvdOptions {
    enum class Mode { Auto, Dense, Iterative };
    Mode mode = Mode::Auto;
    int requested = 0;         // iterative: triplets wanted; 0 = all above rank_tol
    double rank_tol = 1e-8;    // relative threshold defining the numerical rank
    std::size_t dense_threshold = 4096;
    int max_iterations = 0;    // 0 = automatic budget
    std::uint64_t seed = 20240u;
};

inline SvdFactors svd_dense(const MomentMatrix& T, double rank_tol = 1e-8) {
    const Eigen::Index n = static_cast<Eigen::Index>(T.size());
    Eigen::MatrixXcd dense = T.dense();
    SvdFactors f;
    f.matrix_size = T.size();
    f.rank_tol = rank_tol;
    if (T.hermitian()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("svd_dense: eigendecomposition failed");
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        const auto& ev = eig.eigenvalues();
        std::sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(ev(a)) > std::abs(ev(b));
        });
        f.sigma.resize(n);
        f.U.resize(n, n);
        f.V.resize(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            double lambda = ev(perm[static_cast<std::size_t>(j)]);
            f.sigma(j) = std::abs(lambda);
            f.U.col(j) = eig.eigenvectors().col(perm[static_cast<std::size_t>(j)]);
            f.V.col(j) = (lambda < 0.0 ? -1.0 : 1.0) * f.U.col(j);
        }
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense,
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
        f.sigma = svd.singularValues();
        f.U = svd.matrixU();
        f.V = svd.matrixV();
    }
    f.rank = numerical_rank(f.sigma, rank_tol);
    return f;
}

namespace detail {

inline void reorthogonalize(Eigen::VectorXcd& w, const Eigen::MatrixXcd& basis,
                            Eigen::Index cols) {
    if (cols == 0) return;
    auto b = basis.leftCols(cols);
    // Two rounds of classical Gram-Schmidt.
    w.noalias() -= b * (b.adjoint() * w);
    w.noalias() -= b * (b.adjoint() * w);
}

}  // namespace detail

// Golub-Kahan-Lanczos with full reorthogonalization.  The Ritz residual of
// triplet i on the square bidiagonal factor B_m is beta_m |P(m-1,i)|; a
// vanishing alpha/beta means the Krylov space has exhausted the range, at
// which point the factorization is exact and every remaining singular value
// is negligible.
inline SvdFactors svd_iterative(const MomentMatrix& T, const SvdOptions& opts) {
    const Eigen::Index n = static_cast<Eigen::Index>(T.size());
    const int want = opts.requested;
    int budget = opts.max_iterations > 0
                     ? static_cast<int>(std::min<Eigen::Index>(opts.max_iterations, n))
                     : static_cast<int>(std::min<Eigen::Index>(n, 1200));

    Eigen::MatrixXcd Ub(n, budget), Vb(n, budget + 1);
    std::vector<double> alpha, beta;
    alpha.reserve(budget);
    beta.reserve(budget);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();
    Vb.col(0) = v;

    Eigen::VectorXcd p = T.matvec(v);
    double a = p.norm();
    if (a < 1e-300) throw std::runtime_error("svd_iterative: matrix is numerically zero");
    Ub.col(0) = p / a;
    alpha.push_back(a);

    const double conv_tol = 1e-9;
    double sigma1 = a;
    int m = 1;
    bool exact = false;       // Krylov space exhausted, factorization exact
    bool rectangular = false; // exhaustion happened after committing v_{m+1}
    double pending_beta = 0.0;

    Eigen::MatrixXd P, Q;
    Eigen::VectorXd ritz;
    auto factor = [&]() {
        int cols = rectangular ? m + 1 : m;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, cols);
        for (int i = 0; i < m; ++i) {
            B(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i < static_cast<int>(beta.size())) B(i, i + 1) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeThinV);
        P = svd.matrixU();           // m x m
        Q = svd.matrixV();           // cols x m
        ritz = svd.singularValues(); // length m
        sigma1 = std::max(sigma1, ritz(0));
    };
    auto leading_converged = [&](double bm) {
        int c = 0;
        for (int i = 0; i < m; ++i) {
            if (bm * std::abs(P(m - 1, i)) <= conv_tol * sigma1)
                ++c;
            else
                break;
        }
        return c;
    };

    bool done = false;
    while (!done && m < budget) {
        Eigen::VectorXcd r = T.matvec_adjoint(Ub.col(m - 1)) -
                             alpha[static_cast<std::size_t>(m - 1)] * Vb.col(m - 1);
        detail::reorthogonalize(r, Vb, m);
        double b = r.norm();
        pending_beta = b;
        if (b < 1e-13 * sigma1) {
            exact = true;
            break;
        }

        if (m % 16 == 0) {
            factor();
            int conv = leading_converged(b);
            if (want > 0 && conv >= std::min<int>(want, static_cast<int>(n))) {
                done = true;
                break;
            }
            if (want == 0) {
                for (int i = 0; i < conv; ++i)
                    if (ritz(i) < 0.5 * opts.rank_tol * sigma1) {
                        done = true;
                        break;
                    }
                if (done) break;
            }
        }

        beta.push_back(b);
        Vb.col(m) = r / b;
        Eigen::VectorXcd s = T.matvec(Vb.col(m)) - b * Ub.col(m - 1);
        detail::reorthogonalize(s, Ub, m);
        a = s.norm();
        if (a < 1e-13 * sigma1) {
            exact = true;
            rectangular = true;
            break;
        }
        Ub.col(m) = s / a;
        alpha.push_back(a);
        ++m;
    }

    if (!done && !exact && m == budget) {
        // Budget exhausted mid-sweep: refresh the residual term beta_m.
        Eigen::VectorXcd r = T.matvec_adjoint(Ub.col(m - 1)) -
                             alpha[static_cast<std::size_t>(m - 1)] * Vb.col(m - 1);
        detail::reorthogonalize(r, Vb, m);
        pending_beta = r.norm();
        if (pending_beta < 1e-13 * sigma1) exact = true;
    }

    factor();
    double bm = exact ? 0.0 : pending_beta;
    int usable = leading_converged(bm);
    if (want > 0 && usable < std::min<int>(want, static_cast<int>(n))) {
        double worst = bm * std::abs(P(m - 1, std::min(usable, m - 1)));
        throw std::runtime_error(
            "svd_iterative: no convergence within iteration budget; achieved relative "
            "residual " + std::to_string(worst / sigma1));
    }
    if (want == 0 && !exact) {
        bool certified = false;
        for (int i = 0; i < usable; ++i)
            if (ritz(i) < 0.5 * opts.rank_tol * sigma1) certified = true;
        if (!certified)
            throw std::runtime_error(
                "svd_iterative: rank not certified within iteration budget");
    }

    int keep = (want > 0) ? std::min(want, usable) : usable;
    SvdFactors f;
    f.matrix_size = T.size();
    f.rank_tol = opts.rank_tol;
    f.complete = exact;
    f.sigma.resize(keep);
    f.U.resize(n, keep);
    f.V.resize(n, keep);
    int vcols = rectangular ? m + 1 : m;
    for (int i = 0; i < keep; ++i) {
        f.sigma(i) = ritz(i);
        f.U.col(i) = Ub.leftCols(m) * P.col(i);
        f.V.col(i) = Vb.leftCols(vcols) * Q.col(i);
    }
    f.rank = numerical_rank(f.sigma, opts.rank_tol);
    return f;
}

inline SvdFactors svd(const MomentMatrix& T, const SvdOptions& opts = {}) {
    bool use_dense = opts.mode == SvdOptions::Mode::Dense ||
                     (opts.mode == SvdOptions::Mode::Auto &&
                      T.size() <= opts.dense_threshold);
    if (use_dense) {
        if (T.size() > opts.dense_threshold)
            throw std::invalid_argument("svd: dense mode above size threshold");
        return svd_dense(T, opts.rank_tol);
    }
    if (opts.requested > static_cast<int>(T.size()))
        throw std::invalid_argument("svd: requested more triplets than the size");
    return svd_iterative(T, opts);
}

}  // namespace torus

#endif  // TORUS_SVD_HPP
