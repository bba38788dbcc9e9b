#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "torus/measure.hpp"
#include "torus/moment_matrix.hpp"
#include "torus/moments.hpp"
#include "torus/svd.hpp"

using namespace torus;

namespace {

Measure random_positive_measure(int atoms, std::uint64_t seed, int dim = 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Discrete a;
    for (int j = 0; j < atoms; ++j) {
        std::vector<double> x(dim);
        for (int d = 0; d < dim; ++d) x[d] = u(rng);
        a.points.push_back(std::move(x));
        a.weights.push_back(0.2 + u(rng));
    }
    return normalized_measure(Measure(dim, a, false));
}

}  // namespace

TEST_CASE("dirac moment matrix is the all-ones matrix of rank one") {
    MomentMatrix T(moments(dirac({0.0}), 6), 6);
    Eigen::MatrixXcd D = T.dense();
    REQUIRE((D.array() - 1.0).abs().maxCoeff() < 1e-14);
    SvdFactors f = svd_dense(T);
    REQUIRE(f.sigma(0) == Catch::Approx(7.0).margin(1e-10));
    REQUIRE(f.sigma(1) < 1e-10);
    REQUIRE(f.rank == 1);
}

TEST_CASE("lebesgue moment matrix is the identity") {
    MomentMatrix T(moments(Measure(2, Lebesgue{}), 4), 4);
    Eigen::MatrixXcd D = T.dense();
    REQUIRE((D - Eigen::MatrixXcd::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-14);
    // matvec is the identity as well
    Eigen::VectorXcd q = Eigen::VectorXcd::Random(25);
    REQUIRE((T.matvec(q) - q).cwiseAbs().maxCoeff() < 1e-12);
    SvdFactors f = svd_dense(T);
    REQUIRE(numerical_rank(f.sigma) == 25);
}

TEST_CASE("positive measures give PSD moment matrices") {
    Measure m = random_positive_measure(15, 3);
    MomentMatrix T(moments(m, 6), 6);
    REQUIRE(T.hermitian());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(T.dense());
    REQUIRE(eig.eigenvalues().minCoeff() > -1e-8 * static_cast<double>(T.size()));
}

TEST_CASE("matvec: first column and dense oracle") {
    Measure m = random_positive_measure(9, 17);
    MomentMatrix T(moments(m, 8), 8);
    Eigen::MatrixXcd D = T.dense();
    const auto N = static_cast<Eigen::Index>(T.size());

    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(N);
    e0(0) = 1.0;
    REQUIRE((T.matvec(e0) - D.col(0)).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXcd q(N);
        for (Eigen::Index i = 0; i < N; ++i) q(i) = cplx(g(rng), g(rng));
        Eigen::VectorXcd fast = T.matvec(q);
        Eigen::VectorXcd slow = D * q;
        REQUIRE((fast - slow).cwiseAbs().maxCoeff() <
                1e-12 * slow.cwiseAbs().maxCoeff() + 1e-13);
    }
}

TEST_CASE("matvec adjoint consistency <Tq, p> = <q, T*p>") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Discrete a;  // complex weights: non-Hermitian matrix
    for (int j = 0; j < 5; ++j) {
        a.points.push_back({u(rng), u(rng)});
        a.weights.push_back(cplx(u(rng) - 0.5, u(rng) - 0.5));
    }
    MomentMatrix T(moments(Measure(2, a, false), 5), 5);
    REQUIRE(!T.hermitian());
    const auto N = static_cast<Eigen::Index>(T.size());
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd q(N), p(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        q(i) = cplx(g(rng), g(rng));
        p(i) = cplx(g(rng), g(rng));
    }
    cplx lhs = p.dot(T.matvec(q));          // <Tq, p>
    cplx rhs = T.matvec_adjoint(p).dot(q);  // <q, T*p>
    REQUIRE(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
}

TEST_CASE("frobenius norm equals the singular value square sum") {
    Measure m = random_positive_measure(7, 23);
    MomentMatrix T(moments(m, 7), 7);
    SvdFactors f = svd_dense(T);
    double fro = T.frobenius_norm();
    REQUIRE(f.sigma.squaredNorm() == Catch::Approx(fro * fro).epsilon(1e-10));
}

TEST_CASE("dense svd reconstructs the matrix") {
    Measure m = random_positive_measure(10, 31);
    MomentMatrix T(moments(m, 6), 6);
    SvdFactors f = svd_dense(T);
    Eigen::MatrixXcd rec =
        f.U * f.sigma.asDiagonal() * f.V.adjoint();
    double err = (rec - T.dense()).cwiseAbs().maxCoeff();
    REQUIRE(err < 1e-8 * f.sigma(0));
}

TEST_CASE("numerical rank rules") {
    Eigen::VectorXd s(5);
    s << 10.0, 0.0, 0.0, 0.0, 0.0;
    REQUIRE(numerical_rank(s, 1e-8) == 1);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
    REQUIRE(numerical_rank(ones, 1e-8) == 9);
    Eigen::VectorXd gap(4);
    gap << 5.0, 4.0, 1e-5, 1e-6;
    REQUIRE(rank_by_largest_gap(gap) == 2);
}

TEST_CASE("rank detects atom count for separated measures") {
    // 15 well-separated atoms, (n+1) * separation > d
    Measure m = lattice_atoms(15, 7);
    MomentTable t = moments(m, 20);
    MomentMatrix T(t, 20);
    SvdFactors f = svd_dense(T);
    REQUIRE(f.rank == 15);
}

TEST_CASE("iterative svd agrees with the dense factorization") {
    Measure m = random_positive_measure(12, 41);
    MomentMatrix T(moments(m, 12), 12);  // N = 169
    SvdFactors dense = svd_dense(T);
    SvdOptions opts;
    opts.mode = SvdOptions::Mode::Iterative;
    opts.requested = 10;
    SvdFactors iter = svd_iterative(T, opts);
    REQUIRE(iter.sigma.size() >= 10);
    for (int j = 0; j < 10; ++j)
        REQUIRE(iter.sigma(j) == Catch::Approx(dense.sigma(j)).margin(1e-8 * dense.sigma(0)));
    // left vectors span the same rays: |<u_iter, u_dense>| = 1 for isolated sigma
    for (int j = 0; j < 3; ++j) {
        double overlap = std::abs(iter.U.col(j).dot(dense.U.col(j)));
        REQUIRE(overlap == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("iterative svd certifies the rank cliff of a discrete measure") {
    Measure m = lattice_atoms(15, 7);
    MomentMatrix T(moments(m, 20), 20);
    SvdOptions opts;
    opts.mode = SvdOptions::Mode::Iterative;
    opts.requested = 0;  // all values above the threshold
    SvdFactors f = svd_iterative(T, opts);
    REQUIRE(f.rank == 15);
    SvdFactors dense = svd_dense(T);
    for (int j = 0; j < 15; ++j)
        REQUIRE(f.sigma(j) == Catch::Approx(dense.sigma(j)).margin(1e-8 * dense.sigma(0)));
}

TEST_CASE("quadratic form is nonnegative for nonnegative measures") {
    Measure m = random_positive_measure(6, 53);
    MomentMatrix T(moments(m, 5), 5);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x = {u(rng), u(rng)};
        cplx qf = T.quadratic_form(x);
        REQUIRE(qf.imag() == Catch::Approx(0.0).margin(1e-10));
        REQUIRE(qf.real() > -1e-10);
    }
}

TEST_CASE("build errors") {
    MomentTable t = moments(dirac({0.0}), 3);
    REQUIRE_THROWS_AS(MomentMatrix(t, 4), std::invalid_argument);
    MomentMatrix T(t, 3);
    Eigen::VectorXcd q(3);
    REQUIRE_THROWS_AS(T.matvec(q), std::invalid_argument);
}
