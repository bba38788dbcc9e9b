// moment_matrix.hpp
// Multilevel Toeplitz moment matrix T_n = (mu^(k-l))_{k,l in {0..n}^d} with
// O(N log N) matvec through a circulant embedding of side 2(n+1) per axis.

#ifndef TORUS_MOMENT_MATRIX_HPP
#define TORUS_MOMENT_MATRIX_HPP

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/fft.hpp"
#include "torus/moment_table.hpp"

namespace torus {

class MomentMatrix {
  public:
    MomentMatrix(const MomentTable& table, int n)
        : dim_(table.dim), order_(n), rows_{table.dim, n} {
        if (n < 0) throw std::invalid_argument("MomentMatrix: order >= 0 required");
        if (table.order < n)
            throw std::invalid_argument("MomentMatrix: table order below matrix order");
        generator_ = (table.order == n) ? table : table.truncated(n);
        hermitian_ = generator_.conj_symmetric(1e-12);
        build_spectra();
    }

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return rows_.size(); }  // N = (n+1)^d
    bool hermitian() const { return hermitian_; }
    const MomentTable& generator() const { return generator_; }

    // Entry (row k, column l) = mu^(k - l).
    cplx entry(std::span<const int> k, std::span<const int> l) const {
        std::vector<int> diff(dim_);
        for (int a = 0; a < dim_; ++a) diff[a] = k[a] - l[a];
        return generator_.at(diff);
    }

    Eigen::MatrixXcd dense() const {
        const std::size_t n = size();
        Eigen::MatrixXcd T(n, n);
        std::vector<int> k(dim_), l(dim_);
        for (std::size_t i = 0; i < n; ++i) {
            rows_.unflatten(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                rows_.unflatten(j, l);
                T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    entry(k, l);
            }
        }
        return T;
    }

    Eigen::VectorXcd matvec(const Eigen::VectorXcd& q) const {
        return apply(q, *spectrum_);
    }

    Eigen::VectorXcd matvec_adjoint(const Eigen::VectorXcd& q) const {
        return hermitian_ ? apply(q, *spectrum_) : apply(q, *spectrum_adj_);
    }

    // e_n(x)^* T_n e_n(x) with e_n(x) = (exp(-2 pi i <k,x>))_k; exercises the
    // fast matvec.
    cplx quadratic_form(std::span<const double> x) const {
        const std::size_t n = size();
        Eigen::VectorXcd e(n);
        std::vector<int> k(dim_);
        for (std::size_t i = 0; i < n; ++i) {
            rows_.unflatten(i, k);
            double phase = 0.0;
            for (int a = 0; a < dim_; ++a) phase += k[a] * x[a];
            e(static_cast<Eigen::Index>(i)) = std::polar(1.0, -tau * phase);
        }
        return e.dot(matvec(e));  // Eigen's dot conjugates the left factor
    }

    double frobenius_norm() const {
        // ||T||_F^2 = sum over offsets of (#pairs with that offset) |t_o|^2.
        IndexBox gb = generator_.box();
        std::vector<int> o(dim_);
        double acc = 0.0;
        for (std::size_t i = 0; i < gb.size(); ++i) {
            gb.unflatten(i, o);
            double count = 1.0;
            for (int a = 0; a < dim_; ++a) count *= order_ + 1 - std::abs(o[a]);
            acc += count * std::norm(generator_.values[i]);
        }
        return std::sqrt(acc);
    }

  private:
    void build_spectra() {
        const int m = 2 * (order_ + 1);
        shape_.assign(dim_, m);
        std::size_t total = ipow(static_cast<std::size_t>(m), dim_);
        FftBuffer c(total), tmp(total);
        std::vector<int> j(dim_), o(dim_);
        auto fill = [&](bool adjoint) {
            for (std::size_t i = 0; i < total; ++i) {
                std::size_t rem = i;
                bool unused = false;
                for (int a = dim_ - 1; a >= 0; --a) {
                    j[a] = static_cast<int>(rem % m);
                    rem /= m;
                    int off = (j[a] <= order_) ? j[a] : j[a] - m;
                    if (off < -order_) unused = true;  // the j = n+1 slot
                    o[a] = off;
                }
                if (unused) {
                    c[i] = 0.0;
                    continue;
                }
                if (adjoint) {
                    for (int a = 0; a < dim_; ++a) o[a] = -o[a];
                    c[i] = std::conj(generator_.at(o));
                } else {
                    c[i] = generator_.at(o);
                }
            }
        };
        fill(false);
        spectrum_ = std::make_shared<FftBuffer>(total);
        dft(shape_, c, *spectrum_, FFTW_FORWARD);
        if (!hermitian_) {
            fill(true);
            spectrum_adj_ = std::make_shared<FftBuffer>(total);
            dft(shape_, c, *spectrum_adj_, FFTW_FORWARD);
        }
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& q, const FftBuffer& spectrum) const {
        const std::size_t n = size();
        if (static_cast<std::size_t>(q.size()) != n)
            throw std::invalid_argument("MomentMatrix::matvec: length mismatch");
        const int m = shape_[0];
        std::size_t total = spectrum.size();
        FftBuffer in(total), out(total);
        for (std::size_t i = 0; i < total; ++i) in[i] = 0.0;
        std::vector<int> k(dim_);
        for (std::size_t i = 0; i < n; ++i) {
            rows_.unflatten(i, k);
            std::size_t slot = 0;
            for (int a = 0; a < dim_; ++a)
                slot = slot * static_cast<std::size_t>(m) + static_cast<std::size_t>(k[a]);
            in[slot] = q(static_cast<Eigen::Index>(i));
        }
        dft(shape_, in, out, FFTW_FORWARD);
        for (std::size_t i = 0; i < total; ++i) out[i] *= spectrum[i];
        dft(shape_, out, in, FFTW_BACKWARD);
        double scale = 1.0 / static_cast<double>(total);
        Eigen::VectorXcd result(n);
        for (std::size_t i = 0; i < n; ++i) {
            rows_.unflatten(i, k);
            std::size_t slot = 0;
            for (int a = 0; a < dim_; ++a)
                slot = slot * static_cast<std::size_t>(m) + static_cast<std::size_t>(k[a]);
            result(static_cast<Eigen::Index>(i)) = in[slot] * scale;
        }
        return result;
    }

    int dim_;
    int order_;
    OneSidedBox rows_;
    MomentTable generator_;
    bool hermitian_ = false;
    std::vector<int> shape_;
    std::shared_ptr<FftBuffer> spectrum_;
    std::shared_ptr<FftBuffer> spectrum_adj_;
};

}  // namespace torus

#endif  // TORUS_MOMENT_MATRIX_HPP
