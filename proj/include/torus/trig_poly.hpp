// trig_poly.hpp
// Trigonometric polynomials p(x) = sum_{k in {-n..n}^d} p^(k) e^{2 pi i <k,x>}
// with zero-padded FFT evaluation on regular grids.

#ifndef TORUS_TRIG_POLY_HPP
#define TORUS_TRIG_POLY_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/fft.hpp"

namespace torus {

struct TrigPolynomial {
    int dim = 1;
    int degree = 0;
    std::vector<cplx> coeffs;  // IndexBox{dim, degree} layout

    TrigPolynomial() = default;
    TrigPolynomial(int d, int n)
        : dim(d), degree(n), coeffs(IndexBox{d, n}.size(), cplx(0.0)) {}

    IndexBox box() const { return IndexBox{dim, degree}; }
    cplx at(std::span<const int> k) const { return coeffs[box().flatten(k)]; }
    cplx& at(std::span<const int> k) { return coeffs[box().flatten(k)]; }

    cplx mean() const {
        std::vector<int> zero(dim, 0);
        return at(zero);
    }

    bool is_real(double tol = 1e-11) const {
        IndexBox b = box();
        std::vector<int> k(dim), mk(dim);
        for (std::size_t i = 0; i < b.size(); ++i) {
            b.unflatten(i, k);
            for (int a = 0; a < dim; ++a) mk[a] = -k[a];
            if (std::abs(coeffs[i] - std::conj(at(mk))) > tol) return false;
        }
        return true;
    }

    cplx eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim)
            throw std::invalid_argument("TrigPolynomial::eval: dimension mismatch");
        IndexBox b = box();
        std::vector<int> k(dim);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            b.unflatten(i, k);
            double phase = 0.0;
            for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
            acc += coeffs[i] * std::polar(1.0, tau * phase);
        }
        return acc;
    }
};

// Values p(j/m) for j in {0..m-1}^d via one backward FFT.  m < 2*degree+1
// aliases coefficients into shared bins; accepted with a warning.
inline std::vector<cplx> eval_grid(const TrigPolynomial& p, int m, bool warn = true) {
    if (m < 1) throw std::invalid_argument("eval_grid: m >= 1 required");
    if (warn && m < 2 * p.degree + 1)
        std::fprintf(stderr, "torus: eval_grid m=%d < 2n+1=%d, aliasing\n", m,
                     2 * p.degree + 1);
    std::vector<int> shape(p.dim, m);
    std::size_t total = ipow(static_cast<std::size_t>(m), p.dim);
    FftBuffer in(total), out(total);
    for (std::size_t i = 0; i < total; ++i) in[i] = 0.0;

    IndexBox b = p.box();
    std::vector<int> k(p.dim);
    for (std::size_t i = 0; i < b.size(); ++i) {
        b.unflatten(i, k);
        std::size_t slot = 0;
        for (int a = 0; a < p.dim; ++a) {
            int ka = ((k[a] % m) + m) % m;
            slot = slot * static_cast<std::size_t>(m) + static_cast<std::size_t>(ka);
        }
        in[slot] += p.coeffs[i];
    }
    dft(shape, in, out, FFTW_BACKWARD);
    return std::vector<cplx>(out.data(), out.data() + total);
}

inline std::vector<double> eval_grid_real(const TrigPolynomial& p, int m,
                                          bool warn = true) {
    std::vector<cplx> g = eval_grid(p, m, warn);
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
    return out;
}

}  // namespace torus

#endif  // TORUS_TRIG_POLY_HPP
