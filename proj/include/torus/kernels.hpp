// kernels.hpp
// Convolution kernels on T^d given by their Fourier multipliers: Fejer,
// Jackson (normalized sin^4 quotient), Dirichlet, and the signed polynomial
// of best Wasserstein-1 approximation to the Dirac in one dimension.

#ifndef TORUS_KERNELS_HPP
#define TORUS_KERNELS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/moment_table.hpp"
#include "torus/trig_poly.hpp"

namespace torus {

enum class KernelFamily { Fejer, Jackson, Dirichlet, BestDelta };

class KernelSpec {
  public:
    static KernelSpec fejer(int n, int dim = 1) { return {KernelFamily::Fejer, n, dim}; }
    static KernelSpec dirichlet(int n, int dim = 1) {
        return {KernelFamily::Dirichlet, n, dim};
    }
    // Jackson kernel of even degree n = 2m-2.
    static KernelSpec jackson(int n, int dim = 1) {
        if (n < 0 || n % 2 != 0)
            throw std::invalid_argument("KernelSpec::jackson: degree must be even");
        return {KernelFamily::Jackson, n, dim};
    }
    static KernelSpec best_delta(int n) {
        if (n < 1) throw std::invalid_argument("KernelSpec::best_delta: n >= 1");
        return {KernelFamily::BestDelta, n, 1};
    }

    KernelFamily family() const { return family_; }
    int degree() const { return degree_; }
    int dim() const { return dim_; }

    double multiplier1d(int k) const {
        int a = std::abs(k);
        if (a > degree_) return 0.0;
        switch (family_) {
            case KernelFamily::Fejer:
                return 1.0 - static_cast<double>(a) / (degree_ + 1);
            case KernelFamily::Dirichlet:
                return 1.0;
            case KernelFamily::Jackson:
                return jackson_mult_[a];
            case KernelFamily::BestDelta: {
                if (a == 0) return 1.0;
                double t = a * pi / (2.0 * (degree_ + 1));
                return t / std::tan(t);
            }
        }
        return 0.0;
    }

    double multiplier(std::span<const int> k) const {
        if (static_cast<int>(k.size()) != dim_)
            throw std::invalid_argument("KernelSpec::multiplier: dimension mismatch");
        double m = 1.0;
        for (int a = 0; a < dim_; ++a) m *= multiplier1d(k[a]);
        return m;
    }

  private:
    KernelSpec(KernelFamily f, int n, int d) : family_(f), degree_(n), dim_(d) {
        if (n < 0) throw std::invalid_argument("KernelSpec: degree >= 0 required");
        if (d < 1) throw std::invalid_argument("KernelSpec: dim >= 1 required");
        if (f == KernelFamily::BestDelta && d != 1)
            throw std::invalid_argument("KernelSpec: best-delta kernel is univariate");
        if (f == KernelFamily::Jackson) {
            // Multipliers are the autocorrelation of the integer sequence
            // c_j = m - |j| (whose square is the sin^4 quotient), normalized
            // by a_0 = m(2m^2+1)/3 so that the kernel integrates to one.
            std::int64_t m = (n + 2) / 2;
            std::vector<std::int64_t> c(2 * m - 1);
            for (std::int64_t j = -(m - 1); j <= m - 1; ++j)
                c[static_cast<std::size_t>(j + m - 1)] = m - std::llabs(j);
            std::vector<std::int64_t> auto_corr(2 * m - 1, 0);
            for (std::size_t t = 0; t < auto_corr.size(); ++t)
                for (std::size_t j = t; j < c.size(); ++j)
                    auto_corr[t] += c[j] * c[j - t];
            jackson_mult_.resize(auto_corr.size());
            double norm = static_cast<double>(auto_corr[0]);
            for (std::size_t t = 0; t < auto_corr.size(); ++t)
                jackson_mult_[t] = static_cast<double>(auto_corr[t]) / norm;
        }
    }

    KernelFamily family_;
    int degree_;
    int dim_;
    std::vector<double> jackson_mult_;
};

// Coefficientwise convolution (K * mu)^(k) = multiplier(k) * mu^(k).
inline TrigPolynomial convolve(const MomentTable& table, const KernelSpec& kernel) {
    if (table.dim != kernel.dim())
        throw std::invalid_argument("convolve: dimension mismatch");
    if (table.order < kernel.degree())
        throw std::invalid_argument("convolve: table order below kernel degree");
    TrigPolynomial p(table.dim, kernel.degree());
    IndexBox b = p.box();
    std::vector<int> k(table.dim);
    for (std::size_t i = 0; i < b.size(); ++i) {
        b.unflatten(i, k);
        p.coeffs[i] = kernel.multiplier(k) * table.at(k);
    }
    return p;
}

// Exact absolute moment d * int_T F_n(x) |x|_1 dx of the tensor Fejer kernel.
inline double fejer_abs_moment(int n, int dim = 1) {
    if (n < 0) throw std::invalid_argument("fejer_abs_moment: n >= 0 required");
    double s = 0.0;
    for (int j = 0; 2 * j <= n; ++j)
        s += static_cast<double>(n - 2 * j) / ((2.0 * j + 1.0) * (2.0 * j + 1.0));
    double univariate = 2.0 * (0.125 - s / ((n + 1.0) * pi * pi));
    return dim * univariate;
}

// Unique best W1 approximation of delta_0 by a degree-n polynomial (d = 1):
// p^(0) = 1, p^(+-j) = (j pi / (2n+2)) cot(j pi / (2n+2)).
inline TrigPolynomial best_delta_poly(int n) {
    if (n < 1) throw std::invalid_argument("best_delta_poly: n >= 1 required");
    TrigPolynomial p(1, n);
    KernelSpec k = KernelSpec::best_delta(n);
    for (int j = -n; j <= n; ++j)
        p.coeffs[static_cast<std::size_t>(j + n)] = k.multiplier1d(j);
    return p;
}

// Closed spatial forms, used for cross-checks and documentation plots.
inline double fejer_value(int n, double x) {
    double s = std::sin(pi * x);
    if (std::abs(s) < 1e-12) return n + 1.0;
    double q = std::sin((n + 1.0) * pi * x) / s;
    return q * q / (n + 1.0);
}

inline double jackson_value(int degree, double x) {
    int m = (degree + 2) / 2;
    double s = std::sin(pi * x);
    double front = 3.0 / (m * (2.0 * m * m + 1.0));
    if (std::abs(s) < 1e-12) {
        double q = static_cast<double>(m);
        return front * q * q * q * q;
    }
    double q = std::sin(m * pi * x) / s;
    return front * q * q * q * q;
}

}  // namespace torus

#endif  // TORUS_KERNELS_HPP
