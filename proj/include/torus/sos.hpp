// sos.hpp
// Signal/noise sum-of-squares pair from the moment-matrix SVD:
// p1(x) = (1/N) sum_{j<=r} |u_j(x)|^2 interpolates one on the support's
// Zariski closure, p0 = 1 - p1.  Also the pointwise bound calculators for
// the discrete and variety cases and the singular-value/weight gap.

#ifndef TORUS_SOS_HPP
#define TORUS_SOS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/fft.hpp"
#include "torus/parallel.hpp"
#include "torus/svd.hpp"
#include "torus/trig_poly.hpp"

namespace torus {

struct SosPair {
    int dim = 0;
    int order = 0;
    int grid = 0;
    int rank = 0;
    std::vector<double> p1;  // grid^d values of p_{1,n}
    std::vector<double> p0;  // 1 - p1 by the partition of unity
};

namespace detail {

// Sum of |u_j(x)|^2 over the given columns on a regular grid, one zero-padded
// FFT per column.
inline std::vector<double> sos_grid_accumulate(const Eigen::MatrixXcd& U,
                                               const std::vector<int>& cols, int dim,
                                               int order, int m, unsigned workers) {
    OneSidedBox rows{dim, order};
    std::vector<int> shape(dim, m);
    std::size_t total = ipow(static_cast<std::size_t>(m), dim);
    unsigned nw = workers == 0 ? worker_count() : workers;
    std::vector<std::vector<double>> partial(nw, std::vector<double>(total, 0.0));

    parallel_chunks(cols.size(), [&](std::size_t b, std::size_t e, unsigned w) {
        FftBuffer in(total), out(total);
        std::vector<int> k(dim);
        for (std::size_t c = b; c < e; ++c) {
            for (std::size_t i = 0; i < total; ++i) in[i] = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                rows.unflatten(i, k);
                std::size_t slot = 0;
                for (int a = 0; a < dim; ++a)
                    slot = slot * static_cast<std::size_t>(m) +
                           static_cast<std::size_t>(k[a] % m);
                in[slot] += U(static_cast<Eigen::Index>(i), cols[c]);
            }
            dft(shape, in, out, FFTW_BACKWARD);
            auto& acc = partial[w];
            for (std::size_t i = 0; i < total; ++i) acc[i] += std::norm(out[i]);
        }
    }, nw);

    std::vector<double> acc(total, 0.0);
    for (unsigned w = 0; w < nw; ++w)
        for (std::size_t i = 0; i < total; ++i) acc[i] += partial[w][i];
    return acc;
}

}  // namespace detail

// Evaluate p1/p0 on an m^d grid; whichever side needs fewer FFTs is summed,
// the other follows from p1 + p0 = 1.
inline SosPair sos_pair(const SvdFactors& f, int dim, int order, int r, int m,
                        unsigned workers = 0) {
    std::size_t N = OneSidedBox{dim, order}.size();
    if (N != f.matrix_size) throw std::invalid_argument("sos_pair: factor size mismatch");
    if (r < 0 || static_cast<std::size_t>(r) > N)
        throw std::invalid_argument("sos_pair: rank out of range");
    if (m < order + 1)
        throw std::invalid_argument("sos_pair: grid must have at least n+1 points per axis");

    const int avail = static_cast<int>(f.U.cols());
    bool use_p1_side = true;
    if (avail == static_cast<int>(N))
        use_p1_side = (static_cast<std::size_t>(2 * r) <= N);
    if (use_p1_side && r > avail)
        throw std::invalid_argument("sos_pair: rank exceeds available singular vectors");

    std::vector<int> cols;
    if (use_p1_side) {
        for (int j = 0; j < r; ++j) cols.push_back(j);
    } else {
        for (int j = r; j < static_cast<int>(N); ++j) cols.push_back(j);
    }
    std::vector<double> acc =
        detail::sos_grid_accumulate(f.U, cols, dim, order, m, workers);

    SosPair pair;
    pair.dim = dim;
    pair.order = order;
    pair.grid = m;
    pair.rank = r;
    std::size_t total = acc.size();
    pair.p1.resize(total);
    pair.p0.resize(total);
    double invN = 1.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < total; ++i) {
        double s = acc[i] * invN;
        if (use_p1_side) {
            pair.p1[i] = s;
            pair.p0[i] = 1.0 - s;
        } else {
            pair.p0[i] = s;
            pair.p1[i] = 1.0 - s;
        }
    }
    return pair;
}

// Direct evaluation of p1 at a single point (no grid).
inline double sos_p1_at(const SvdFactors& f, int dim, int order, int r,
                        std::span<const double> x) {
    std::size_t N = OneSidedBox{dim, order}.size();
    if (N != f.matrix_size) throw std::invalid_argument("sos_p1_at: factor size mismatch");
    if (r > f.U.cols()) throw std::invalid_argument("sos_p1_at: rank exceeds columns");
    OneSidedBox rows{dim, order};
    Eigen::VectorXcd e(static_cast<Eigen::Index>(N));
    std::vector<int> k(dim);
    for (std::size_t i = 0; i < N; ++i) {
        rows.unflatten(i, k);
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
        e(static_cast<Eigen::Index>(i)) = std::polar(1.0, tau * phase);
    }
    double acc = 0.0;
    for (int j = 0; j < r; ++j) acc += std::norm(e.cwiseProduct(f.U.col(j)).sum());
    return acc / static_cast<double>(N);
}

struct BoundValue {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool applicable = false;
};

inline double min_separation_inf(const std::vector<std::vector<double>>& atoms) {
    double minsep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            minsep = std::min(minsep, wrap_dist_inf(atoms[i], atoms[j]));
    return minsep;
}

// Off-support decay bound at x for a discrete measure:
// p1(x) <= (n+1)^{-2} * (|l_max|/|l_min|) * (1/3) sum_j |x-x_j|_inf^{-2},
// valid under the separation condition n+1 > 4d / minsep.
inline BoundValue p1_offsupport_bound(std::span<const double> x,
                                      const std::vector<std::vector<double>>& atoms,
                                      const std::vector<cplx>& weights, int n) {
    BoundValue out;
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("p1_offsupport_bound: bad atom list");
    int d = static_cast<int>(atoms[0].size());
    double minsep = min_separation_inf(atoms);
    if (!(n + 1 > 4.0 * d / minsep)) return out;

    double wmax = 0.0, wmin = std::numeric_limits<double>::infinity();
    for (cplx w : weights) {
        wmax = std::max(wmax, std::abs(w));
        wmin = std::min(wmin, std::abs(w));
    }
    double sum = 0.0;
    for (const auto& a : atoms) {
        double dist = wrap_dist_inf(x, a);
        if (dist == 0.0) return out;  // coincides with an atom
        sum += 1.0 / (dist * dist);
    }
    out.applicable = true;
    out.value = (wmax / wmin) * sum / (3.0 * (n + 1.0) * (n + 1.0));
    return out;
}

struct NearSupportBound {
    double upper = std::numeric_limits<double>::quiet_NaN();         // on p1
    double taylor_lower = std::numeric_limits<double>::quiet_NaN();  // on p1
    bool applicable = false;
};

// Near-support quadratic dip: for x within sqrt(d)/(n+1) of the support and
// separation n+1 > 2 sqrt(d)/minsep,
// p1(x) <= 1 - 3^{d-1}(2d-1) / (2^d d^{2+d/2}) (n+1)^2 min_j |x-x_j|_inf^2;
// the Taylor/Bernstein companion gives p1(x) >= 1 - 2 pi^2 d^2 n^2 min^2.
inline NearSupportBound p1_nearsupport_bound(std::span<const double> x,
                                             const std::vector<std::vector<double>>& atoms,
                                             int n) {
    NearSupportBound out;
    if (atoms.empty()) throw std::invalid_argument("p1_nearsupport_bound: no atoms");
    int d = static_cast<int>(atoms[0].size());
    double mind = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) mind = std::min(mind, wrap_dist_inf(x, a));
    out.taylor_lower =
        1.0 - 2.0 * pi * pi * d * d * static_cast<double>(n) * n * mind * mind;

    double minsep = min_separation_inf(atoms);
    double sd = std::sqrt(static_cast<double>(d));
    if (!(n + 1 > 2.0 * sd / minsep) || !(mind <= sd / (n + 1.0))) return out;
    double c = std::pow(3.0, d - 1) * (2.0 * d - 1.0) /
               (std::pow(2.0, d) * std::pow(static_cast<double>(d), 2.0 + d / 2.0));
    out.upper = 1.0 - c * (n + 1.0) * (n + 1.0) * mind * mind;
    out.applicable = true;
    return out;
}

struct VarietyBound {
    double exact_form = std::numeric_limits<double>::quiet_NaN();
    double loose_form = std::numeric_limits<double>::quiet_NaN();
    bool applicable = false;
};

// For g of max-degree m vanishing on supp(mu) and g(y) != 0:
// p_{1,n+m}(y) <= 1 - (n+1)^d/(n+m+1)^d |g(y)|^2 / (F_n*|g|^2)(y)
//             <= ||g||_{L2}^2/|g(y)|^2 * m(4m+2)^d/(n+1) + dm/(n+m+1).
// (F_n*|g|^2)(y) is evaluated exactly from the autocorrelation of g^.
inline VarietyBound p1_variety_bound(std::span<const double> y, const TrigPolynomial& g,
                                     int n) {
    VarietyBound out;
    const int d = g.dim;
    const int m = g.degree;
    if (n < m) throw std::invalid_argument("p1_variety_bound: n >= deg(g) required");
    IndexBox gb = g.box();
    bool nonconstant = false;
    std::vector<int> k(d);
    for (std::size_t i = 0; i < gb.size(); ++i) {
        gb.unflatten(i, k);
        bool zero_index = std::all_of(k.begin(), k.end(), [](int c) { return c == 0; });
        if (!zero_index && std::abs(g.coeffs[i]) > 0.0) nonconstant = true;
    }
    if (!nonconstant)
        throw std::invalid_argument("p1_variety_bound: g is constant, vanishes nowhere");

    cplx gy = g.eval(y);
    if (std::abs(gy) == 0.0) return out;  // probe sits on the variety

    // fhat(t) = sum_l g^(l+t) conj(g^(l)); (F_n*f)(y) = sum_t mult(t) fhat(t) e(t.y)
    IndexBox fb{d, m};
    std::vector<int> t(d), l(d), lt(d);
    double conv = 0.0;
    double l2 = 0.0;
    for (std::size_t i = 0; i < gb.size(); ++i) l2 += std::norm(g.coeffs[i]);
    for (std::size_t it = 0; it < fb.size(); ++it) {
        fb.unflatten(it, t);
        cplx fhat = 0.0;
        for (std::size_t il = 0; il < gb.size(); ++il) {
            gb.unflatten(il, l);
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                lt[a] = l[a] + t[a];
                if (lt[a] < -m || lt[a] > m) inside = false;
            }
            if (!inside) continue;
            fhat += g.at(lt) * std::conj(g.coeffs[il]);
        }
        double mult = 1.0;
        for (int a = 0; a < d; ++a)
            mult *= std::max(0.0, 1.0 - std::abs(t[a]) / (n + 1.0));
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += t[a] * y[a];
        conv += (mult * fhat * std::polar(1.0, tau * phase)).real();
    }
    if (!(conv > 0.0)) return out;

    double ratio = std::pow((n + 1.0) / (n + m + 1.0), d);
    out.exact_form = 1.0 - ratio * std::norm(gy) / conv;
    out.loose_form = l2 / std::norm(gy) * m * std::pow(4.0 * m + 2.0, d) / (n + 1.0) +
                     static_cast<double>(d) * m / (n + m + 1.0);
    out.applicable = true;
    return out;
}

struct SvalsGap {
    double measured = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    bool applicable = false;
};

// | |lambda_j| - sigma_j/N | <= |lambda_1| (1+sqrt(e)) r / (2 (n+1) minsep),
// weights sorted nonincreasingly by modulus; needs (n+1) minsep > d.
inline SvalsGap svals_weight_gap(const SvdFactors& f,
                                 const std::vector<cplx>& weights,
                                 const std::vector<std::vector<double>>& atoms, int n) {
    SvalsGap out;
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("svals_weight_gap: bad atom list");
    int d = static_cast<int>(atoms[0].size());
    double minsep = min_separation_inf(atoms);
    if (!((n + 1.0) * minsep > d)) return out;

    std::vector<double> mags(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) mags[i] = std::abs(weights[i]);
    std::sort(mags.rbegin(), mags.rend());
    int r = static_cast<int>(mags.size());
    if (f.sigma.size() < r)
        throw std::invalid_argument("svals_weight_gap: not enough singular values");

    double N = static_cast<double>(f.matrix_size);
    double dev = 0.0;
    for (int j = 0; j < r; ++j)
        dev = std::max(dev, std::abs(mags[static_cast<std::size_t>(j)] - f.sigma(j) / N));
    out.measured = dev;
    out.bound = mags[0] * (1.0 + std::sqrt(std::exp(1.0))) * r / (2.0 * (n + 1.0) * minsep);
    out.applicable = true;
    return out;
}

}  // namespace torus

#endif  // TORUS_SOS_HPP
