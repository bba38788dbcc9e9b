// bernoulli.hpp
// Exact 1-D Wasserstein-1 distances through the degree-1 Bernoulli spline
// B1(x) = 1/2 - frac(x):  W1(mu, nu) = int_T |(B1*mu)(t) - (B1*nu)(t)| dt.
// Profiles of atoms are piecewise affine, profiles of trigonometric
// densities divide coefficients by 2 pi i k; between atom jumps the
// difference has a closed-form antiderivative, so only the sign changes are
// located numerically (scan plus bisection).

#ifndef TORUS_BERNOULLI_HPP
#define TORUS_BERNOULLI_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"
#include "torus/measure.hpp"
#include "torus/trig_poly.hpp"

namespace torus {

struct BernoulliProfile {
    // Smooth part sum_{k != 0} c_k e^{2 pi i k t}, c stored on {-K..K}.
    int trig_degree = 0;
    std::vector<cplx> trig;  // size 2K+1, zero at k = 0
    // Atom part sum_i w_i B1(t - a_i); jumps of height w_i at a_i.
    std::vector<std::pair<double, double>> atoms;  // (location, weight)

    double mean_zero_check() const { return 0.0; }  // B1 has zero mean by design
};

namespace detail {

inline void profile_add_measure(BernoulliProfile& prof, const Measure& m, double coeff) {
    if (m.dim != 1)
        throw std::invalid_argument("bernoulli_profile: only d = 1 supported");
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Discrete>) {
                for (std::size_t i = 0; i < s.points.size(); ++i) {
                    if (std::abs(s.weights[i].imag()) > 1e-12)
                        throw std::invalid_argument(
                            "bernoulli_profile: weights must be real");
                    prof.atoms.emplace_back(s.points[i][0],
                                            coeff * s.weights[i].real());
                }
            } else if constexpr (std::is_same_v<T, Lebesgue>) {
                // B1 * lambda = 0
            } else if constexpr (std::is_same_v<T, Mixture>) {
                for (const auto& term : s.terms) {
                    if (std::abs(term.coeff.imag()) > 1e-12)
                        throw std::invalid_argument(
                            "bernoulli_profile: mixture coefficients must be real");
                    profile_add_measure(prof, *term.part, coeff * term.coeff.real());
                }
            } else {
                throw std::invalid_argument(
                    "bernoulli_profile: unsupported measure shape for exact 1-D "
                    "transport (use a trigonometric approximation)");
            }
        },
        m.shape);
}

}  // namespace detail

inline BernoulliProfile bernoulli_profile(const Measure& m) {
    BernoulliProfile prof;
    detail::profile_add_measure(prof, m, 1.0);
    return prof;
}

inline BernoulliProfile bernoulli_profile(const TrigPolynomial& p) {
    if (p.dim != 1)
        throw std::invalid_argument("bernoulli_profile: only d = 1 supported");
    if (!p.is_real(1e-9))
        throw std::invalid_argument("bernoulli_profile: density must be real");
    BernoulliProfile prof;
    prof.trig_degree = p.degree;
    prof.trig.assign(2 * static_cast<std::size_t>(p.degree) + 1, cplx(0.0));
    for (int k = -p.degree; k <= p.degree; ++k) {
        if (k == 0) continue;
        prof.trig[static_cast<std::size_t>(k + p.degree)] =
            p.coeffs[static_cast<std::size_t>(k + p.degree)] / cplx(0.0, tau * k);
    }
    return prof;
}

namespace detail {

struct ProfileDiff {
    int degree = 0;
    std::vector<cplx> trig;                        // {-K..K}, zero at 0
    std::vector<std::pair<double, double>> atoms;  // merged, weights signed

    double smooth(double t) const {
        double acc = 0.0;
        for (int k = 1; k <= degree; ++k) {
            cplx c = trig[static_cast<std::size_t>(k + degree)];
            // real signal: c_{-k} = conj(c_k)
            acc += 2.0 * (c * std::polar(1.0, tau * k * t)).real();
        }
        return acc;
    }

    // Antiderivative of the smooth part.
    double smooth_anti(double t) const {
        double acc = 0.0;
        for (int k = 1; k <= degree; ++k) {
            cplx c = trig[static_cast<std::size_t>(k + degree)] / cplx(0.0, tau * k);
            acc += 2.0 * (c * std::polar(1.0, tau * k * t)).real();
        }
        return acc;
    }
};

inline ProfileDiff profile_difference(const BernoulliProfile& a,
                                      const BernoulliProfile& b) {
    ProfileDiff d;
    d.degree = std::max(a.trig_degree, b.trig_degree);
    d.trig.assign(2 * static_cast<std::size_t>(d.degree) + 1, cplx(0.0));
    for (int k = -a.trig_degree; k <= a.trig_degree; ++k)
        d.trig[static_cast<std::size_t>(k + d.degree)] +=
            a.trig[static_cast<std::size_t>(k + a.trig_degree)];
    for (int k = -b.trig_degree; k <= b.trig_degree; ++k)
        d.trig[static_cast<std::size_t>(k + d.degree)] -=
            b.trig[static_cast<std::size_t>(k + b.trig_degree)];
    d.atoms = a.atoms;
    d.atoms.reserve(a.atoms.size() + b.atoms.size());
    for (auto [loc, w] : b.atoms) d.atoms.emplace_back(loc, -w);
    return d;
}

}  // namespace detail

// int_0^1 | profile_a - profile_b | dt to absolute accuracy ~1e-10.
inline double w1_profiles(const BernoulliProfile& pa, const BernoulliProfile& pb) {
    detail::ProfileDiff diff = detail::profile_difference(pa, pb);

    std::vector<double> breaks;
    breaks.reserve(diff.atoms.size() + 2);
    breaks.push_back(0.0);
    for (auto [loc, w] : diff.atoms) breaks.push_back(wrap01(loc));
    breaks.push_back(1.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-15; }),
                 breaks.end());

    double slope = 0.0;
    for (auto [loc, w] : diff.atoms) slope -= w;

    double total = 0.0;
    const int scan_density = std::max(8192, 64 * diff.degree);
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        double u = breaks[seg], v = breaks[seg + 1];
        if (v - u < 1e-15) continue;

        // Affine atom part on (u, v): slope * t + intercept.
        double intercept = 0.0;
        for (auto [loc, w] : diff.atoms) {
            double a = wrap01(loc);
            intercept += w * (0.5 + a - (a > u + 1e-15 ? 1.0 : 0.0));
        }
        auto value = [&](double t) { return diff.smooth(t) + slope * t + intercept; };
        auto anti = [&](double t) {
            return diff.smooth_anti(t) + 0.5 * slope * t * t + intercept * t;
        };

        // Locate sign changes, then integrate each signed piece exactly.
        int samples = std::max(8, static_cast<int>(std::ceil((v - u) * scan_density)));
        std::vector<double> nodes;
        nodes.push_back(u);
        double tp = u, fp = value(u + 1e-15);
        for (int i = 1; i <= samples; ++i) {
            double t = u + (v - u) * i / samples;
            double ft = value(i == samples ? t - 1e-15 : t);
            if ((fp < 0.0 && ft > 0.0) || (fp > 0.0 && ft < 0.0)) {
                double lo = tp, hi = t, flo = fp;
                for (int b = 0; b < 60; ++b) {
                    double mid = 0.5 * (lo + hi);
                    double fm = value(mid);
                    if ((flo < 0.0) == (fm < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo < 1e-15) break;
                }
                nodes.push_back(0.5 * (lo + hi));
            }
            tp = t;
            fp = ft;
        }
        nodes.push_back(v);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            total += std::abs(anti(nodes[i + 1]) - anti(nodes[i]));
    }
    return total;
}

namespace detail {

inline void check_normalized_1d(const Measure& m) {
    if (m.dim != 1) throw std::invalid_argument("w1_1d: only d = 1 supported");
    cplx mass = measure_mass(m);
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("w1_1d: measure is not normalized");
}

inline void check_normalized_1d(const TrigPolynomial& p) {
    if (p.dim != 1) throw std::invalid_argument("w1_1d: only d = 1 supported");
    if (std::abs(p.mean() - 1.0) > 1e-8)
        throw std::invalid_argument("w1_1d: density is not normalized");
}

}  // namespace detail

template <typename A, typename B>
inline double w1_1d(const A& a, const B& b) {
    detail::check_normalized_1d(a);
    detail::check_normalized_1d(b);
    return w1_profiles(bernoulli_profile(a), bernoulli_profile(b));
}

}  // namespace torus

#endif  // TORUS_BERNOULLI_HPP
