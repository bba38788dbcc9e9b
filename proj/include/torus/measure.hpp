// measure.hpp
// Symbolic description of complex measures on T^d = [0,1)^d: point masses,
// uniform measures on circles and parametric curves, grid densities, the
// Lebesgue measure, one built-in singular test density, and mixtures.

#ifndef TORUS_MEASURE_HPP
#define TORUS_MEASURE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "torus/common.hpp"
#include "torus/curves.hpp"

namespace torus {

struct Measure;

struct Discrete {
    std::vector<std::vector<double>> points;  // each in [0,1)^d
    std::vector<cplx> weights;
};

struct CircleUniform {
    std::array<double, 2> center{0.5, 0.5};
    double radius = 0.3;
};

struct ParametricCurve {
    CurveFn gamma;
    double arclength = 0.0;
};

struct GridDensity {
    int grid = 0;              // samples per axis
    std::vector<cplx> values;  // grid^d row-major, sample at j/grid
};

struct Lebesgue {};

// 1-D test measure mixing an atom at 1/8, a uniform block on [1/4,5/8] and a
// density with an integrable |x-7/8|^{-1/2} pole on [3/4,1]; each part
// carries mass 1/3.
struct SingularMix {};

struct MixtureTerm {
    cplx coeff;
    std::shared_ptr<const Measure> part;
};

struct Mixture {
    std::vector<MixtureTerm> terms;
};

using MeasureShape =
    std::variant<Discrete, CircleUniform, ParametricCurve, GridDensity, Lebesgue,
                 SingularMix, Mixture>;

struct Measure {
    int dim = 1;
    bool normalized = true;
    MeasureShape shape;

    Measure() = default;
    Measure(int d, MeasureShape s, bool norm = true)
        : dim(d), normalized(norm), shape(std::move(s)) {
        validate();
    }

    void validate() const {
        if (dim < 1) throw std::invalid_argument("Measure: dim >= 1 required");
        if (const auto* a = std::get_if<Discrete>(&shape)) {
            if (a->points.empty() || a->points.size() != a->weights.size())
                throw std::invalid_argument("Measure: discrete points/weights mismatch");
            for (const auto& p : a->points) {
                if (static_cast<int>(p.size()) != dim)
                    throw std::invalid_argument("Measure: point dimension mismatch");
                for (double c : p)
                    if (!(c >= 0.0) || !(c < 1.0) || !std::isfinite(c))
                        throw std::invalid_argument("Measure: point outside [0,1)^d");
            }
            for (cplx w : a->weights)
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                    throw std::invalid_argument("Measure: non-finite weight");
        } else if (const auto* c = std::get_if<CircleUniform>(&shape)) {
            if (dim != 2) throw std::invalid_argument("Measure: circle requires dim 2");
            if (!(c->radius > 0.0) || !(c->radius < 0.5))
                throw std::invalid_argument("Measure: circle radius must lie in (0, 1/2)");
        } else if (const auto* g = std::get_if<GridDensity>(&shape)) {
            if (g->grid < 1 || g->values.size() != ipow(static_cast<std::size_t>(g->grid), dim))
                throw std::invalid_argument("Measure: grid density size mismatch");
        } else if (std::holds_alternative<SingularMix>(shape)) {
            if (dim != 1) throw std::invalid_argument("Measure: singular-mix requires dim 1");
        }
    }
};

// Total mass mu(T^d).
inline cplx measure_mass(const Measure& m) {
    return std::visit(
        [&](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Discrete>) {
                cplx acc = 0.0;
                for (cplx w : s.weights) acc += w;
                return acc;
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                cplx acc = 0.0;
                for (cplx v : s.values) acc += v;
                return acc / static_cast<double>(s.values.size());
            } else if constexpr (std::is_same_v<T, Mixture>) {
                cplx acc = 0.0;
                for (const auto& t : s.terms) acc += t.coeff * measure_mass(*t.part);
                return acc;
            } else {
                return cplx(1.0);  // circle, curve, Lebesgue, singular-mix
            }
        },
        m.shape);
}

// Total variation for the shapes where it is available in closed form.
inline double total_variation(const Measure& m) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Discrete>) {
                double acc = 0.0;
                for (cplx w : s.weights) acc += std::abs(w);
                return acc;
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                double acc = 0.0;
                for (cplx v : s.values) acc += std::abs(v);
                return acc / static_cast<double>(s.values.size());
            } else if constexpr (std::is_same_v<T, Mixture>) {
                double acc = 0.0;
                for (const auto& t : s.terms)
                    acc += std::abs(t.coeff) * total_variation(*t.part);
                return acc;  // upper bound for signed mixtures
            } else {
                return 1.0;
            }
        },
        m.shape);
}

inline Measure scaled(const Measure& m, cplx factor) {
    Measure out = m;
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Discrete>) {
                for (auto& w : s.weights) w *= factor;
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                for (auto& v : s.values) v *= factor;
            } else if constexpr (std::is_same_v<T, Mixture>) {
                for (auto& t : s.terms) t.coeff *= factor;
            } else {
                throw std::invalid_argument("scaled: shape has fixed unit mass");
            }
        },
        out.shape);
    return out;
}

inline Measure normalized_measure(const Measure& m) {
    cplx mass = measure_mass(m);
    if (std::abs(mass) < 1e-14)
        throw std::invalid_argument("normalized_measure: zero total mass");
    if (std::abs(mass - 1.0) < 1e-15) {
        Measure out = m;
        out.normalized = true;
        return out;
    }
    Measure out = scaled(m, 1.0 / mass);
    out.normalized = true;
    return out;
}

inline Measure dirac(std::vector<double> x) {
    int d = static_cast<int>(x.size());
    Discrete a;
    a.points.push_back(std::move(x));
    a.weights.push_back(1.0);
    return Measure(d, std::move(a));
}

// Deterministic 15-atom test measure: a jittered 4x4 lattice with one site
// removed and positive weights, normalized to unit mass.  Wrap-inf
// separation stays near 1/4, which keeps the moment-matrix bounds of the
// discrete theory in reach for moderate degrees.
inline Measure lattice_atoms(int count = 15, std::uint64_t seed = 7u,
                             double jitter = 0.02) {
    if (count < 1 || count > 16)
        throw std::invalid_argument("lattice_atoms: count must be in 1..16");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uj(-jitter, jitter);
    std::uniform_real_distribution<double> uw(0.5, 1.5);
    Discrete a;
    double wsum = 0.0;
    for (int i = 0; i < 4 && static_cast<int>(a.points.size()) < count; ++i) {
        for (int j = 0; j < 4 && static_cast<int>(a.points.size()) < count; ++j) {
            double x = wrap01(0.125 + 0.25 * i + uj(rng));
            double y = wrap01(0.125 + 0.25 * j + uj(rng));
            a.points.push_back({x, y});
            double w = uw(rng);
            a.weights.push_back(w);
            wsum += w;
        }
    }
    for (auto& w : a.weights) w /= wsum;
    return Measure(2, std::move(a));
}

inline Measure circle_measure(std::array<double, 2> center = {0.5, 0.5},
                              double radius = 0.3) {
    return Measure(2, CircleUniform{center, radius});
}

inline Measure trig_oval_measure() {
    CurveFn fn = trig_oval_curve_fn();
    double len = curve_arclength(fn);
    return Measure(2, ParametricCurve{std::move(fn), len});
}

inline Measure circle_as_parametric(std::array<double, 2> center = {0.5, 0.5},
                                    double radius = 0.3) {
    CurveFn fn = circle_curve_fn(center, radius);
    return Measure(2, ParametricCurve{std::move(fn), tau * radius});
}

}  // namespace torus

#endif  // TORUS_MEASURE_HPP
