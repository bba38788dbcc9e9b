// moment_table.hpp
// Trigonometric moments mu^(k) = int exp(-2*pi*i*<k,x>) dmu(x) collected on
// the symmetric box k in {-n..n}^d.

#ifndef TORUS_MOMENT_TABLE_HPP
#define TORUS_MOMENT_TABLE_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "torus/common.hpp"

namespace torus {

struct MomentTable {
    int dim = 1;
    int order = 0;
    std::vector<cplx> values;  // IndexBox{dim, order} row-major layout

    MomentTable() = default;
    MomentTable(int d, int n) : dim(d), order(n), values(IndexBox{d, n}.size(), cplx(0.0)) {
        if (d < 1 || n < 0) throw std::invalid_argument("MomentTable: bad shape");
    }

    IndexBox box() const { return IndexBox{dim, order}; }

    cplx at(std::span<const int> k) const { return values[box().flatten(k)]; }
    cplx& at(std::span<const int> k) { return values[box().flatten(k)]; }

    cplx at1(int k) const {
        if (dim != 1) throw std::invalid_argument("MomentTable::at1: dim != 1");
        return values[static_cast<std::size_t>(k + order)];
    }
    cplx at2(int k1, int k2) const {
        if (dim != 2) throw std::invalid_argument("MomentTable::at2: dim != 2");
        int s = 2 * order + 1;
        return values[static_cast<std::size_t>(k1 + order) * s +
                      static_cast<std::size_t>(k2 + order)];
    }

    cplx moment_zero() const {
        std::vector<int> k(dim, 0);
        return at(k);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    // mu^(-k) == conj(mu^(k)) for real measures.
    bool conj_symmetric(double tol = 1e-12) const {
        IndexBox b = box();
        std::vector<int> k(dim), mk(dim);
        for (std::size_t i = 0; i < b.size(); ++i) {
            b.unflatten(i, k);
            for (int a = 0; a < dim; ++a) mk[a] = -k[a];
            if (std::abs(at(k) - std::conj(at(mk))) > tol) return false;
        }
        return true;
    }

    // Restriction to a smaller order (same dimension).
    MomentTable truncated(int m) const {
        if (m > order) throw std::invalid_argument("MomentTable::truncated: m > order");
        MomentTable out(dim, m);
        IndexBox ob = out.box();
        std::vector<int> k(dim);
        for (std::size_t i = 0; i < ob.size(); ++i) {
            ob.unflatten(i, k);
            out.values[i] = at(k);
        }
        return out;
    }
};

// table(alpha*mu + beta*nu) = alpha*table(mu) + beta*table(nu).
inline MomentTable axpy(cplx alpha, const MomentTable& a, cplx beta, const MomentTable& b) {
    if (a.dim != b.dim || a.order != b.order)
        throw std::invalid_argument("axpy: table shape mismatch");
    MomentTable out(a.dim, a.order);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = alpha * a.values[i] + beta * b.values[i];
    return out;
}

}  // namespace torus

#endif  // TORUS_MOMENT_TABLE_HPP
