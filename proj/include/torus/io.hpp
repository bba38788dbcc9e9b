// io.hpp
// External interfaces: JSON measure specs, CSV tables with a provenance
// header, PGM/PPM heatmaps with min/max contrast, and result JSON.

#ifndef TORUS_IO_HPP
#define TORUS_IO_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torus/common.hpp"
#include "torus/measure.hpp"
#include "torus/moment_table.hpp"
#include "torus/svd.hpp"
#include "torus/trig_poly.hpp"

namespace torus {

inline constexpr const char* version_string = "0.1.0";

using json = nlohmann::json;

namespace detail {

inline cplx parse_complex(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("measure spec: expected number or [re, im]");
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline Measure load_measure(const json& spec) {
    if (!spec.contains("dim") || !spec.contains("type"))
        throw std::invalid_argument("measure spec: 'dim' and 'type' are required");
    int dim = spec.at("dim").get<int>();
    bool normalized = spec.value("normalized", true);
    std::string type = spec.at("type").get<std::string>();

    if (type == "discrete") {
        Discrete a;
        for (const auto& pt : spec.at("points")) {
            std::vector<double> x;
            if (pt.is_number())
                x.push_back(pt.get<double>());
            else
                for (const auto& c : pt) x.push_back(c.get<double>());
            a.points.push_back(std::move(x));
        }
        for (const auto& w : spec.at("weights")) a.weights.push_back(detail::parse_complex(w));
        return Measure(dim, std::move(a), normalized);
    }
    if (type == "circle") {
        CircleUniform c;
        c.center = {spec.at("center")[0].get<double>(), spec.at("center")[1].get<double>()};
        c.radius = spec.at("radius").get<double>();
        return Measure(2, c, normalized);
    }
    if (type == "curve") {
        std::string name = spec.at("name").get<std::string>();
        if (name == "trig-oval") return trig_oval_measure();
        if (name == "circle") {
            std::array<double, 2> center{0.5, 0.5};
            double radius = 0.3;
            if (spec.contains("center"))
                center = {spec["center"][0].get<double>(), spec["center"][1].get<double>()};
            if (spec.contains("radius")) radius = spec["radius"].get<double>();
            return circle_as_parametric(center, radius);
        }
        throw std::invalid_argument("measure spec: unknown curve '" + name + "'");
    }
    if (type == "density") {
        GridDensity g;
        g.grid = spec.at("grid").get<int>();
        for (const auto& v : spec.at("values")) g.values.push_back(detail::parse_complex(v));
        return Measure(dim, std::move(g), normalized);
    }
    if (type == "lebesgue") return Measure(dim, Lebesgue{}, normalized);
    if (type == "singular-mix") return Measure(1, SingularMix{}, normalized);
    if (type == "mixture") {
        Mixture mix;
        for (const auto& comp : spec.at("components")) {
            MixtureTerm term;
            term.coeff = detail::parse_complex(comp.at("coeff"));
            term.part = std::make_shared<Measure>(load_measure(comp.at("measure")));
            mix.terms.push_back(std::move(term));
        }
        return Measure(dim, std::move(mix), normalized);
    }
    throw std::invalid_argument("measure spec: unknown type '" + type + "'");
}

inline Measure load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open measure spec: " + path);
    json spec = json::parse(in);
    return load_measure(spec);
}

inline json discrete_to_json(const Measure& m) {
    const auto* a = std::get_if<Discrete>(&m.shape);
    if (a == nullptr) throw std::invalid_argument("discrete_to_json: not discrete");
    json spec;
    spec["dim"] = m.dim;
    spec["type"] = "discrete";
    spec["normalized"] = m.normalized;
    json pts = json::array(), wts = json::array();
    for (const auto& p : a->points) pts.push_back(p);
    for (cplx w : a->weights) {
        if (w.imag() == 0.0)
            wts.push_back(w.real());
        else
            wts.push_back(json::array({w.real(), w.imag()}));
    }
    spec["points"] = pts;
    spec["weights"] = wts;
    return spec;
}

inline std::string provenance_line(const std::vector<std::string>& argv) {
    std::ostringstream os;
    os << "# provenance:";
    for (const auto& a : argv) os << ' ' << a;
    os << " version=" << version_string;
    return os.str();
}

inline void write_moment_csv(const std::string& path, const MomentTable& table,
                             const std::string& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (!provenance.empty()) out << provenance << '\n';
    IndexBox box = table.box();
    std::vector<int> k(table.dim);
    for (std::size_t i = 0; i < box.size(); ++i) {
        box.unflatten(i, k);
        for (int a = 0; a < table.dim; ++a) out << k[a] << ',';
        out << detail::format_double(table.values[i].real()) << ','
            << detail::format_double(table.values[i].imag()) << '\n';
    }
}

inline void write_grid_csv(const std::string& path, int dim, int m,
                           const std::vector<double>& values,
                           const std::string& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (!provenance.empty()) out << provenance << '\n';
    if (dim == 1) {
        for (int i = 0; i < m; ++i)
            out << detail::format_double(static_cast<double>(i) / m) << ','
                << detail::format_double(values[static_cast<std::size_t>(i)]) << '\n';
    } else if (dim == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                out << detail::format_double(static_cast<double>(i) / m) << ','
                    << detail::format_double(static_cast<double>(j) / m) << ','
                    << detail::format_double(values[static_cast<std::size_t>(i) * m + j])
                    << '\n';
    } else {
        throw std::invalid_argument("write_grid_csv: dim must be 1 or 2");
    }
}

// 8-bit grayscale with affine min/max contrast; pixel (row i, col j) is the
// value at (i/m, j/m).
inline void write_pgm(const std::string& path, int m, const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("write_pgm: size mismatch");
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    double scale = (hi > lo) ? 255.0 / (hi - lo) : 0.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P5\n" << m << ' ' << m << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double v = (values[static_cast<std::size_t>(i) * m + j] - lo) * scale;
            row[static_cast<std::size_t>(j)] =
                static_cast<unsigned char>(std::clamp(v + 0.5, 0.0, 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), m);
    }
}

// Diverging blue-white-red map, symmetric around zero; useful for signed
// fields such as Dirichlet partial sums.
inline void write_ppm(const std::string& path, int m, const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("write_ppm: size mismatch");
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) vmax = 1.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P6\n" << m << ' ' << m << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(m) * 3);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double t = values[static_cast<std::size_t>(i) * m + j] / vmax;  // [-1,1]
            double r = t >= 0.0 ? 255.0 : 255.0 * (1.0 + t);
            double b = t <= 0.0 ? 255.0 : 255.0 * (1.0 - t);
            double g = 255.0 * (1.0 - std::abs(t));
            row[static_cast<std::size_t>(j) * 3 + 0] =
                static_cast<unsigned char>(std::clamp(r + 0.5, 0.0, 255.0));
            row[static_cast<std::size_t>(j) * 3 + 1] =
                static_cast<unsigned char>(std::clamp(g + 0.5, 0.0, 255.0));
            row[static_cast<std::size_t>(j) * 3 + 2] =
                static_cast<unsigned char>(std::clamp(b + 0.5, 0.0, 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), 3 * m);
    }
}

inline void write_svals_csv(const std::string& path, const SvdFactors& f,
                            const std::string& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (!provenance.empty()) out << provenance << '\n';
    for (Eigen::Index j = 0; j < f.sigma.size(); ++j)
        out << (j + 1) << ',' << detail::format_double(f.sigma(j)) << '\n';
}

// Binary dump of left singular vector coefficients: header "TORUSU1", then
// int32 {dim, order, N, count}, then column-major interleaved re/im doubles.
inline void write_u_coefficients(const std::string& path, const SvdFactors& f, int dim,
                                 int order) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write("TORUSU1", 7);
    std::int32_t header[4] = {static_cast<std::int32_t>(dim),
                              static_cast<std::int32_t>(order),
                              static_cast<std::int32_t>(f.matrix_size),
                              static_cast<std::int32_t>(f.U.cols())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (Eigen::Index c = 0; c < f.U.cols(); ++c)
        for (Eigen::Index r = 0; r < f.U.rows(); ++r) {
            double re = f.U(r, c).real(), im = f.U(r, c).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof(double));
            out.write(reinterpret_cast<const char*>(&im), sizeof(double));
        }
}

inline void write_weights_csv(const std::string& path, const Eigen::VectorXd& w,
                              const std::string& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (!provenance.empty()) out << provenance << '\n';
    for (Eigen::Index j = 0; j < w.size(); ++j)
        out << j << ',' << detail::format_double(w(j)) << '\n';
}

}  // namespace torus

#endif  // TORUS_IO_HPP
