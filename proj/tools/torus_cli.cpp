// torus_cli.cpp
// Command-line front end: moment generation, kernel approximants, SoS
// interpolation, Wasserstein-1 computations, and the convergence-rate
// experiments.  Exit codes: 0 success, 2 spec/usage error, 3 numerical
// non-convergence (partial outputs are kept).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "torus/io.hpp"
#include "torus/kernels.hpp"
#include "torus/measure.hpp"
#include "torus/moment_matrix.hpp"
#include "torus/moments.hpp"
#include "torus/sos.hpp"
#include "torus/svd.hpp"
#include "torus/transport.hpp"
#include "torus/trig_poly.hpp"

namespace fs = std::filesystem;
using namespace torus;

namespace {

struct CommonFlags {
    std::string spec;
    std::string out = ".";
    int grid = 502;
    int samples = 3000;
    double rank_tol = 1e-8;
    std::uint64_t seed = 7;
    std::string kernel = "fejer";
    std::string degrees;
    int degree = -1;
};

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    if (text.find(':') != std::string::npos) {
        int a = 0, b = 0, step = 1;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        is >> a >> c1 >> b;
        if (is >> c2 >> step) {
        }
        if (step <= 0) step = 1;
        for (int n = a; n <= b; n += step) out.push_back(n);
        return out;
    }
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

KernelSpec make_kernel(const std::string& name, int n, int dim) {
    if (name == "fejer") return KernelSpec::fejer(n, dim);
    if (name == "jackson") return KernelSpec::jackson(n, dim);
    if (name == "dirichlet") return KernelSpec::dirichlet(n, dim);
    if (name == "best-delta") return KernelSpec::best_delta(n);
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

Measure resolve_measure(const CommonFlags& flags) {
    if (flags.spec.empty()) return lattice_atoms(15, flags.seed);
    if (!flags.spec.empty() && flags.spec.front() == '{')
        return load_measure(json::parse(flags.spec));
    return load_measure_file(flags.spec);
}

std::string out_path(const CommonFlags& flags, const std::string& name) {
    fs::create_directories(flags.out);
    return (fs::path(flags.out) / name).string();
}

std::string prov(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return provenance_line(args);
}

void discrete_target(const Measure& m, int samples,
                     std::vector<std::array<double, 2>>& atoms,
                     std::vector<double>& lambda, bool unweighted) {
    const Discrete* a = std::get_if<Discrete>(&m.shape);
    Measure sampled;
    if (a == nullptr) {
        sampled = sample_curve(m, samples);
        a = &std::get<Discrete>(sampled.shape);
    }
    atoms.clear();
    lambda.clear();
    for (std::size_t j = 0; j < a->points.size(); ++j) {
        atoms.push_back({a->points[j][0], a->points[j][1]});
        lambda.push_back(unweighted ? 1.0 / static_cast<double>(a->points.size())
                                    : a->weights[j].real());
    }
}

int cmd_moments(const CommonFlags& flags, const std::string& provenance) {
    Measure m = resolve_measure(flags);
    MomentTable t = moments(m, flags.degree);
    write_moment_csv(out_path(flags, "moments.csv"), t, provenance);
    return 0;
}

int cmd_approx(const CommonFlags& flags, const std::string& provenance) {
    Measure m = resolve_measure(flags);
    MomentTable t = moments(m, flags.degree);
    KernelSpec kernel = make_kernel(flags.kernel, flags.degree, m.dim);
    TrigPolynomial p = convolve(t, kernel);
    std::vector<double> values = eval_grid_real(p, flags.grid);
    write_grid_csv(out_path(flags, "approx.csv"), m.dim, flags.grid, values, provenance);
    if (m.dim == 2) {
        write_pgm(out_path(flags, "approx.pgm"), flags.grid, values);
        write_ppm(out_path(flags, "approx.ppm"), flags.grid, values);
    }
    return 0;
}

int cmd_interp(const CommonFlags& flags, const std::string& provenance, int rank_override) {
    Measure m = resolve_measure(flags);
    int n = flags.degree;
    MomentMatrix T(moments(m, n), n);
    SvdOptions sopts;
    sopts.rank_tol = flags.rank_tol;
    SvdFactors f = svd(T, sopts);
    int r = rank_override > 0 ? rank_override : f.rank;
    SosPair pair = sos_pair(f, m.dim, n, r, flags.grid);
    write_grid_csv(out_path(flags, "p1.csv"), m.dim, flags.grid, pair.p1, provenance);
    if (m.dim == 2) write_pgm(out_path(flags, "p1.pgm"), flags.grid, pair.p1);
    write_svals_csv(out_path(flags, "svals.csv"), f, provenance);
    write_u_coefficients(out_path(flags, "u_coeffs.bin"), f, m.dim, n);
    std::cout << "rank " << r << " of N=" << f.matrix_size << "\n";
    return 0;
}

int cmd_w1(const CommonFlags& flags, const std::string& spec_b,
           const std::string& provenance) {
    Measure a = resolve_measure(flags);
    TransportOptions topts;
    topts.grid = flags.grid;
    topts.samples = flags.samples;

    W1Result res;
    if (!spec_b.empty()) {
        CommonFlags other = flags;
        other.spec = spec_b;
        Measure b = resolve_measure(other);
        res = w1_auto(a, b, topts);
    } else {
        if (flags.degree < 0)
            throw std::invalid_argument("w1: provide --spec-b or --kernel/--degree");
        TrigPolynomial p =
            convolve(moments(a, flags.degree), make_kernel(flags.kernel, flags.degree, a.dim));
        res = w1_auto(p, a, topts);
    }
    json out = {{"w1", res.w1},
                {"route", res.route},
                {"iterations", res.iterations},
                {"gradient_inf_norm", res.grad_inf_norm},
                {"termination", res.termination}};
    std::ofstream os(out_path(flags, "w1.json"));
    os << out.dump(2) << '\n';
    if (res.weights.size() > 0)
        write_weights_csv(out_path(flags, "weights.csv"), res.weights, provenance);
    std::cout << "w1 = " << res.w1 << " (" << res.route << ")\n";
    return res.converged ? 0 : 3;
}

int cmd_table1(const CommonFlags& flags, const std::string& provenance) {
    std::vector<int> degrees = parse_degrees(flags.degrees);
    if (degrees.empty()) throw std::invalid_argument("table1: --degrees required");
    std::ofstream out(out_path(flags, "table1.csv"));
    out << provenance << '\n';
    out << "n,dirichlet,dirichlet_bound,fejer,fejer_bound,jackson,jackson_bound,best,"
           "best_exact\n";
    Measure delta = dirac({0.0});
    for (int n : degrees) {
        MomentTable t = moments(delta, n);
        double wd = w1_1d(delta, convolve(t, KernelSpec::dirichlet(n)));
        double wf = w1_1d(delta, convolve(t, KernelSpec::fejer(n)));
        double wb = n >= 1 ? w1_1d(delta, best_delta_poly(n)) : 0.25;
        double bd = (std::log(std::max(2, n)) / (pi * pi) + 1.25) / (n + 1.0);
        double bf = (std::log(n + 1.0) + 3.0) / (pi * pi * n);
        out << n << ',' << wd << ',' << bd << ',' << wf << ',' << bf << ',';
        if (n % 2 == 0 && n >= 2) {
            double wj = w1_1d(delta, convolve(t, KernelSpec::jackson(n)));
            out << wj << ',' << 1.5 / (n + 2.0) << ',';
        } else {
            out << ",,";
        }
        out << wb << ',' << 1.0 / (4.0 * (n + 1.0)) << '\n';
    }
    return 0;
}

int cmd_rates(const CommonFlags& flags, const std::string& provenance) {
    std::vector<int> degrees = parse_degrees(flags.degrees);
    if (degrees.empty()) throw std::invalid_argument("rates: --degrees required");
    Measure m = resolve_measure(flags);
    if (m.dim != 2) throw std::invalid_argument("rates: experiment is 2-D");

    bool p1_mode = (flags.kernel == "p1");
    std::vector<std::array<double, 2>> atoms;
    std::vector<double> lambda;
    discrete_target(m, flags.samples, atoms, lambda, p1_mode);

    std::ofstream out(out_path(flags, "rates.csv"));
    out << provenance << '\n';
    out << "n,w1,iterations,gradient_inf_norm,termination,fejer_bound\n";
    int max_degree = *std::max_element(degrees.begin(), degrees.end());
    MomentTable table = moments(m, max_degree);
    bool any_failed = false;
    for (int n : degrees) {
        std::vector<double> density;
        if (p1_mode) {
            MomentMatrix T(table.truncated(n), n);
            SvdOptions sopts;
            sopts.rank_tol = flags.rank_tol;
            SvdFactors f = svd(T, sopts);
            SosPair pair = sos_pair(f, 2, n, f.rank, flags.grid);
            density = pair.p1;
            double mean = 0.0;
            for (double v : density) mean += v;
            mean /= static_cast<double>(density.size());
            for (double& v : density) v /= mean;  // ||p1||_{L1} = r/N normalization
        } else {
            KernelSpec kernel = make_kernel(flags.kernel, n, 2);
            density = eval_grid_real(convolve(table.truncated(n), kernel), flags.grid,
                                     /*warn=*/false);
        }
        SemidiscreteProblem prob = make_semidiscrete_problem(
            flags.grid, std::move(density), atoms, lambda);
        SemidiscreteResult res = w1_semidiscrete(prob);
        double bound = 2.0 * (std::log(n + 1.0) + 3.0) / (pi * pi * n);
        out << n << ',' << res.w1 << ',' << res.iterations << ',' << res.grad_inf_norm
            << ',' << res.termination << ',' << bound << '\n';
        if (!res.converged && res.termination == "line-search") any_failed = true;
    }
    return any_failed ? 3 : 0;
}

int cmd_bounds_p1(const CommonFlags& flags, const std::string& cross, int count,
                  const std::string& provenance) {
    Measure m = resolve_measure(flags);
    const auto* a = std::get_if<Discrete>(&m.shape);
    if (a == nullptr)
        throw std::invalid_argument("bounds-p1: spec must be a discrete measure");
    int n = flags.degree;
    MomentMatrix T(moments(m, n), n);
    SvdOptions sopts;
    sopts.rank_tol = flags.rank_tol;
    SvdFactors f = svd(T, sopts);

    double x0, y0, x1, y1;
    if (std::sscanf(cross.c_str(), "%lf,%lf,%lf,%lf", &x0, &y0, &x1, &y1) != 4)
        throw std::invalid_argument("bounds-p1: --cross expects x0,y0,x1,y1");

    std::ofstream out(out_path(flags, "bounds_p1.csv"));
    out << provenance << '\n';
    out << "t,x,y,p1,off_bound,off_applicable,near_upper,near_applicable,taylor_lower\n";
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        std::vector<double> x = {wrap01(x0 + t * (x1 - x0)), wrap01(y0 + t * (y1 - y0))};
        double p1 = sos_p1_at(f, 2, n, f.rank, x);
        BoundValue off = p1_offsupport_bound(x, a->points, a->weights, n);
        NearSupportBound nb = p1_nearsupport_bound(x, a->points, n);
        out << t << ',' << x[0] << ',' << x[1] << ',' << p1 << ',' << off.value << ','
            << (off.applicable ? 1 : 0) << ',' << nb.upper << ','
            << (nb.applicable ? 1 : 0) << ',' << nb.taylor_lower << '\n';
    }
    return 0;
}

int cmd_sample_curve(const CommonFlags& flags) {
    Measure m = resolve_measure(flags);
    Measure sampled = sample_curve(m, flags.samples);
    std::ofstream out(out_path(flags, "sampled.json"));
    out << discrete_to_json(sampled).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trigonometric-moment approximation toolkit on the torus"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string spec_b, cross = "0,0,1,1";
    int cross_count = 200, rank_override = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_degree) {
        cmd->add_option("--spec", flags.spec,
                        "measure spec: JSON file path or inline JSON (default: seeded "
                        "15-atom measure)");
        cmd->add_option("--out", flags.out, "output directory");
        cmd->add_option("--grid", flags.grid, "grid points per axis (default 502)");
        cmd->add_option("--samples", flags.samples, "curve sample count (default 3000)");
        cmd->add_option("--rank-tol", flags.rank_tol, "relative rank threshold");
        cmd->add_option("--seed", flags.seed, "seed for generated measures");
        cmd->add_option("--kernel", flags.kernel,
                        "fejer | jackson | dirichlet | best-delta (rates: also p1)");
        if (needs_degree)
            cmd->add_option("--degree", flags.degree, "polynomial degree n")->required();
        else
            cmd->add_option("--degree", flags.degree, "polynomial degree n");
        cmd->add_option("--degrees", flags.degrees, "list 10,20,30 or range a:b[:step]");
    };

    CLI::App* moments_cmd = app.add_subcommand("moments", "write the moment table CSV");
    add_common(moments_cmd, true);
    CLI::App* approx_cmd =
        app.add_subcommand("approx", "kernel approximant on a grid (CSV + PGM)");
    add_common(approx_cmd, true);
    CLI::App* interp_cmd =
        app.add_subcommand("interp", "SoS signal polynomial p1 from the moment SVD");
    add_common(interp_cmd, true);
    interp_cmd->add_option("--rank", rank_override, "override the numerical rank");
    CLI::App* w1_cmd = app.add_subcommand("w1", "Wasserstein-1 distance");
    add_common(w1_cmd, false);
    w1_cmd->add_option("--spec-b", spec_b, "second measure spec (default: kernel approximant)");
    CLI::App* table1_cmd =
        app.add_subcommand("table1", "W1(delta_0, K_n) per kernel against the bounds");
    add_common(table1_cmd, false);
    CLI::App* rates_cmd =
        app.add_subcommand("rates", "W1 convergence rates over a degree range");
    add_common(rates_cmd, false);
    CLI::App* bounds_cmd =
        app.add_subcommand("bounds-p1", "p1 with pointwise bounds on a cross section");
    add_common(bounds_cmd, true);
    bounds_cmd->add_option("--cross", cross, "cross section x0,y0,x1,y1");
    bounds_cmd->add_option("--count", cross_count, "sample count along the section");
    CLI::App* sample_cmd =
        app.add_subcommand("sample-curve", "equal-measure atoms from a curve measure");
    add_common(sample_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string provenance = prov(argc, argv);
    try {
        if (moments_cmd->parsed()) return cmd_moments(flags, provenance);
        if (approx_cmd->parsed()) return cmd_approx(flags, provenance);
        if (interp_cmd->parsed()) return cmd_interp(flags, provenance, rank_override);
        if (w1_cmd->parsed()) return cmd_w1(flags, spec_b, provenance);
        if (table1_cmd->parsed()) return cmd_table1(flags, provenance);
        if (rates_cmd->parsed()) return cmd_rates(flags, provenance);
        if (bounds_cmd->parsed())
            return cmd_bounds_p1(flags, cross, cross_count, provenance);
        if (sample_cmd->parsed()) return cmd_sample_curve(flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
