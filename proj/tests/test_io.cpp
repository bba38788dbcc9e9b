#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "torus/io.hpp"
#include "torus/moments.hpp"

using namespace torus;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string first_line(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace

TEST_CASE("measure specs load for every type") {
    json discrete = {
        {"dim", 1},
        {"type", "discrete"},
        {"points", {0.125, 0.5}},
        {"weights", {0.5, 0.5}},
    };
    Measure m = load_measure(discrete);
    REQUIRE(std::get<Discrete>(m.shape).points.size() == 2);

    json circle = {{"dim", 2}, {"type", "circle"}, {"center", {0.5, 0.5}}, {"radius", 0.3}};
    REQUIRE(std::get<CircleUniform>(load_measure(circle).shape).radius == 0.3);

    json oval = {{"dim", 2}, {"type", "curve"}, {"name", "trig-oval"}};
    REQUIRE(std::holds_alternative<ParametricCurve>(load_measure(oval).shape));

    json lebesgue = {{"dim", 2}, {"type", "lebesgue"}};
    REQUIRE(std::holds_alternative<Lebesgue>(load_measure(lebesgue).shape));

    json singular = {{"dim", 1}, {"type", "singular-mix"}};
    REQUIRE(std::holds_alternative<SingularMix>(load_measure(singular).shape));

    json mixture = {{"dim", 1},
                    {"type", "mixture"},
                    {"components",
                     {{{"coeff", 0.5}, {"measure", discrete}},
                      {{"coeff", 0.5}, {"measure", {{"dim", 1}, {"type", "lebesgue"}}}}}}};
    Measure mix = load_measure(mixture);
    REQUIRE(std::get<Mixture>(mix.shape).terms.size() == 2);
    REQUIRE(std::abs(measure_mass(mix) - 1.0) < 1e-14);

    json complex_weights = {{"dim", 1},
                            {"type", "discrete"},
                            {"normalized", false},
                            {"points", {0.25}},
                            {"weights", {{0.3, -0.4}}}};
    Measure cm = load_measure(complex_weights);
    REQUIRE(std::get<Discrete>(cm.shape).weights[0] == cplx(0.3, -0.4));

    json bad = {{"dim", 1}, {"type", "nope"}};
    REQUIRE_THROWS_AS(load_measure(bad), std::invalid_argument);
    json missing = {{"type", "lebesgue"}};
    REQUIRE_THROWS_AS(load_measure(missing), std::invalid_argument);
}

TEST_CASE("discrete measures round-trip through json") {
    Measure m = lattice_atoms(15, 7);
    json spec = discrete_to_json(m);
    Measure back = load_measure(spec);
    const auto& a = std::get<Discrete>(m.shape);
    const auto& b = std::get<Discrete>(back.shape);
    REQUIRE(a.points == b.points);
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        REQUIRE(a.weights[i] == b.weights[i]);
}

TEST_CASE("moment csv carries provenance and index columns") {
    MomentTable t = moments(dirac({0.0}), 2);
    auto path = temp_file("torus_test_moments.csv");
    write_moment_csv(path.string(), t, provenance_line({"torus", "moments"}));
    std::string head = first_line(path);
    REQUIRE(head.rfind("# provenance: torus moments version=", 0) == 0);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);
    REQUIRE(line == "-2,1,0");
    std::filesystem::remove(path);
}

TEST_CASE("grid csv and heatmaps") {
    std::vector<double> v = {0.0, 0.5, 1.0, 0.25};
    auto csv = temp_file("torus_test_grid.csv");
    write_grid_csv(csv.string(), 2, 2, v);
    REQUIRE(first_line(csv) == "0,0,0");
    std::filesystem::remove(csv);

    auto pgm = temp_file("torus_test.pgm");
    write_pgm(pgm.string(), 2, v);
    std::ifstream in(pgm, std::ios::binary);
    std::string magic;
    in >> magic;
    REQUIRE(magic == "P5");
    int w, h, depth;
    in >> w >> h >> depth;
    REQUIRE(w == 2);
    REQUIRE(depth == 255);
    in.get();
    unsigned char px[4];
    in.read(reinterpret_cast<char*>(px), 4);
    REQUIRE(static_cast<int>(px[0]) == 0);    // min maps to 0
    REQUIRE(static_cast<int>(px[2]) == 255);  // max maps to 255
    std::filesystem::remove(pgm);

    auto ppm = temp_file("torus_test.ppm");
    write_ppm(ppm.string(), 2, v);
    std::ifstream pin(ppm, std::ios::binary);
    pin >> magic;
    REQUIRE(magic == "P6");
    std::filesystem::remove(ppm);
}

TEST_CASE("reruns produce byte-identical csv output") {
    Measure m = lattice_atoms(15, 7);
    MomentTable t = moments(m, 6);
    auto p1 = temp_file("torus_rerun_a.csv"), p2 = temp_file("torus_rerun_b.csv");
    write_moment_csv(p1.string(), t, provenance_line({"torus"}));
    MomentTable t2 = moments(lattice_atoms(15, 7), 6);
    write_moment_csv(p2.string(), t2, provenance_line({"torus"}));
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    REQUIRE(sa == sb);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}
