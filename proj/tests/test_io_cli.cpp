#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccd/cli.hpp"
#include "ccd/io.hpp"

using namespace ccd;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ccd_io_test_" + std::to_string(
                    std::chrono::steady_clock::now().time_since_epoch().count() % 100000) +
                "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("grid csv round trip") {
    TempDir dir;
    const std::string path = dir.file("grid.csv");
    std::ostringstream csv;
    csv << "x,u\n";
    for (int i = 0; i < 8; ++i) csv << format_sig(0.5 + 0.25 * i, 15) << ',' <<
        format_sig(std::sin(0.5 + 0.25 * i), 15) << '\n';
    write_file(path, csv.str());

    const GridFunction g = read_grid_csv(path);
    CHECK(g.size() == 8);
    CHECK(g.x0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.values[3] == doctest::Approx(std::sin(1.25)).epsilon(1e-14));
}

TEST_CASE("grid csv rejects malformed input") {
    TempDir dir;
    const std::string bad_header = dir.file("h.csv");
    write_file(bad_header, "a,b\n0,0\n");
    CHECK_THROWS_AS(read_grid_csv(bad_header), IoError);

    const std::string nonuniform = dir.file("n.csv");
    write_file(nonuniform, "x,u\n0,0\n1,0\n2,0\n3.5,0\n4,0\n5,0\n");
    CHECK_THROWS_AS(read_grid_csv(nonuniform), IoError);

    const std::string decreasing = dir.file("d.csv");
    write_file(decreasing, "x,u\n0,0\n-1,0\n-2,0\n-3,0\n-4,0\n");
    CHECK_THROWS_AS(read_grid_csv(decreasing), IoError);

    CHECK_THROWS_AS(read_grid_csv(dir.file("missing.csv")), IoError);
}

TEST_CASE("weights json writes 17 significant digits and round trips exactly") {
    TempDir dir;
    WeightsFile wf;
    wf.target = "ccd8";
    wf.system = "spectral";
    wf.residual_norm = 3.5527136788005009e-15;
    wf.weights = PrefactoredWeights::from_array(
        {0.69487342430711074, -0.13138229734746676, -0.05555555555557281,
         -1.3531332940641703, 1.4086888496197429, 0.70228146579200301,
         -0.041975669658835084, 0.53703703703715377, -3.4580753458964577,
         2.9210383088593042});

    const std::string path = dir.file("w.json");
    write_weights_json(path, wf);
    const WeightsFile back = read_weights_json(path);
    CHECK(back.target == "ccd8");
    CHECK(back.system == "spectral");
    CHECK(back.residual_norm == wf.residual_norm);
    const auto a = wf.weights.to_array();
    const auto b = back.weights.to_array();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    // serialization is byte-deterministic
    CHECK(weights_json(wf) == weights_json(wf));
    CHECK(weights_json(wf).find("\"schema\": \"prefactored-weights/1\"") != std::string::npos);
}

TEST_CASE("weights json rejects malformed files") {
    TempDir dir;
    const std::string path = dir.file("bad.json");
    write_file(path, "{\"schema\": \"prefactored-weights/1\"}");
    CHECK_THROWS_AS(read_weights_json(path), IoError);
    write_file(path, "not json");
    CHECK_THROWS_AS(read_weights_json(path), IoError);
}

TEST_CASE("cli: check-stencils audits pass") {
    std::string out;
    CHECK(run_cli({"check-stencils"}, &out) == 0);
    CHECK(out.find("[pass]") != std::string::npos);
    CHECK(out.find("[FAIL]") == std::string::npos);
    CHECK(out.find("1/54") != std::string::npos);
}

TEST_CASE("cli: wavenumber emits the printed sixth-order value at pi/2") {
    std::string out;
    CHECK(run_cli({"wavenumber", "--scheme", "ccd6", "--source", "printed", "--samples", "4"},
                  &out) == 0);
    CHECK(out.find("w,re_wp,im_wp,re_wpp2,im_wpp2,exact_wp,exact_wpp2") != std::string::npos);
    CHECK(out.find(format_sig(36.0 / 23.0, 15)) != std::string::npos);
}

TEST_CASE("cli: unknown flags and bad values exit 2") {
    std::string err;
    CHECK(run_cli({"wavenumber", "--nonsense", "1"}, nullptr, &err) == 2);
    CHECK(run_cli({"wavenumber", "--scheme", "ccd9"}, nullptr, &err) == 2);
    CHECK(run_cli({}, nullptr, &err) == 2);
}

TEST_CASE("cli: differentiate names a missing weights file and exits 2") {
    std::string err;
    const int code = run_cli(
        {"differentiate", "--weights", "missing.json", "--input", "also_missing.csv"}, nullptr,
        &err);
    CHECK(code == 2);
    CHECK(err.find("missing.json") != std::string::npos);
}

TEST_CASE("cli: solve-weights then differentiate round trip, byte-identical reruns") {
    TempDir dir;
    const std::string wpath = dir.file("w.json");

    std::string out1, out2;
    const std::vector<std::string> solve_args = {
        "solve-weights", "--target", "ccd6", "--system", "spectral",
        "--starts", "8", "--seed", "42", "--tol", "1e-12", "--out", wpath};
    REQUIRE(run_cli(solve_args, &out1) == 0);
    const std::string w_first = read_file(wpath);
    const std::string wb_first = read_file(dir.file("w.backward.json"));
    CHECK(w_first.find("\"direction\": \"forward\"") != std::string::npos);
    CHECK(wb_first.find("\"direction\": \"backward\"") != std::string::npos);

    REQUIRE(run_cli(solve_args, &out2) == 0);
    CHECK(read_file(wpath) == w_first);
    CHECK(read_file(dir.file("w.backward.json")) == wb_first);
    CHECK(out1 == out2);

    // differentiate a smooth grid with the solved weights
    const std::string gpath = dir.file("grid.csv");
    std::ostringstream csv;
    csv << "x,u\n";
    const std::size_t n = 33;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 2.0 * 3.14159265358979323846 * static_cast<double>(i) /
                         static_cast<double>(n - 1);
        csv << format_sig(x, 15) << ',' << format_sig(std::sin(x), 15) << '\n';
    }
    write_file(gpath, csv.str());

    const std::string dpath = dir.file("deriv.csv");
    std::string dout;
    REQUIRE(run_cli({"differentiate", "--weights", wpath, "--input", gpath, "--out", dpath},
                    &dout) == 0);
    const std::string table = read_file(dpath);
    CHECK(table.find("x,u,du,d2u") != std::string::npos);

    // interior rows approximate cos x (biased seeds leave a boundary layer)
    std::istringstream lines(table);
    std::string line;
    std::getline(lines, line);
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1),
                          c3 = line.find(',', c2 + 1);
        const double x = std::stod(line.substr(0, c1));
        const double du = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        if (row > 12 && row < n - 13) CHECK(std::abs(du - std::cos(x)) < 1e-4);
        ++row;
    }
    CHECK(row == n);
}

TEST_CASE("cli: solve-weights on the printed system writes a best-iterate report") {
    TempDir dir;
    const std::string wpath = dir.file("printed.json");
    std::string out;
    const int code = run_cli({"solve-weights", "--target", "ccd8", "--system", "printed",
                              "--starts", "8", "--seed", "42", "--out", wpath},
                             &out);
    CHECK(code == 0);
    CHECK(out.find("no real root found") != std::string::npos);
    const WeightsFile wf = read_weights_json(wpath);
    CHECK(wf.system == "printed");
    CHECK(wf.residual_norm > 0.1);  // best-achieved norm of the infeasible system
    CHECK(wf.residual_norm < 1.0);
}

TEST_CASE("cli: wavenumber from a weights file and exact-seed differentiate") {
    TempDir dir;
    const std::string wpath = dir.file("w6.json");
    REQUIRE(run_cli({"solve-weights", "--target", "ccd6", "--starts", "8", "--seed", "42",
                     "--out", wpath}) == 0);

    std::string curve;
    REQUIRE(run_cli({"wavenumber", "--scheme", "ccd6", "--source", "prefactored", "--weights",
                     wpath, "--samples", "8"},
                    &curve) == 0);
    // biased operators have nonzero imaginary parts
    std::istringstream lines(curve);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1),
                      c3 = line.find(',', c2 + 1);
    CHECK(std::abs(std::stod(line.substr(c2 + 1, c3 - c2 - 1))) > 1e-6);

    const std::string gpath = dir.file("lin.csv");
    std::ostringstream csv;
    csv << "x,u\n";
    for (int i = 0; i < 12; ++i)
        csv << format_sig(0.1 * i, 15) << ',' << format_sig(2.0 + 3.0 * 0.1 * i, 15) << '\n';
    write_file(gpath, csv.str());

    std::string table;
    REQUIRE(run_cli({"differentiate", "--weights", wpath, "--input", gpath, "--seed-mode",
                     "exact", "--seed-left", "3.0,0.0", "--seed-right", "3.0,0.0"},
                    &table) == 0);
    // du of a linear function is reproduced everywhere (operator values and
    // true values coincide on linears)
    std::istringstream rows(table);
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        const std::size_t d1 = line.find(','), d2 = line.find(',', d1 + 1),
                          d3 = line.find(',', d2 + 1);
        CHECK(std::abs(std::stod(line.substr(d2 + 1, d3 - d2 - 1)) - 3.0) < 1e-10);
    }

    // exact mode without seed values is a usage error
    std::string err;
    CHECK(run_cli({"differentiate", "--weights", wpath, "--input", gpath, "--seed-mode",
                   "exact"},
                  nullptr, &err) == 2);
}

TEST_CASE("cli: convergence writes csv rows and a summary") {
    TempDir dir;
    const std::string cpath = dir.file("conv.csv");
    const std::string jpath = dir.file("conv.json");
    REQUIRE(run_cli({"convergence", "--method", "combined", "--scheme", "ccd6", "--fn", "sin",
                     "--ns", "16,32,64", "--out-csv", cpath, "--out-json", jpath}) == 0);
    const std::string csv = read_file(cpath);
    CHECK(csv.find("n,h,err_first,err_second") != std::string::npos);
    CHECK(csv.find("\n16,") != std::string::npos);
    const std::string js = read_file(jpath);
    CHECK(js.find("\"pass_first\": true") != std::string::npos);
    CHECK(js.find("\"slope_first\":") != std::string::npos);
}
