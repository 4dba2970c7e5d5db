#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gpe/io.hpp"
#include "test_support.hpp"

using namespace gpe;
using gpe::test::random_function;

TEST_SUITE_BEGIN("io");

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("gpe_io_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gpgf round trip is bit exact") {
    std::mt19937_64 rng(61);
    TempDir tmp;
    for (int dim = 1; dim <= 3; ++dim) {
        const GridSpec s = GridSpec::make_uniform(dim, dim == 3 ? 4 : 8, -1.5, 2.25);
        const GridFunction f = random_function(s, rng);
        const std::string path = tmp.file("state.gpgf");
        save_gpgf(path, f);
        const GridFunction g = load_gpgf(path);
        REQUIRE(g.spec() == f.spec());
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(f[i].real() == g[i].real());
            CHECK(f[i].imag() == g[i].imag());
        }
    }
}

TEST_CASE("gpgf rejects malformed files") {
    TempDir tmp;
    const std::string bad_magic = tmp.file("bad_magic.gpgf");
    {
        std::ofstream out(bad_magic, std::ios::binary);
        out << "NOPE" << std::string(64, '\0');
    }
    CHECK_THROWS_AS(load_gpgf(bad_magic), ConfigError);

    const GridSpec s = GridSpec::make_uniform(1, 8, 0.0, 1.0);
    const std::string truncated = tmp.file("truncated.gpgf");
    save_gpgf(truncated, GridFunction(s));
    std::filesystem::resize_file(truncated, 24);
    CHECK_THROWS_AS(load_gpgf(truncated), ConfigError);

    CHECK_THROWS_AS(load_gpgf(tmp.file("missing.gpgf")), ConfigError);
}

TEST_CASE("state csv layout") {
    TempDir tmp;
    const GridSpec s = GridSpec::make_uniform(2, 4, 0.0, 1.0);
    GridFunction f(s);
    f[0] = {1.5, -2.5};
    const std::string path = tmp.file("state.csv");
    save_state_csv(path, f);

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "x,y,re,im");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,0,1.5,-2.5");
    int rows = 1;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 16);
}

TEST_CASE("history csv layout") {
    TempDir tmp;
    StepDiagnostics d;
    d.step = 3;
    d.e_h_after = 1.25;
    d.e_std_after = 1.5;
    d.lambda = 2.0;
    d.stabilizer = 452.5;
    d.norm_drift = 1e-4;
    d.ortho_defect = 1e-15;
    d.increment = 0.125;
    const std::string path = tmp.file("history.csv");
    save_history_csv(path, {d});

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "step,E_h,E_std,lambda,A,norm_drift,ortho_defect,increment");
    REQUIRE(std::getline(in, line));
    CHECK(line == "3,1.25,1.5,2,452.5,1e-04,1e-15,0.125");
}

TEST_CASE("summary json holds the stable fields only") {
    RunSummary s;
    s.converged = true;
    s.steps = 42;
    s.energy_modified = -1.0;
    s.energy_standard = -0.99;
    s.lambda = 3.5;
    s.gpe_residual = 1e-9;
    s.final_increment = 5e-9;
    s.wall_seconds = 123.0;  // must not leak into the file
    const nlohmann::json j = summary_to_json(s);
    CHECK(j.at("converged") == true);
    CHECK(j.at("steps") == 42);
    CHECK(j.at("lambda") == 3.5);
    CHECK_FALSE(j.contains("wall_seconds"));

    TempDir tmp;
    save_json(tmp.file("summary.json"), j);
    std::ifstream in(tmp.file("summary.json"));
    const nlohmann::json back = nlohmann::json::parse(in);
    CHECK(back == j);
}

TEST_CASE("study csv rows carry errors and orders where defined") {
    StudyReport r;
    r.mode = StudyMode::Temporal;
    r.level_values = {0.25, 0.125, 0.0625};
    r.level_steps = {10, 20, 40};
    r.err_l2 = {1e-2, 5e-3};
    r.err_linf = {2e-2, 1e-2};
    r.order_l2 = {1.0};
    r.order_linf = {1.0};
    r.mean_order_l2 = 1.0;
    r.mean_order_linf = 1.0;
    r.window_lo = 0.8;
    r.window_hi = 1.2;
    r.pass = true;

    TempDir tmp;
    save_study_csv(tmp.file("study.csv"), r);
    std::ifstream in(tmp.file("study.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "level,value,err_l2,err_linf,order_l2,order_linf");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,0.25,0.01,0.02,1,1");
    REQUIRE(std::getline(in, line));
    CHECK(line == "1,0.125,0.005,0.01,,");
    REQUIRE(std::getline(in, line));
    CHECK(line == "2,0.0625,,,,");

    const nlohmann::json j = study_to_json(r);
    CHECK(j.at("mode") == "temporal");
    CHECK(j.at("pass") == true);
    CHECK(j.at("err_l2").size() == 2);
}

TEST_SUITE_END();
