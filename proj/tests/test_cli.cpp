// End-to-end checks of the command-line tool; ctest passes the binary path
// as the last argument.

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

int run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string cfg_path(const std::string& name, const std::string& json) {
    fs::path p = g_work / name;
    put(p, json);
    return p.string();
}

} // namespace

TEST_CASE("sample is deterministic per (config, seed)") {
    std::string cfg = cfg_path("sample.json", R"({
        "seed": 11,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "axis", "d": 2},
        "lambda": 3.0,
        "sampler": "stit"
    })");
    fs::path out1 = g_work / "s1", out2 = g_work / "s2";
    REQUIRE(run_cli("sample --config " + cfg + " --svg --out " + out1.string()) == 0);
    REQUIRE(run_cli("sample --config " + cfg + " --svg --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "partition.json") == slurp(out2 / "partition.json"));
    CHECK(slurp(out1 / "partition.svg") == slurp(out2 / "partition.svg"));
    CHECK(!slurp(out1 / "partition.svg").empty());

    // A different seed gives a different partition.
    fs::path out3 = g_work / "s3";
    REQUIRE(run_cli("sample --config " + cfg + " --seed 12 --out " + out3.string()) == 0);
    CHECK(slurp(out1 / "partition.json") != slurp(out3 / "partition.json"));
}

TEST_CASE("axis-aligned partitions render axis-parallel segments") {
    std::string cfg = cfg_path("mondrian.json", R"({
        "seed": 5,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "axis", "d": 2},
        "lambda": 6.0,
        "sampler": "stit"
    })");
    fs::path out = g_work / "svg_axis";
    REQUIRE(run_cli("sample --config " + cfg + " --svg --out " + out.string()) == 0);
    std::string svg = slurp(out / "partition.svg");
    // Every polygon edge is horizontal or vertical.
    std::size_t pos = 0;
    int polygons = 0;
    while ((pos = svg.find("points=\"", pos)) != std::string::npos) {
        pos += 8;
        std::size_t end = svg.find('"', pos);
        std::istringstream pts(svg.substr(pos, end - pos));
        std::vector<std::pair<double, double>> v;
        std::string pair;
        while (pts >> pair) {
            auto comma = pair.find(',');
            v.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto [x1, y1] = v[i];
            auto [x2, y2] = v[(i + 1) % v.size()];
            bool axis_parallel = std::abs(x1 - x2) < 1e-6 || std::abs(y1 - y2) < 1e-6;
            CHECK(axis_parallel);
        }
        ++polygons;
    }
    CHECK(polygons >= 2);
}

TEST_CASE("fit then predict with a near-zero lifetime returns the global mean") {
    std::string cfg = cfg_path("fit.json", R"({
        "seed": 3,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "axis", "d": 2},
        "lambda": 1e-9,
        "sampler": "stit",
        "m_trees": 1
    })");
    fs::path data = g_work / "train.csv";
    put(data, "x1,x2,y\n0.1,0.1,1.0\n0.9,0.9,3.0\n");
    fs::path out = g_work / "fitout";
    REQUIRE(run_cli("fit --config " + cfg + " --data " + data.string() + " --out " + out.string()) == 0);

    fs::path query = g_work / "query.csv";
    put(query, "x1,x2\n0.5,0.5\n0.2,0.8\n");
    REQUIRE(run_cli("predict --model " + (out / "model.json").string() + " --data " +
                    query.string() + " --out " + out.string()) == 0);
    std::string pred = slurp(out / "predictions.csv");
    CHECK(pred.find("y_hat") != std::string::npos);
    CHECK(pred.find("\n0.5,0.5,2\n") != std::string::npos);

    // Bit-identical on a rerun.
    fs::path out2 = g_work / "fitout2";
    REQUIRE(run_cli("predict --model " + (out / "model.json").string() + " --data " +
                    query.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out / "predictions.csv") == slurp(out2 / "predictions.csv"));
}

TEST_CASE("schema and config failures exit 2") {
    std::string cfg = cfg_path("bad_sampler.json", R"({"sampler": "nope", "lambda": 1.0})");
    CHECK(run_cli("sample --config " + cfg) == 2);

    std::string cfg2 = cfg_path("ok.json", R"({
        "seed": 3,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "axis", "d": 2},
        "lambda": 1.0,
        "sampler": "stit"
    })");
    fs::path bad_csv = g_work / "bad.csv";
    put(bad_csv, "a,b,c\n1,2,3\n");
    CHECK(run_cli("fit --config " + cfg2 + " --data " + bad_csv.string()) == 2);

    // Row outside the window names its index.
    fs::path out_of_window = g_work / "oow.csv";
    put(out_of_window, "x1,x2,y\n0.5,0.5,1\n5,0.5,2\n");
    CHECK(run_cli("fit --config " + cfg2 + " --data " + out_of_window.string()) == 2);
}

TEST_CASE("resource caps exit 3") {
    std::string cfg = cfg_path("cap.json", R"({
        "seed": 3,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "axis", "d": 2},
        "lambda": 8.0,
        "sampler": "stit",
        "max_cells": 3
    })");
    CHECK(run_cli("sample --config " + cfg) == 3);
}

TEST_CASE("format version flag") {
    CHECK(run_cli("--format-version") == 0);
}

TEST_CASE("isotropic sample files are byte-stable per seed") {
    std::string cfg = cfg_path("iso.json", R"({
        "seed": 9,
        "window": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
        "phi": {"kind": "isotropic", "d": 2},
        "lambda": 4.0,
        "sampler": "pht"
    })");
    fs::path out1 = g_work / "i1", out2 = g_work / "i2";
    REQUIRE(run_cli("sample --config " + cfg + " --svg --out " + out1.string()) == 0);
    REQUIRE(run_cli("sample --config " + cfg + " --svg --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "partition.svg") == slurp(out2 / "partition.svg"));
}

TEST_CASE("verify reports are byte-identical across reruns and thread counts") {
    fs::path out1 = g_work / "v1", out2 = g_work / "v2";
    REQUIRE(run_cli("verify markov --threads 1 --out " + out1.string()) == 0);
    REQUIRE(run_cli("verify markov --threads 4 --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "verify_markov.json") == slurp(out2 / "verify_markov.json"));
}

int main(int argc, char** argv) {
    if (const char* env = std::getenv("TESSFOREST_BIN")) g_cli = env;
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        --argc;
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-tessforest-binary>\n");
        return 1;
    }
    g_work = fs::temp_directory_path() / "tessforest_cli_test";
    fs::remove_all(g_work);
    fs::create_directories(g_work);
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    int rc = ctx.run();
    fs::remove_all(g_work);
    return rc;
}
