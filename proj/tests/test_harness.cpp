#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace qet;

TEST_CASE("config parsing: keys, comments, grid lists") {
    std::string text =
        "# sample config\n"
        "experiment = grid_labels\n"
        "seed = 77\n"
        "format = json\n"
        "output = out.json\n"
        "\n"
        "[grid]\n"
        "n = 2, 3, 4\n"
        "flavor = a\n";
    ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.experiment == "grid_labels");
    CHECK(cfg.seed == 77);
    CHECK(cfg.format == "json");
    CHECK(cfg.output == "out.json");
    REQUIRE(cfg.grid.count("n") == 1);
    CHECK(cfg.grid.at("n") == std::vector<std::string>{"2", "3", "4"});
    CHECK(cfg.grid.at("flavor") == std::vector<std::string>{"a"});
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS(parse_config_text("experiment grid_labels\n"));
    CHECK_THROWS(parse_config_file("no_such_config_file.cfg"));
}

TEST_CASE("experiment registry") {
    auto names = list_experiments();
    CHECK(names.size() >= 10);
    auto has = [&](const std::string& n) {
        return std::any_of(names.begin(), names.end(), [&](const std::string& e) {
            return e.rfind(n, 0) == 0;
        });
    };
    CHECK(has("grid_labels"));
    CHECK(has("pe_concentration"));
    CHECK(has("qram_counts"));
    ExperimentConfig bad;
    bad.experiment = "no_such_experiment";
    CHECK_THROWS(run_experiment(bad));
}

TEST_CASE("grid expansion produces the cartesian product") {
    ExperimentConfig cfg;
    cfg.experiment = "grid_labels";
    cfg.seed = 5;
    cfg.grid["n"] = {"2", "3"};
    ResultTable t = run_experiment(cfg);
    int ncol = t.col("n");
    REQUIRE(ncol >= 0);
    size_t rows_n2 = 0, rows_n3 = 0;
    for (const auto& r : t.rows) {
        if (r[size_t(ncol)] == "2") ++rows_n2;
        if (r[size_t(ncol)] == "3") ++rows_n3;
    }
    CHECK(rows_n2 == 4);   // 2^2 labels
    CHECK(rows_n3 == 8);   // 2^3 labels
    CHECK(t.rows.size() == rows_n2 + rows_n3);
}

TEST_CASE("reruns with the same seed are byte-identical") {
    ExperimentConfig cfg;
    cfg.experiment = "pe_concentration";
    cfg.seed = 13;
    cfg.grid["M"] = {"8", "16"};
    cfg.grid["trials"] = {"2000"};
    ResultTable a = run_experiment(cfg);
    ResultTable b = run_experiment(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json() == b.to_json());
    cfg.seed = 14;
    ResultTable c = run_experiment(cfg);
    CHECK(a.to_csv() != c.to_csv());
}

TEST_CASE("csv and json emission") {
    ResultTable t;
    t.columns = {"x", "y"};
    t.rows = {{"1", "2.5"}, {"2", "10"}};
    CHECK(t.to_csv() == "x,y\n1,2.5\n2,10\n");
    std::string js = t.to_json();
    CHECK(js.find("\"x\"") != std::string::npos);
    CHECK(js.find("\"y\"") != std::string::npos);
    CHECK(js.find("2.5") != std::string::npos);
    CHECK(t.col("y") == 1);
    CHECK(t.col("z") == -1);
}

TEST_CASE("fit_scaling recovers exact power laws") {
    ResultTable t;
    t.columns = {"x", "y", "c"};
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        std::ostringstream xs, ys;
        xs << x;
        ys << 3.0 * x * x;
        t.rows.push_back({xs.str(), ys.str(), "7"});
    }
    FitResult f = fit_scaling(t, "x", "y");
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));
    FitResult fc = fit_scaling(t, "x", "c");
    CHECK(fc.slope == doctest::Approx(0.0).epsilon(1e-9));
    // needs >= 3 distinct x values
    ResultTable small;
    small.columns = {"x", "y"};
    small.rows = {{"1", "1"}, {"2", "4"}};
    CHECK_THROWS(fit_scaling(small, "x", "y"));
}

TEST_CASE("module verification suites") {
    auto mods = module_names();
    CHECK(mods.size() == 12);
    std::string report;
    CHECK(verify_module("rng", &report));
    CHECK(!report.empty());
    CHECK(verify_module("qram"));
    CHECK(!verify_module("bogus_module"));
}
