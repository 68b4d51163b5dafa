// qet command-line interface: run experiments from a config file, list the
// experiment registry, verify module invariants, and calibrate data tables.

#include "qet/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"qet: tomography and phase-estimation experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment config file");
    run->add_option("config", config_path, "config file (key = value, [grid] section)")
        ->required()
        ->check(CLI::ExistingFile);

    CLI::App* list =
        app.add_subcommand("list-experiments", "list the experiment registry");

    std::string module;
    CLI::App* verify =
        app.add_subcommand("verify", "run a module's invariant suite");
    verify->add_option("module", module, "module name (or 'all')")->required();

    std::string data_dir = QET_DATA_DIR;
    uint64_t cal_seed = 20260826;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "populate the lambda cache and operator-norm constants");
    calibrate->add_option("--data-dir", data_dir, "output directory");
    calibrate->add_option("--seed", cal_seed, "calibration seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            qet::ExperimentConfig cfg = qet::parse_config_file(config_path);
            qet::ResultTable table = qet::run_experiment(cfg);
            std::string body =
                cfg.format == "json" ? table.to_json() : table.to_csv();
            if (cfg.output.empty()) {
                std::cout << body;
            } else {
                std::ofstream f(cfg.output);
                if (!f) {
                    std::cerr << "cannot open output file " << cfg.output << "\n";
                    return 1;
                }
                f << body;
                std::cout << "wrote " << table.rows.size() << " rows to "
                          << cfg.output << "\n";
            }
        } else if (list->parsed()) {
            for (const std::string& line : qet::list_experiments())
                std::cout << line << "\n";
        } else if (verify->parsed()) {
            std::vector<std::string> todo;
            if (module == "all")
                todo = qet::module_names();
            else
                todo.push_back(module);
            bool all_ok = true;
            for (const std::string& m : todo) {
                std::string report;
                bool ok = qet::verify_module(m, &report);
                std::cout << m << ": " << (ok ? "ok" : "FAIL") << "\n" << report;
                all_ok = all_ok && ok;
            }
            return all_ok ? 0 : 1;
        } else if (calibrate->parsed()) {
            qet::calibrate_data(data_dir, cal_seed, &std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
