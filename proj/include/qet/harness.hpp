#pragma once
// Experiment harness: named experiments over parameter grids with seeded
// reproducibility, CSV/JSON emission, scaling fits, module verification
// suites and data-table calibration.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace qet {

struct ExperimentConfig {
    std::string experiment;
    uint64_t seed = 1;
    std::string output;          // output file path ("" = caller decides)
    std::string format = "csv";  // csv | json
    // parameter name -> list of values (strings, parsed per experiment);
    // the grid is the cartesian product over parameters.
    std::map<std::string, std::vector<std::string>> grid;
};

// key = value lines; `#` comments; a `[grid]` section holds the sweep
// parameters, whose values may be comma-separated lists.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const;  // -1 when absent
    std::string to_csv() const;
    std::string to_json() const;
};

std::vector<std::string> list_experiments();
ResultTable run_experiment(const ExperimentConfig& cfg);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares of log(y_column) against log(x_param); needs >= 3 distinct
// positive x values.
FitResult fit_scaling(const ResultTable& t, const std::string& x_param,
                      const std::string& y_column);

std::vector<std::string> module_names();
// Runs the module's invariant suite; appends one line per check to `report`.
bool verify_module(const std::string& name, std::string* report = nullptr);

// Writes data_dir/lambda_cache.txt and data_dir/opnorm_constants.txt.
void calibrate_data(const std::string& data_dir, uint64_t seed,
                    std::ostream* log = nullptr);

} // namespace qet
