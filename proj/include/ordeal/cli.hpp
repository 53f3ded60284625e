#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ordeal/density.hpp"
#include "ordeal/waitlist.hpp"

namespace ordeal::cli {

struct RunOptions {
    std::string out_dir = ".";
    std::size_t grid = 200;
    double tol = 1e-6;
    std::uint64_t seed = 0;
};

struct Scenario {
    std::string distribution = "uniform";
    DensityModel model;
    double mu_a = 0.25;
    double mu_b = 0.25;
    std::vector<double> slopes;
    int n_knots = 4;
    int restarts = 5;
    std::size_t resolution = 64;
    std::vector<std::pair<double, double>> example1_cases{{0.02, 0.3}, {0.05, 0.3}, {0.08, 0.3}};
    double b_out = 0.2;
    double cutoff = 0.5;
    std::vector<double> f_bins{1.0};
    double rho = 0.1;
    double dt = 0.01;
    double horizon = 50.0;
    std::vector<WaitOption> wait_a;  ///< empty: posted clearing ordeals with no wait
    std::vector<WaitOption> wait_b;
    std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};
};

std::vector<std::string> commands();

/// Parses a scenario; relative paths resolve against base_dir. Throws ValidationError naming the field.
Scenario parse_scenario(const std::string& text, const std::string& base_dir, const RunOptions& opts);

/// Runs one command and writes its artifacts into opts.out_dir. Exceptions propagate.
void run(const std::string& command, const Scenario& scenario, const RunOptions& opts, std::ostream& out);

/// Exit status: 0 success, 1 validation or parameter error, 2 non-convergence.
int execute(const std::string& command, const std::string& scenario_path, const RunOptions& opts,
            std::ostream& out, std::ostream& err);

}  // namespace ordeal::cli
