#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blm/copula.hpp"
#include "blm/estimators.hpp"

namespace blm {

// per-parameter labels used in reports ("alpha1", "beta2", ...)
std::vector<std::string> param_names(Family f);

struct ExperimentConfig {
    Family family = Family::FGMIter1;
    std::vector<double> true_params;
    std::vector<int> sample_sizes{30, 100, 500};
    int replications = 200;
    std::vector<Method> methods{Method::BLM, Method::TauRhoInv, Method::MD, Method::PML};
    double epsilon = 0.0;                   // contamination fraction for single runs
    std::vector<double> epsilon_grid;       // grid for the contamination study
    Family contaminant_family = Family::Product;
    std::vector<double> contaminant_params;  // empty = family default (independence)
    std::uint64_t base_seed = 987654321;
    bool use_openmp = true;  // serial reference path when false
};

struct ReportRow {
    std::string method;
    int n = 0;
    std::string param;
    double epsilon = 0.0;
    double bias = 0.0;
    double rmse = 0.0;
    int fails = 0;
    double seconds = 0.0;

    bool operator==(const ReportRow&) const = default;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    bool has_epsilon_column = false;

    bool operator==(const ExperimentReport&) const = default;
};

// mixture draw: each pair comes from the contaminant with probability eps;
// eps = 0 delegates to the plain sampler (identical stream)
std::vector<std::array<double, 2>> contaminated_sample(const CopulaModel& truth,
                                                       const CopulaModel& contaminant,
                                                       double eps, std::size_t n,
                                                       std::uint64_t seed);

// bias/RMSE over N replications for each (method, n); replication seeds are
// derived from (base_seed, n, i), so reports do not depend on thread count.
// Estimator failures are counted per cell, never thrown.
ExperimentReport run_bias_rmse_experiment(const ExperimentConfig& cfg);

// the robustness protocol: rerun the experiment across epsilon_grid
ExperimentReport run_contamination_study(const ExperimentConfig& cfg);

std::string render_report(const ExperimentReport& report, const std::string& format);
ExperimentReport parse_report_csv(const std::string& text);

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace blm
