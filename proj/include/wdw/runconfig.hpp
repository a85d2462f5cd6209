#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wdw/model.hpp"

namespace wdw::cli {

// Stable exit-code contract of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIntegration = 2;
inline constexpr int kExitLambdaDomain = 3;
inline constexpr int kExitVerification = 4;

enum class OutputFormat { Csv, Json };

struct RunConfig {
    ModelParams model{-1.0, 1, 0.0, 0.0, 1.0};
    std::optional<double> msq_target;  // sets matter so that m^2 hits this value
    double a_min = 0.5;
    double a_max = 2.5;
    std::size_t n_points = 1200;
    std::vector<double> lambdas;
    bool closed_form = false;
    double c1 = 1.0;
    double c2 = 0.0;
    std::optional<double> init_value;
    std::optional<double> init_deriv;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    bool allow_negative_lambda = false;
    double inject_noise = 0.0;  // verification-failure test hook

    void validate() const;

    // Model parameters with the --msq convenience applied.
    ModelParams effective_params() const;

    // key=value provenance pairs written into output headers.
    std::vector<std::pair<std::string, std::string>> provenance(const std::string& command) const;
};

// The one-command reproduction of the isospectral-family figure:
// gamma=-1, kappa=1, q=1, m^2=4, c1=c2=1, lambda in {1,11,61,161,411},
// A in [0.6, 3].
RunConfig fig1_config();

// Columnar output with provenance comments.
struct Table {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // column-major
};

// CSV: '# key=value' comment lines, a header row, then rows with 17
// significant digits (doubles round-trip bit-exactly).
void write_csv(const std::string& path, const Table& t);
Table read_csv(const std::string& path);
void write_json_table(const std::string& path, const Table& t);

// Seed solution for the configured problem (closed form or integration).
SampledFunction make_seed(const RunConfig& cfg, const Grid& grid);

// Command runners; return the exit code and print diagnostics to diag.
int run_solve(const RunConfig& cfg, std::ostream& diag);
int run_family(const RunConfig& cfg, std::ostream& diag);
int run_verify(const RunConfig& cfg, std::ostream& diag);

}  // namespace wdw::cli
