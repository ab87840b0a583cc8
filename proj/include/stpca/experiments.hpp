#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stpca/quantum.hpp"
#include "stpca/spectral.hpp"
#include "stpca/tensor.hpp"

namespace stpca {

enum class ExperimentKind {
    detect,
    recover,
    null_spectrum,
    odd_scaling,
    wick_verify,
    path_equivalence,
    speedup_table,
    quantum_overlap,
};

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

/// Grid description for one run. Couplings come either as direct lambda_bar
/// values or as target e_signal/e_max ratios (the threshold formulas are
/// inverted per cell); leave both empty only where the experiment ignores
/// the coupling (the null spectrum uses lambda_bar = 0).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::detect;
    int p = 4;
    std::vector<int> dims;
    std::vector<int> n_bos_list;
    std::vector<double> lambdas;
    std::vector<double> ratios;
    Ensemble ensemble;
    std::size_t trials = 1;
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";
    std::map<std::string, double> tol_overrides;
    WindowShape window = WindowShape::erf;
    double epsilon_tilde = 0.05;

    void validate() const; // throws contract_error on bad grids
    double override_or(const std::string& key, double fallback) const;
};

/// One row per (cell, trial). Unused fields stay NaN / empty and serialize
/// as empty CSV cells. Wall time is kept in memory and reported in the
/// summary only, so reruns produce byte-identical CSV files.
struct ResultRow {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    std::string experiment;
    std::size_t cell = 0;
    std::size_t trial = 0;
    int p = 0;
    int dim = 0;
    int n_bos = 0;
    double lambda_bar = nan;
    double ratio = nan;
    std::string ensemble;
    bool symmetrized = false;
    std::string window;
    double epsilon_tilde = nan;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::string truth;
    std::string decision;

    double lambda1 = nan;
    double e_signal = nan, e_max = nan, e_cut = nan, xi = nan;
    double overlap_ratio = nan, rounded_corr = nan, boosted_corr = nan;
    double squared_overlap = nan, projection_keep = nan;
    double success_mixed = nan, success_chosen = nan;
    double exact_value = nan, mc_mean = nan, mc_stderr = nan;
    double doubled_second_moment = nan, edge_count = nan;
    double cost_classical = nan, cost_amplified = nan, cost_chosen = nan;
    double recursion_calls = nan, frame_peak = nan, rel_dev = nan;

    double wall_ms = 0.0; // excluded from the CSV
};

/// Shortest round-trip decimal formatting used by the CSV writer (%.17g).
std::string format_double(double v);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);

/// Per-cell aggregates as a JSON document: rates with Wilson intervals,
/// means, regression slopes (odd-scaling), and log-cost ratios with the
/// monotone-trend flag (speedup table). Throws on empty input.
std::string emit_summary(const std::vector<ResultRow>& rows,
                         const std::map<std::string, double>& overrides = {});

struct RunOutcome {
    std::vector<ResultRow> rows;
    std::size_t failures = 0;
    std::string csv_path;
    std::string summary_path;
};

/// Runs the full grid: cell-major, trial-minor, per-trial seeds derived from
/// (master seed, cell, trial). Rows are appended to results.csv after each
/// cell (partial progress survives), summary.json is written at the end.
/// Per-trial failures become rows with status "failed" and never abort the
/// grid.
RunOutcome run_experiment(const ExperimentConfig& config);

} // namespace stpca
