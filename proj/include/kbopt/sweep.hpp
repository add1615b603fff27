#ifndef KBOPT_SWEEP_HPP
#define KBOPT_SWEEP_HPP

#include <map>

#include "kbopt/baselines.hpp"
#include "kbopt/bead.hpp"

namespace kbopt {

struct StrategyConfig {
    std::string name;  // bead | gp-ucb | random
    double tau = 1.0;
    BetaMode beta_mode = BetaMode::Concentration;
    int grid_per_axis = 16;  // gp-ucb
    double gp_ucb_delta = 0.1;
};

struct ExperimentConfig {
    std::vector<StrategyConfig> strategies;
    std::vector<long long> budgets;  // strictly increasing
    int replications = 1;
    std::uint64_t base_seed = 0;
    double sigma = 0.1;
    bool write_traces = true;
    std::string output_dir;

    void validate() const;
};

struct CellResult {
    std::string strategy;
    long long budget = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    double final_regret = 0.0;
    std::string trace_path;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n_points = 0;              // budgets entering the fit
    long long zero_regret_runs = 0;  // excluded from the log fit
    bool valid = false;
};

struct SweepResult {
    std::vector<CellResult> cells;
    std::map<std::string, SlopeFit> fits;
};

// Deterministic per-cell seed: hash(base_seed, strategy, budget, replicate).
std::uint64_t cell_seed(std::uint64_t base, const std::string& strategy, long long budget,
                        int replicate);

// OLS on (log n, log median R_n); medians are taken across seeds per budget
// for heavy-tail robustness at small n.
SlopeFit fit_loglog_medians(const std::vector<CellResult>& cells, const std::string& strategy);

SweepResult run_sweep(const ExperimentConfig& config, const RkhsFunction& instance);

std::string serialize_summary(const SweepResult& result, const std::string& config_line);
SweepResult parse_summary(const std::string& text);

}  // namespace kbopt

#endif
