#include "kbopt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "kbopt/instance_io.hpp"

namespace kbopt {

void ExperimentConfig::validate() const {
    if (strategies.empty()) throw InvalidInputError("sweep: no strategies");
    if (budgets.empty()) throw InvalidInputError("sweep: no budgets");
    for (std::size_t i = 1; i < budgets.size(); ++i)
        if (budgets[i] <= budgets[i - 1])
            throw InvalidInputError("sweep: budgets must be strictly increasing");
    if (replications < 1) throw InvalidInputError("sweep: replications must be >= 1");
    if (sigma < 0.0) throw InvalidInputError("sweep: sigma must be >= 0");
}

std::uint64_t cell_seed(std::uint64_t base, const std::string& strategy, long long budget,
                        int replicate) {
    return mix_seed(base, hash_string(strategy), static_cast<std::uint64_t>(budget),
                    static_cast<std::uint64_t>(replicate));
}

SlopeFit fit_loglog_medians(const std::vector<CellResult>& cells, const std::string& strategy) {
    std::map<long long, std::vector<double>> by_budget;
    SlopeFit fit;
    for (const CellResult& c : cells) {
        if (c.strategy != strategy) continue;
        if (c.final_regret <= 0.0) {
            ++fit.zero_regret_runs;
            continue;
        }
        by_budget[c.budget].push_back(c.final_regret);
    }
    std::vector<double> xs, ys;
    for (auto& [budget, values] : by_budget) {
        std::sort(values.begin(), values.end());
        const std::size_t m = values.size();
        const double median =
            (m % 2 == 1) ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
        xs.push_back(std::log(static_cast<double>(budget)));
        ys.push_back(std::log(median));
    }
    fit.n_points = static_cast<int>(xs.size());
    if (fit.n_points < 3) return fit;  // slope fit needs >= 3 budgets

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    if (xs.size() > 2)
        fit.stderr_slope = std::sqrt(rss / (n - 2.0) / (sxx - sx * sx / n));
    fit.valid = true;
    return fit;
}

SweepResult run_sweep(const ExperimentConfig& config, const RkhsFunction& instance) {
    config.validate();
    namespace fs = std::filesystem;
    if (config.write_traces && !config.output_dir.empty())
        fs::create_directories(config.output_dir);

    SweepResult result;
    for (const StrategyConfig& strat : config.strategies) {
        for (long long budget : config.budgets) {
            for (int rep = 0; rep < config.replications; ++rep) {
                const std::uint64_t seed = cell_seed(config.base_seed, strat.name, budget, rep);
                NoisyOracle oracle(instance, config.sigma, seed);
                RegretTrace trace;
                if (strat.name == "bead") {
                    BeadConfig bc;
                    bc.n = budget;
                    bc.tau = strat.tau;
                    bc.M = instance.M;
                    bc.sigma = config.sigma;
                    bc.beta_mode = strat.beta_mode;
                    bc.geometry = geometry_constants(instance.kernel.dim);
                    bc.rng_seed = seed;
                    trace = run_bead(bc, oracle);
                } else if (strat.name == "gp-ucb") {
                    GpUcbConfig gc;
                    gc.grid_per_axis = strat.grid_per_axis;
                    gc.tau = strat.tau;
                    gc.norm_bound = instance.M;
                    gc.delta = strat.gp_ucb_delta;
                    gc.rng_seed = seed;
                    trace = run_gp_ucb(gc, oracle, budget);
                } else if (strat.name == "random") {
                    trace = run_random(oracle, budget, seed);
                } else {
                    throw InvalidInputError("sweep: unknown strategy '" + strat.name + "'");
                }

                CellResult cell;
                cell.strategy = strat.name;
                cell.budget = budget;
                cell.replicate = rep;
                cell.seed = seed;
                cell.final_regret = trace.final_regret();
                if (config.write_traces && !config.output_dir.empty()) {
                    cell.trace_path = (fs::path(config.output_dir) /
                                       ("trace_" + strat.name + "_n" + std::to_string(budget) +
                                        "_r" + std::to_string(rep) + ".txt"))
                                          .string();
                    const std::string header = "strategy=" + strat.name +
                                               " budget=" + std::to_string(budget) +
                                               " replicate=" + std::to_string(rep) +
                                               " seed=" + std::to_string(seed) +
                                               " sigma=" + fmt_g17(config.sigma);
                    write_text_file(cell.trace_path, serialize_trace(trace, header));
                }
                result.cells.push_back(cell);
            }
        }
        result.fits[strat.name] = fit_loglog_medians(result.cells, strat.name);
    }
    return result;
}

std::string serialize_summary(const SweepResult& result, const std::string& config_line) {
    std::string s;
    s += "# kbopt-summary v1\n";
    s += "# " + config_line + "\n";
    s += "# columns: cell strategy budget replicate seed final_regret trace_path\n";
    for (const CellResult& c : result.cells)
        s += "cell " + c.strategy + " " + std::to_string(c.budget) + " " +
             std::to_string(c.replicate) + " " + std::to_string(c.seed) + " " +
             fmt_g17(c.final_regret) + " " + (c.trace_path.empty() ? "-" : c.trace_path) +
             "\n";
    for (const auto& [name, fit] : result.fits)
        s += "fit " + name + " " + (fit.valid ? "1" : "0") + " " + fmt_g17(fit.slope) + " " +
             fmt_g17(fit.intercept) + " " + fmt_g17(fit.stderr_slope) + " " +
             std::to_string(fit.n_points) + " " + std::to_string(fit.zero_regret_runs) + "\n";
    return s;
}

SweepResult parse_summary(const std::string& text) {
    SweepResult result;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "cell") {
            CellResult c;
            ss >> c.strategy >> c.budget >> c.replicate >> c.seed >> c.final_regret >>
                c.trace_path;
            if (c.trace_path == "-") c.trace_path.clear();
            if (!ss) throw InvalidInputError("summary parse error: " + line);
            result.cells.push_back(c);
        } else if (tag == "fit") {
            std::string name;
            int valid = 0;
            SlopeFit fit;
            ss >> name >> valid >> fit.slope >> fit.intercept >> fit.stderr_slope >>
                fit.n_points >> fit.zero_regret_runs;
            if (!ss) throw InvalidInputError("summary parse error: " + line);
            fit.valid = valid != 0;
            result.fits[name] = fit;
        } else {
            throw InvalidInputError("summary parse error: unknown tag " + tag);
        }
    }
    return result;
}

}  // namespace kbopt
