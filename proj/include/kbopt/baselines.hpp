#ifndef KBOPT_BASELINES_HPP
#define KBOPT_BASELINES_HPP

#include "kbopt/instance.hpp"
#include "kbopt/posterior.hpp"
#include "kbopt/trace.hpp"

namespace kbopt {

enum class UcbBetaSchedule { SqrtLog, Constant };

/// GP-UCB on a fixed grid: full-history posterior, query the UCB argmax.
struct GpUcbConfig {
    int grid_per_axis = 16;
    double tau = 1.0;
    UcbBetaSchedule beta_schedule = UcbBetaSchedule::SqrtLog;
    double beta_constant = 0.0;
    double norm_bound = 1.0;  // B in beta_t = B + sigma sqrt(2 (I_t + 1 + log(1/delta)))
    double delta = 0.1;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Evidence is capped at 5000 points (desk scale); the information-gain proxy
// I_t accumulates 0.5 log(1 + tau sigma_s(x_s)^2 / sigma_noise^2) online.
RegretTrace run_gp_ucb(const GpUcbConfig& config, NoisyOracle& oracle, long long n);

// Uniform-random search under the same trace contract.
RegretTrace run_random(NoisyOracle& oracle, long long n, std::uint64_t seed);

// Lexicographic grid over [0,1]^d, grid_per_axis points per axis.
std::vector<Point> baseline_grid(int dim, int grid_per_axis);

}  // namespace kbopt

#endif
