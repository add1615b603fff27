#include "kbopt/baselines.hpp"

#include <cmath>

namespace kbopt {

void GpUcbConfig::validate() const {
    if (grid_per_axis < 2) throw InvalidInputError("gp-ucb: grid_per_axis must be >= 2");
    if (!(tau > 0.0)) throw InvalidInputError("gp-ucb: tau must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInputError("gp-ucb: delta in (0,1)");
}

std::vector<Point> baseline_grid(int dim, int grid_per_axis) {
    std::vector<Point> grid;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
        Point x(dim);
        for (int a = 0; a < dim; ++a)
            x[a] = static_cast<double>(idx[static_cast<std::size_t>(a)]) / (grid_per_axis - 1);
        grid.push_back(x);
        int a = dim - 1;
        while (a >= 0) {
            if (++idx[static_cast<std::size_t>(a)] < grid_per_axis) break;
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return grid;
}

RegretTrace run_gp_ucb(const GpUcbConfig& config, NoisyOracle& oracle, long long n) {
    config.validate();
    if (n > 5000)
        throw InvalidInputError("gp-ucb: evidence cap is 5000 points, requested " +
                                std::to_string(n));
    const RkhsFunction& f = oracle.target();
    const double sigma_noise = oracle.sigma();

    const std::vector<Point> grid = baseline_grid(f.kernel.dim, config.grid_per_axis);

    PosteriorParams params;
    params.tau = config.tau;
    params.n = std::max<long long>(n, 1);
    params.sigma = sigma_noise;
    BatchPosterior engine(f.kernel, grid, params);

    RegretTrace trace;
    double info_proxy = 0.0;  // I_t
    for (long long t = 0; t < n; ++t) {
        const PosteriorSummary post = engine.summarize();
        double beta;
        if (config.beta_schedule == UcbBetaSchedule::Constant) {
            beta = config.beta_constant;
        } else {
            beta = config.norm_bound +
                   sigma_noise * std::sqrt(2.0 * (info_proxy + 1.0 + std::log(1.0 / config.delta)));
        }

        Eigen::Index pick = 0;
        double best = post.mu[0] + beta * post.sigma[0];
        for (Eigen::Index i = 1; i < post.sigma.size(); ++i) {
            const double ucb = post.mu[i] + beta * post.sigma[i];
            if (ucb > best) {
                best = ucb;
                pick = i;
            }
        }

        if (sigma_noise > 0.0) {
            const double var = config.tau * post.sigma[pick] * post.sigma[pick];
            info_proxy += 0.5 * std::log(1.0 + var / (sigma_noise * sigma_noise));
        }

        const Point& x = grid[static_cast<std::size_t>(pick)];
        const double y = oracle.observe(x);
        engine.add_observation(static_cast<std::size_t>(pick), y);
        trace.append(x, y, f.gap(x), 0, static_cast<int>(grid.size()));
    }
    return trace;
}

RegretTrace run_random(NoisyOracle& oracle, long long n, std::uint64_t seed) {
    if (n < 0) throw InvalidInputError("random: negative budget");
    const RkhsFunction& f = oracle.target();
    Rng rng(mix_seed(seed, hash_string("random_search")));
    RegretTrace trace;
    for (long long t = 0; t < n; ++t) {
        Point x(f.kernel.dim);
        for (int a = 0; a < f.kernel.dim; ++a) x[a] = rng.uniform01();
        const double y = oracle.observe(x);
        trace.append(x, y, f.gap(x), 0, 0);
    }
    return trace;
}

}  // namespace kbopt
