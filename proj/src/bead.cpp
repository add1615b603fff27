#include "kbopt/bead.hpp"

#include <cmath>
#include <iostream>

namespace kbopt {

double BeadConfig::effective_l() const {
    if (l_rule == LRule::Fixed) return l_fixed;
    return M * std::log(static_cast<double>(n));
}

void BeadConfig::validate() const {
    if (n < 1) throw InvalidInputError("bead: budget must be >= 1");
    if (!(tau > 0.0)) throw InvalidInputError("bead: tau must be positive");
    if (!(M > 0.0)) throw InvalidInputError("bead: M must be positive");
    if (sigma < 0.0) throw InvalidInputError("bead: sigma must be >= 0");
    if (l_rule == LRule::Fixed && !(l_fixed > 0.0))
        throw InvalidInputError("bead: fixed L must be positive");
}

PartitionState refine_partition(const TreeGeometry& geom, const PartitionState& state,
                                const PosteriorSummary& posterior) {
    const std::size_t m = state.active.size();
    if (posterior.mu.size() != static_cast<Eigen::Index>(m))
        throw ContractError("refine_partition: posterior size mismatch");

    double l_t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Index k = static_cast<Eigen::Index>(i);
        l_t = std::max(l_t, posterior.mu[k] - posterior.beta * posterior.sigma[k]);
    }

    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Index k = static_cast<Eigen::Index>(i);
        if (posterior.mu[k] + posterior.beta * posterior.sigma[k] > l_t)
            survivors.push_back(i);
    }
    if (survivors.empty()) {
        std::size_t best = 0;
        double best_ucb = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            const double ucb = posterior.mu[k] + posterior.beta * posterior.sigma[k];
            if (ucb > best_ucb) {
                best_ucb = ucb;
                best = i;
            }
        }
        survivors.push_back(best);
    }

    PartitionState next;
    next.depth = state.depth + 1;
    if (next.depth > geom.h_max)
        throw StallError("refine_partition: depth " + std::to_string(next.depth) +
                         " exceeds h_max");
    for (std::size_t i : survivors) {
        next.active.push_back(state.active[i].left_child());
        next.active.push_back(state.active[i].right_child());
    }
    next.eval_counts.assign(next.active.size(), 0);
    return next;
}

RegretTrace run_bead(const BeadConfig& config, NoisyOracle& oracle,
                     BeadDiagnostics* diagnostics) {
    config.validate();
    const RkhsFunction& f = oracle.target();
    const TreeGeometry& geom = config.geometry;
    if (geom.dim != f.kernel.dim) throw InvalidInputError("bead: geometry/instance dim mismatch");

    const double xi = f.kernel.holder_exponent();
    const double l_const = config.effective_l();
    if (f.holder_l_hat > 0.0 && l_const > 0.0 && l_const < f.holder_l_hat) {
        std::cerr << "kbopt: warning: L=" << l_const << " below measured Holder witness "
                  << f.holder_l_hat << "\n";
    }
    const double u_floor = 1.0 / std::sqrt(static_cast<double>(config.n));

    PosteriorParams params;
    params.tau = config.tau;
    params.beta_mode = config.beta_mode;
    params.n = config.n;
    params.delta = config.delta;
    params.sigma = config.sigma;

    PartitionState state;
    state.active = {CellId{0, 1}};
    state.depth = 0;
    state.eval_counts = {0};

    auto centers_of = [&](const PartitionState& s) {
        std::vector<Point> centers;
        centers.reserve(s.active.size());
        for (const CellId& id : s.active) centers.push_back(cell_center(geom, id));
        return centers;
    };

    BatchPosterior engine(f.kernel, centers_of(state), params);
    std::vector<Point> centers = centers_of(state);

    RegretTrace trace;
    BatchStat batch;
    batch.depth = 0;
    batch.active_size = 1;
    long long queries = 0;
    long long consecutive_refines = 0;
    const long long refine_guard = 10 * config.n;

    while (queries < config.n) {
        const PosteriorSummary post = engine.summarize();
        batch.beta_max = std::max(batch.beta_max, post.beta);

        Eigen::Index pick = 0;
        double u_t = post.sigma[0];
        for (Eigen::Index i = 1; i < post.sigma.size(); ++i) {
            if (post.sigma[i] > u_t) {
                u_t = post.sigma[i];
                pick = i;
            }
        }

        const double threshold =
            l_const * std::pow(geom.v_inner * std::pow(geom.rho, state.depth), xi);
        batch.threshold = threshold;

        if (u_floor < u_t && u_t < threshold) {
            if (++consecutive_refines > refine_guard)
                throw StallError("bead: " + std::to_string(consecutive_refines) +
                                 " consecutive refinements without a query at depth " +
                                 std::to_string(state.depth));
            batch.ended_by_refine = true;
            if (diagnostics) diagnostics->batches.push_back(batch);

            const int old_depth = state.depth;
            PartitionState next = refine_partition(geom, state, post);
            RefineEvent ev;
            ev.query_index = queries;
            ev.old_depth = old_depth;
            ev.survivors = static_cast<int>(next.active.size() / 2);
            ev.new_active_size = static_cast<int>(next.active.size());
            trace.refine_events.push_back(ev);

            state = std::move(next);
            centers = centers_of(state);
            engine = BatchPosterior(f.kernel, centers, params);

            batch = BatchStat{};
            batch.depth = state.depth;
            batch.active_size = static_cast<int>(state.active.size());
            continue;
        }

        consecutive_refines = 0;
        const Point& x = centers[static_cast<std::size_t>(pick)];
        const double y = oracle.observe(x);
        engine.add_observation(static_cast<std::size_t>(pick), y);
        state.eval_counts[static_cast<std::size_t>(pick)] += 1;
        batch.batch_queries += 1;
        batch.max_point_evals =
            std::max(batch.max_point_evals, state.eval_counts[static_cast<std::size_t>(pick)]);
        trace.append(x, y, f.gap(x), state.depth, static_cast<int>(state.active.size()));
        ++queries;
    }

    if (diagnostics) {
        diagnostics->batches.push_back(batch);  // final batch (not refine-terminated)
        diagnostics->final_depth = state.depth;
        diagnostics->refine_count = static_cast<long long>(trace.refine_events.size());
    }
    return trace;
}

SuboptimalityReport check_suboptimality_bound(const RegretTrace& trace,
                                              const RkhsFunction& instance,
                                              const BeadConfig& config) {
    const double xi = instance.kernel.holder_exponent();
    const double l_const = config.effective_l();
    const TreeGeometry& geom = config.geometry;

    SuboptimalityReport report;
    for (std::size_t t = 0; t < trace.queried_points.size(); ++t) {
        const int h = trace.depth[t];
        if (h < 1) continue;  // the bound applies from depth 1
        ++report.checked;
        const double bound =
            7.0 * l_const * std::pow(geom.v_inner, xi) * std::pow(geom.rho, (h - 1) * xi);
        const double excess = trace.instant_regret[t] - bound;
        report.worst_excess = std::max(report.worst_excess, excess);
        if (excess > 1e-9) ++report.violations;
    }
    return report;
}

}  // namespace kbopt
