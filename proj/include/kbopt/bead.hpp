#ifndef KBOPT_BEAD_HPP
#define KBOPT_BEAD_HPP

#include "kbopt/instance.hpp"
#include "kbopt/partition.hpp"
#include "kbopt/posterior.hpp"
#include "kbopt/trace.hpp"

namespace kbopt {

enum class LRule { MLogN, Fixed };

struct BeadConfig {
    long long n = 1;           // query budget
    double tau = 1.0;
    double M = 1.0;            // RKHS norm bound
    double sigma = 0.0;        // noise scale (enters the Concentration beta)
    BetaMode beta_mode = BetaMode::Concentration;
    double delta = 0.0;        // <= 0 selects 1/n
    TreeGeometry geometry;
    LRule l_rule = LRule::MLogN;
    double l_fixed = 0.0;
    std::uint64_t rng_seed = 0;

    double effective_l() const;
    void validate() const;
};

struct PartitionState {
    std::vector<CellId> active;  // all at the common depth
    int depth = 0;
    std::vector<long long> eval_counts;  // per active point, current batch
};

// Survivors keep mu + beta*sigma strictly above the best lower bound
// l_t = max(mu - beta*sigma); the new active set is both children of every
// survivor at depth h+1. A fully tied, zero-width posterior can empty the
// strict test; the best cell (lowest index on ties) is retained then.
PartitionState refine_partition(const TreeGeometry& geom, const PartitionState& state,
                                const PosteriorSummary& posterior);

struct BatchStat {
    int depth = 0;
    int active_size = 0;
    long long batch_queries = 0;
    long long max_point_evals = 0;
    double beta_max = 0.0;       // largest confidence width seen in the batch
    double threshold = 0.0;      // L (v_inner rho^h)^xi
    bool ended_by_refine = false;
};

struct BeadDiagnostics {
    std::vector<BatchStat> batches;
    int final_depth = 0;
    long long refine_count = 0;
};

// Algorithm: per iteration compute the posterior over active centers, pick
// x_t = argmax sigma (lowest cell index on ties); refine while
// 1/sqrt(n) < U_t < L (v_inner rho^h)^xi, otherwise query x_t. Refinements do
// not consume budget; exactly n oracle queries are issued.
RegretTrace run_bead(const BeadConfig& config, NoisyOracle& oracle,
                     BeadDiagnostics* diagnostics = nullptr);

struct SuboptimalityReport {
    long long checked = 0;
    long long violations = 0;
    double worst_excess = 0.0;  // max of gap - bound over checked queries
};

// Flags queries at depth h >= 1 whose suboptimality exceeds
// 7 L v_inner^xi rho^{(h-1) xi}. Expected clean on noiseless runs.
SuboptimalityReport check_suboptimality_bound(const RegretTrace& trace,
                                              const RkhsFunction& instance,
                                              const BeadConfig& config);

}  // namespace kbopt

#endif
