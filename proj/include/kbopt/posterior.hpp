#ifndef KBOPT_POSTERIOR_HPP
#define KBOPT_POSTERIOR_HPP

#include <vector>

#include "kbopt/kernel.hpp"

namespace kbopt {

// Two confidence-width schedules: LogDecay is the batch-decaying
// sqrt(2 log(|P| n^3)/t); Concentration is the noise-scaled union-bound width
// sqrt(2 sigma^2 log(|P| pi^2 t^2 / (3 delta))) and, with delta = 1/n, the
// default.
enum class BetaMode { LogDecay, Concentration };

struct PosteriorParams {
    double tau = 1.0;
    BetaMode beta_mode = BetaMode::Concentration;
    long long n = 1;     // total query budget (enters beta)
    double delta = 0.0;  // <= 0 selects the default 1/n
    double sigma = 1.0;  // noise scale, Concentration mode only
};

struct PosteriorSummary {
    std::vector<Point> active_points;
    Vector mu;
    Vector sigma;
    double beta = 0.0;
    double tau = 1.0;
    long long batch_size = 0;  // |E_t|
};

// t counts evidence within the current batch: t = |E_t| + 1.
double confidence_width(BetaMode mode, std::size_t n_active, long long t, long long n,
                        double delta, double sigma);

// mu(x) = k_t(x)^T (K_t + tau I)^{-1} y_t
// sigma(x) = tau^{-1/2} sqrt(k(x,x) - k_t(x)^T (K_t + tau I)^{-1} k_t(x))
// Evidence points must be members (exact coordinates) of `points`.
PosteriorSummary compute_posterior(const KernelSpec& spec, const std::vector<Point>& points,
                                   const std::vector<Point>& evidence_x,
                                   const Vector& evidence_y, const PosteriorParams& params);

/// Same posterior over a fixed anchor set with repeated observations folded
/// into per-anchor counts and means: equivalent to the multiset form through
/// the heteroscedastic-noise identity (K_o + tau D^{-1}), but each refresh
/// costs O(c^3) in the number of observed anchors instead of O(|E_t|^3).
class BatchPosterior {
public:
    BatchPosterior(const KernelSpec& spec, std::vector<Point> anchors, PosteriorParams params);

    void add_observation(std::size_t anchor_index, double y);
    long long total_observations() const { return total_; }
    long long count(std::size_t anchor_index) const { return counts_[anchor_index]; }

    PosteriorSummary summarize() const;

private:
    KernelSpec spec_;
    std::vector<Point> anchors_;
    PosteriorParams params_;
    Matrix gram_;  // anchors x anchors
    std::vector<long long> counts_;
    std::vector<double> sums_;
    long long total_ = 0;
};

}  // namespace kbopt

#endif
