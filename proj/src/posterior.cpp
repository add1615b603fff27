#include "kbopt/posterior.hpp"

#include <cmath>
#include <utility>

namespace kbopt {

namespace {

// Below typical Cholesky round-off for n <= 500 at tau >= 1e-4.
constexpr double kVarianceClamp = 1e-12;

double clamped_std(double variance, double tau) {
    if (variance < 0.0) {
        if (variance < -kVarianceClamp)
            throw NumericalError("posterior: negative variance " + fmt_g17(variance));
        variance = 0.0;
    }
    return std::sqrt(variance / tau);
}

}  // namespace

double confidence_width(BetaMode mode, std::size_t n_active, long long t, long long n,
                        double delta, double sigma) {
    if (t < 1 || n < 1 || n_active == 0)
        throw InvalidInputError("confidence_width: t, n, |P_t| must be positive");
    const double p = static_cast<double>(n_active);
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    if (mode == BetaMode::LogDecay) {
        return std::sqrt(2.0 * std::log(p * nn * nn * nn) / tt);
    }
    if (delta <= 0.0) delta = 1.0 / nn;
    return sigma * std::sqrt(2.0 * std::log(p * M_PI * M_PI * tt * tt / (3.0 * delta)));
}

PosteriorSummary compute_posterior(const KernelSpec& spec, const std::vector<Point>& points,
                                   const std::vector<Point>& evidence_x,
                                   const Vector& evidence_y, const PosteriorParams& params) {
    if (points.empty()) throw InvalidInputError("compute_posterior: empty active set");
    if (static_cast<Eigen::Index>(evidence_x.size()) != evidence_y.size())
        throw InvalidInputError("compute_posterior: evidence length mismatch");
    if (!(params.tau > 0.0)) throw InvalidInputError("compute_posterior: tau must be positive");

    for (const Point& e : evidence_x) {
        bool member = false;
        for (const Point& p : points) {
            if (e.size() == p.size() && e == p) {
                member = true;
                break;
            }
        }
        if (!member)
            throw ContractError("compute_posterior: evidence point not in active set");
    }

    const std::size_t n_active = points.size();
    const Eigen::Index m = static_cast<Eigen::Index>(evidence_x.size());

    PosteriorSummary out;
    out.active_points = points;
    out.tau = params.tau;
    out.batch_size = m;
    out.mu = Vector::Zero(static_cast<Eigen::Index>(n_active));
    out.sigma = Vector::Zero(static_cast<Eigen::Index>(n_active));
    out.beta = confidence_width(params.beta_mode, n_active, m + 1, params.n, params.delta,
                                params.sigma);

    if (m == 0) {
        // Prior: mu = 0, sigma = tau^{-1/2} (unit-variance kernels).
        for (std::size_t i = 0; i < n_active; ++i)
            out.sigma[static_cast<Eigen::Index>(i)] = std::sqrt(1.0 / params.tau);
        return out;
    }

    GramSystem sys(spec, evidence_x, params.tau);
    const Vector alpha = sys.solve(evidence_y);

    for (std::size_t i = 0; i < n_active; ++i) {
        Vector kt(m);
        for (Eigen::Index j = 0; j < m; ++j)
            kt[j] = eval_kernel(spec, points[i], evidence_x[static_cast<std::size_t>(j)]);
        const double mu = kt.dot(alpha);
        const double quad = kt.dot(sys.solve(kt));
        const double variance = eval_kernel(spec, points[i], points[i]) - quad;
        out.mu[static_cast<Eigen::Index>(i)] = mu;
        out.sigma[static_cast<Eigen::Index>(i)] = clamped_std(variance, params.tau);
    }
    return out;
}

BatchPosterior::BatchPosterior(const KernelSpec& spec, std::vector<Point> anchors,
                               PosteriorParams params)
    : spec_(spec),
      anchors_(std::move(anchors)),
      params_(params),
      gram_(gram_matrix(spec, anchors_)),
      counts_(anchors_.size(), 0),
      sums_(anchors_.size(), 0.0) {
    if (anchors_.empty()) throw InvalidInputError("BatchPosterior: empty anchor set");
}

void BatchPosterior::add_observation(std::size_t anchor_index, double y) {
    if (anchor_index >= anchors_.size())
        throw ContractError("BatchPosterior: observation outside anchor set");
    if (!std::isfinite(y)) throw InvalidInputError("BatchPosterior: non-finite observation");
    counts_[anchor_index] += 1;
    sums_[anchor_index] += y;
    total_ += 1;
}

PosteriorSummary BatchPosterior::summarize() const {
    const std::size_t n_active = anchors_.size();
    PosteriorSummary out;
    out.active_points = anchors_;
    out.tau = params_.tau;
    out.batch_size = total_;
    out.mu = Vector::Zero(static_cast<Eigen::Index>(n_active));
    out.sigma = Vector::Zero(static_cast<Eigen::Index>(n_active));
    out.beta = confidence_width(params_.beta_mode, n_active, total_ + 1, params_.n,
                                params_.delta, params_.sigma);

    std::vector<Eigen::Index> observed;
    for (std::size_t i = 0; i < n_active; ++i)
        if (counts_[i] > 0) observed.push_back(static_cast<Eigen::Index>(i));

    if (observed.empty()) {
        for (std::size_t i = 0; i < n_active; ++i)
            out.sigma[static_cast<Eigen::Index>(i)] = std::sqrt(1.0 / params_.tau);
        return out;
    }

    const Eigen::Index c = static_cast<Eigen::Index>(observed.size());
    Matrix sys(c, c);
    Vector ybar(c);
    for (Eigen::Index a = 0; a < c; ++a) {
        for (Eigen::Index b = 0; b < c; ++b) sys(a, b) = gram_(observed[a], observed[b]);
        const std::size_t idx = static_cast<std::size_t>(observed[a]);
        sys(a, a) += params_.tau / static_cast<double>(counts_[idx]);
        ybar[a] = sums_[idx] / static_cast<double>(counts_[idx]);
    }
    Eigen::LLT<Matrix> llt(sys);
    if (llt.info() != Eigen::Success)
        throw NumericalError("BatchPosterior: factorization failed, c=" + std::to_string(c));
    const Vector alpha = llt.solve(ybar);

    for (std::size_t i = 0; i < n_active; ++i) {
        Vector ko(c);
        for (Eigen::Index a = 0; a < c; ++a)
            ko[a] = gram_(static_cast<Eigen::Index>(i), observed[a]);
        const double mu = ko.dot(alpha);
        const double variance = 1.0 - ko.dot(llt.solve(ko));
        out.mu[static_cast<Eigen::Index>(i)] = mu;
        out.sigma[static_cast<Eigen::Index>(i)] = clamped_std(variance, params_.tau);
    }
    return out;
}

}  // namespace kbopt
