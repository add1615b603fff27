#ifndef KBOPT_INSTANCE_HPP
#define KBOPT_INSTANCE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kbopt/kernel.hpp"
#include "kbopt/rng.hpp"

namespace kbopt {

/// Compactly supported additive term: amplitude * g((x - center)/radius),
/// zero outside B(center, radius), equal to amplitude at the center.
struct BumpTerm {
    double amplitude = 0.0;
    Point center;
    double radius = 1.0;
};

struct GrowthFit {
    bool valid = false;
    double b_target = 0.0;
    double b_hat = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
    double rho0 = 0.0;
};

struct PerturbationMeta {
    bool valid = false;
    Point z;
    double radius = 0.0;       // w: support of the added bump
    double delta = 0.0;        // Delta
    double c_annulus = 0.0;    // annulus parameter c (gap in [Delta, c Delta] at z)
    double c_deviation = 0.0;  // deviation constant: sup |f - f~| <= c_deviation * Delta
};

/// Synthetic objective: finite kernel expansion plus optional bump additives,
/// with exact expansion norm, located maximizer and declared norm budget M.
struct RkhsFunction {
    KernelSpec kernel;
    std::vector<Point> centers;
    Vector weights;
    std::vector<BumpTerm> bumps;

    double norm_expansion = 0.0;      // sqrt(alpha^T K alpha), exact
    double norm_bump_estimate = 0.0;  // scaling-bound estimate for the bump part
    Point argmax;
    double fmax = 0.0;
    double M = 0.0;  // declared norm budget
    int argmax_grid_res = 0;
    std::uint64_t seed = 0;
    double holder_xi = 1.0;
    double holder_l_hat = 0.0;  // measured Holder witness

    GrowthFit growth;
    PerturbationMeta perturbation;

    double value(const Point& x) const;
    double operator()(const Point& x) const { return value(x); }
    double gap(const Point& x) const { return fmax - value(x); }
    double declared_norm() const { return norm_expansion + norm_bump_estimate; }
    double lambda() const { return 1.0 - declared_norm() / M; }
};

// Standard mollifier g(u) = exp(1 - 1/(1 - |u|^2)) inside the unit ball, 0
// outside; g(0) = 1.
double bump(const Point& x, const Point& center, double radius);

// <f, g> = alpha_f^T K alpha_g over the expansion parts (shared kernel).
double expansion_inner(const RkhsFunction& f, const RkhsFunction& g);

// Default per-axis grid resolutions for argmax scans and region membership.
int default_domain_grid(int dim);  // 512 / 128 / 32
int default_bump_grid(int dim);    // 256 / 32

// Grid scan plus multi-start coordinate pattern refinement.
std::pair<Point, double> locate_argmax(const std::function<double(const Point&)>& f, int dim,
                                       int grid_per_axis);

// Random centers and weights, rescaled so the expansion norm hits target_norm
// exactly; M defaults to norm_budget_factor * target_norm.
RkhsFunction synth_expansion(const KernelSpec& spec, int n_centers, double target_norm,
                             std::uint64_t seed, double norm_budget_factor = 2.0);

// Zero function carrying instance metadata; every suboptimality gap is 0.
RkhsFunction constant_instance(const KernelSpec& spec, double budget_m = 1.0);

// Minimum-norm kernel interpolant of sampled values: sqrt(v^T (K + eps I)^{-1} v).
double interpolant_norm(const KernelSpec& spec, const std::vector<Point>& points,
                        const Vector& values, double eps = 1e-8);

// Interpolant-norm estimate of the unit bump's RKHS norm M_nu on a regular
// grid over [-1,1]^d with grid_n intervals per axis. A lower-bound estimate,
// monotone nondecreasing in grid_n for nested grids.
double estimate_bump_norm(const KernelSpec& spec, int grid_n);

// Shapes an expansion whose measured local growth exponent (log-log fit of
// the gap against the radius over [0.01, 0.1]) lands within 0.25 of b.
RkhsFunction synth_growth_instance(const KernelSpec& spec, double b, std::uint64_t seed);

// Log-log regression of fmax - f against distance from the maximizer.
GrowthFit measure_growth(const RkhsFunction& f, double b_target);

// Measured sup of |f(x)-f(z)| / |x-z|^xi over sampled pairs.
double holder_witness(const RkhsFunction& f, std::uint64_t seed, int n_pairs = 10000);

// f~ = f + (c+1) Delta bump(.; z, w) with w = ((c+1) Delta M_nu / (lambda M))^{1/nu}.
// Preconditions: z in the annulus {Delta <= gap <= c Delta}, B(z, w) contained
// in the annulus, and the declared budget satisfies |f| = (1 - lambda) M.
RkhsFunction perturb(const RkhsFunction& f, const Point& z, double delta, double c,
                     double lambda, int grid_per_axis = 0);

struct PerturbationCheck {
    bool p1_equal_outside = false;
    bool p2_argmax_inside = false;
    bool p2_base_argmax_outside = false;
    bool p3_deviation = false;
    bool p3_base_gap = false;
    bool p3_perturbed_gap = false;
    int grid_points = 0;
    double tolerance = 1e-9;
    bool all() const {
        return p1_equal_outside && p2_argmax_inside && p2_base_argmax_outside &&
               p3_deviation && p3_base_gap && p3_perturbed_gap;
    }
};

// Grid verification of (P1)-(P3) for a perturbed instance against its base.
PerturbationCheck validate_perturbation(const RkhsFunction& base, const RkhsFunction& perturbed,
                                        int grid_per_axis = 0, double tolerance = 1e-9);

// Picks an annulus point z (and shrinks delta if needed) so that perturb's
// ball-containment precondition holds; returns the chosen (z, delta).
std::optional<std::pair<Point, double>> find_perturbation_site(const RkhsFunction& f,
                                                               double delta, double c,
                                                               double lambda,
                                                               int grid_per_axis = 0);

/// Seeded noisy zeroth-order oracle: observe(x) = f(x) + N(0, sigma^2).
class NoisyOracle {
public:
    NoisyOracle(RkhsFunction target, double sigma, std::uint64_t seed);

    double observe(const Point& x);
    long long query_count() const { return query_count_; }
    const RkhsFunction& target() const { return target_; }
    double sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }

private:
    RkhsFunction target_;
    double sigma_;
    std::uint64_t seed_;
    Rng rng_;
    long long query_count_ = 0;
};

}  // namespace kbopt

#endif
