#ifndef KBOPT_COMPLEXITY_HPP
#define KBOPT_COMPLEXITY_HPP

#include <functional>
#include <string>

#include "kbopt/instance.hpp"

namespace kbopt {

enum class PackingMode { Greedy, BruteForce };

// Greedy: scan candidates in lexicographic order, accept a point at distance
// >= separation from all accepted ones. A valid packing, hence a lower bound
// on the optimum; in 1-D it is exact and in general at least half of it.
// BruteForce: exact maximum, candidate sets of at most 20 points.
long long packing_number_candidates(const std::vector<Point>& candidates, double separation,
                                    PackingMode mode = PackingMode::Greedy);

// Candidates are lattice points {i/grid : 0 <= i <= grid}^dim inside the region.
long long packing_number(const std::function<bool(const Point&)>& region, double separation,
                         int grid_per_axis, int dim, PackingMode mode = PackingMode::Greedy);

struct ComplexityRow {
    int k = 0;
    double radius = 0.0;  // w_k (packing separation is 2 w_k)
    long long count = 0;  // m_k
    double term = 0.0;
};

struct ComplexityReport {
    std::string kind;  // lower | upper | lipschitz
    double delta = 0.0;
    double total = 0.0;
    int k_cutoff = 0;  // first empty (or tail) k
    std::vector<ComplexityRow> rows;
    double tail = 0.0;  // closed-form geometric tail (upper variant)

    // Parameters the numbers were computed under.
    double lambda = 0.0;
    double m_nu = 0.0;
    double big_m = 0.0;
    double rho = 0.0, c1 = 0.0, c2 = 0.0, xi = 0.0, lipschitz_l = 0.0;
    int grid_per_axis = 0;
    int bump_grid_n = 0;
};

// Sum over annuli Z_k = {2^k D <= gap < 2^{k+1} D} of m_k / (2^{k+2} D) with
// packing radius w_k = (3 2^k D M_nu / (lambda M))^{1/nu}. Stops at the first
// empty annulus or at ceil(log2(2 M / D)), whichever is earlier.
ComplexityReport lower_complexity(const RkhsFunction& f, double delta, double lambda,
                                  int grid_per_axis = 0, int bump_grid_n = 0);

// Sum over sublevel sets Z~_k = {gap <= c1 (1/rho)^{k xi} D} of
// m~_k / ((1/rho)^{k xi} D) with w~_k = c2 ((1/rho)^{k xi} D)^{1/xi}. Once the
// sublevel set covers the domain and the separation exceeds its diameter the
// remaining terms are summed as a geometric tail in closed form.
ComplexityReport upper_complexity(const RkhsFunction& f, double delta, double rho, double c1,
                                  double c2, int grid_per_axis = 0);

// Lipschitz variant: w_k = 3 2^k D / (lambda L), no 1/nu power.
ComplexityReport lipschitz_complexity(const RkhsFunction& f, double delta, double lipschitz_l,
                                      double lambda, int grid_per_axis = 0);

// Per-ball minimum expected query count for a0-consistent algorithms:
// (7 ln 2 / 4) sigma^2 / (c^2 Delta^2).
double min_queries_diagnostic(double delta, double c, double sigma);

// Defaults pairing the sublevel sets with the adaptive-refinement
// analysis: c1 = 7 L v_inner^xi / rho^xi with L = M, c2 = v_outer.
// Overridable at the call site.
double default_upper_c1(const RkhsFunction& f);
double default_upper_c2(const RkhsFunction& f);

// H_n = max{H : sum_{h<=H} rho^{-2 h xi} m_h <= n} with m_h the 2 v_outer rho^h
// packing of {gap <= c1 rho^{h xi}}; reported-only helper.
int horizon_depth(const RkhsFunction& f, long long n, double rho, double c1,
                  int grid_per_axis = 0);

std::string serialize_complexity_report(const ComplexityReport& report);

}  // namespace kbopt

#endif
