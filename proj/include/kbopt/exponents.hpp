#ifndef KBOPT_EXPONENTS_HPP
#define KBOPT_EXPONENTS_HPP

#include <string>
#include <vector>

#include "kbopt/common.hpp"

namespace kbopt {

/// Closed-form regret exponents (regret ~ n^alpha) for a problem with
/// dimension d, Matern smoothness nu, and local growth exponent b.
struct ExponentEntry {
    std::string algorithm;     // minimax | gp-ucb | pi-gp-ucb | bead
    double upper = 0.0;        // exponent of the algorithm's regret upper bound
    double a0 = 0.0;           // consistency exponent entering the lower bound
    double lower = 0.0;        // (1 - a0)(1 + (d/nu)(1 - nu/b))
    bool lower_valid = false;  // requires b > nu
    double corollary_lower = 0.0;  // specialized closed form, when applicable
    bool corollary_valid = false;
};

struct ExponentTable {
    int d = 1;
    double nu = 0.0;
    double b = 0.0;
    double xi = 0.0;
    std::vector<ExponentEntry> entries;
};

// a* = (nu+d)/(2nu+d), the minimax exponent (SupKernelUCB attains it).
double minimax_exponent(int d, double nu);
// min{1, (nu + 3d/2)/(2nu + d)} for GP-UCB and GP-TS.
double gp_ucb_exponent(int d, double nu);
// (d(2d+3) + 2nu)/(d(2d+4) + 4nu).
double pi_gp_ucb_exponent(int d, double nu);
// min{a*, (d(1-xi/b)^+ + xi)/(d(1-xi/b)^+ + 2xi)} with xi = min{1, nu}.
double bead_upper_exponent(int d, double nu, double b);
// (1 - a0)(1 + (d/nu)(1 - nu/b)); requires b > nu.
double general_lower_exponent(double a0, int d, double nu, double b);

ExponentTable exponents(int d, double nu, double b);

// Checks the specialized corollary forms against the general lower form to
// 1e-12 for every algorithm where both are defined.
bool exponent_identity_check(int d, double nu, double b);

// Identity check over a grid of (d, nu, b) triples with b > nu.
bool exponent_identity_grid_check(int n_points = 200);

// Columnar data keyed by (algorithm, d, nu, b) for the exponent-vs-dimension
// curves, one row per (algorithm, d).
std::string serialize_exponent_tables(const std::vector<ExponentTable>& tables);

}  // namespace kbopt

#endif
