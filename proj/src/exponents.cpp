#include "kbopt/exponents.hpp"

#include <cmath>

namespace kbopt {

double minimax_exponent(int d, double nu) {
    return (nu + d) / (2.0 * nu + d);
}

double gp_ucb_exponent(int d, double nu) {
    return std::min(1.0, (nu + 1.5 * d) / (2.0 * nu + d));
}

double pi_gp_ucb_exponent(int d, double nu) {
    const double dd = d;
    return (dd * (2.0 * dd + 3.0) + 2.0 * nu) / (dd * (2.0 * dd + 4.0) + 4.0 * nu);
}

double bead_upper_exponent(int d, double nu, double b) {
    const double xi = std::min(1.0, nu);
    const double dt = d * std::max(0.0, 1.0 - xi / b);  // d (1 - xi/b)^+
    const double adaptive = (dt + xi) / (dt + 2.0 * xi);
    return std::min(minimax_exponent(d, nu), adaptive);
}

double general_lower_exponent(double a0, int d, double nu, double b) {
    if (!(b > nu)) throw InvalidInputError("lower exponent requires b > nu");
    return (1.0 - a0) * (1.0 + (d / nu) * (1.0 - nu / b));
}

ExponentTable exponents(int d, double nu, double b) {
    if (d < 1) throw InvalidInputError("exponents: d must be >= 1");
    if (!(nu > 0.0)) throw InvalidInputError("exponents: nu must be positive");
    if (!(b > 0.0)) throw InvalidInputError("exponents: b must be positive");

    ExponentTable table;
    table.d = d;
    table.nu = nu;
    table.b = b;
    table.xi = std::min(1.0, nu);
    const bool lower_ok = b > nu;
    const double growth = lower_ok ? 1.0 + (d / nu) * (1.0 - nu / b) : 0.0;

    {
        ExponentEntry e;
        e.algorithm = "minimax";
        e.a0 = minimax_exponent(d, nu);
        e.upper = e.a0;
        if (lower_ok) {
            e.lower = (1.0 - e.a0) * growth;
            e.lower_valid = true;
            e.corollary_lower = (nu + d * (1.0 - nu / b)) / (2.0 * nu + d);
            e.corollary_valid = true;
        }
        table.entries.push_back(e);
    }
    {
        ExponentEntry e;
        e.algorithm = "gp-ucb";
        e.a0 = gp_ucb_exponent(d, nu);
        e.upper = e.a0;
        if (lower_ok) {
            e.lower = (1.0 - e.a0) * growth;
            e.lower_valid = true;
            if (nu > d / 2.0) {
                e.corollary_lower =
                    (1.0 - d / (2.0 * nu)) * (nu + d * (1.0 - nu / b)) / (2.0 * nu + d);
                e.corollary_valid = true;
            }
        }
        table.entries.push_back(e);
    }
    {
        ExponentEntry e;
        e.algorithm = "pi-gp-ucb";
        e.a0 = pi_gp_ucb_exponent(d, nu);
        e.upper = e.a0;
        if (lower_ok) {
            e.lower = (1.0 - e.a0) * growth;
            e.lower_valid = true;
            if (nu > 1.0) {
                e.corollary_lower = (1.0 + d / (2.0 * nu)) * (nu + d * (1.0 - nu / b)) /
                                    (2.0 * nu + d * (d + 2.0));
                e.corollary_valid = true;
            }
        }
        table.entries.push_back(e);
    }
    {
        // The adaptive upper bound; the consistency exponent is the minimax
        // one, so the paired lower curve coincides with the minimax row.
        ExponentEntry e;
        e.algorithm = "bead";
        e.a0 = minimax_exponent(d, nu);
        e.upper = bead_upper_exponent(d, nu, b);
        if (lower_ok) {
            e.lower = (1.0 - e.a0) * growth;
            e.lower_valid = true;
            e.corollary_lower = (nu + d * (1.0 - nu / b)) / (2.0 * nu + d);
            e.corollary_valid = true;
        }
        table.entries.push_back(e);
    }
    return table;
}

bool exponent_identity_check(int d, double nu, double b) {
    if (!(b > nu)) return true;  // nothing to compare
    const ExponentTable table = exponents(d, nu, b);
    for (const ExponentEntry& e : table.entries) {
        if (!e.lower_valid || !e.corollary_valid) continue;
        if (std::abs(e.lower - e.corollary_lower) > 1e-12) return false;
    }
    return true;
}

bool exponent_identity_grid_check(int n_points) {
    // Deterministic sweep over (d, nu, b) with b > nu; 10 x 5 x 4 = 200 triples.
    int checked = 0;
    for (int d = 1; d <= 10; ++d)
        for (double nu : {0.6, 1.1, 1.7, 2.3, 3.1})
            for (double mult : {1.05, 1.3, 1.8, 2.5}) {
                if (!exponent_identity_check(d, nu, mult * nu)) return false;
                if (++checked >= n_points) return true;
            }
    return true;
}

std::string serialize_exponent_tables(const std::vector<ExponentTable>& tables) {
    std::string s;
    s += "# kbopt-exponents v1\n";
    s += "# columns: algorithm d nu b xi upper a0 lower lower_valid corollary_lower "
         "corollary_valid\n";
    for (const ExponentTable& t : tables) {
        for (const ExponentEntry& e : t.entries) {
            s += e.algorithm + " " + std::to_string(t.d) + " " + fmt_g17(t.nu) + " " +
                 fmt_g17(t.b) + " " + fmt_g17(t.xi) + " " + fmt_g17(e.upper) + " " +
                 fmt_g17(e.a0) + " " + (e.lower_valid ? fmt_g17(e.lower) : "na") + " " +
                 (e.lower_valid ? "1" : "0") + " " +
                 (e.corollary_valid ? fmt_g17(e.corollary_lower) : "na") + " " +
                 (e.corollary_valid ? "1" : "0") + "\n";
        }
    }
    return s;
}

}  // namespace kbopt
