#include "kbopt/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "kbopt/partition.hpp"

namespace kbopt {

namespace {

// Lattice {i/n} per axis in lexicographic order with cached gap values.
struct GapGrid {
    std::vector<Point> points;
    std::vector<double> gaps;

    GapGrid(const RkhsFunction& f, int grid_per_axis) {
        const int dim = f.kernel.dim;
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        while (true) {
            Point x(dim);
            for (int a = 0; a < dim; ++a)
                x[a] = static_cast<double>(idx[static_cast<std::size_t>(a)]) / grid_per_axis;
            points.push_back(x);
            gaps.push_back(f.gap(x));
            int a = dim - 1;
            while (a >= 0) {
                if (++idx[static_cast<std::size_t>(a)] <= grid_per_axis) break;
                idx[static_cast<std::size_t>(a)] = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
};

// Round-off slack so exact-arithmetic packings (0, 0.2, ..., 1.0) survive
// binary subtraction noise like 0.6 - 0.4 < 0.2.
constexpr double kSeparationSlack = 1.0 - 1e-12;

long long greedy_packing(const std::vector<Point>& candidates, double separation) {
    const double sep = separation * kSeparationSlack;
    std::vector<const Point*> accepted;
    for (const Point& x : candidates) {
        bool ok = true;
        for (const Point* a : accepted) {
            if ((x - *a).norm() < sep) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.push_back(&x);
    }
    return static_cast<long long>(accepted.size());
}

void brute_force_packing(const std::vector<Point>& pts,
                         const std::vector<std::vector<bool>>& compatible,
                         std::size_t from, std::vector<std::size_t>& chosen,
                         long long& best) {
    if (static_cast<long long>(chosen.size() + (pts.size() - from)) <= best) return;  // prune
    if (from == pts.size()) {
        best = std::max(best, static_cast<long long>(chosen.size()));
        return;
    }
    bool ok = true;
    for (std::size_t c : chosen) {
        if (!compatible[c][from]) {
            ok = false;
            break;
        }
    }
    if (ok) {
        chosen.push_back(from);
        brute_force_packing(pts, compatible, from + 1, chosen, best);
        chosen.pop_back();
    }
    brute_force_packing(pts, compatible, from + 1, chosen, best);
}

long long packing_cached(const std::vector<Point>& pts, double separation) {
    return greedy_packing(pts, separation);
}

}  // namespace

long long packing_number_candidates(const std::vector<Point>& candidates, double separation,
                                    PackingMode mode) {
    if (!(separation > 0.0))
        throw InvalidInputError("packing_number: separation must be positive");
    if (candidates.empty()) return 0;
    if (mode == PackingMode::Greedy) return greedy_packing(candidates, separation);
    if (candidates.size() > 20)
        throw InvalidInputError("packing_number: brute force limited to 20 candidates");
    std::vector<std::vector<bool>> compatible(candidates.size(),
                                              std::vector<bool>(candidates.size(), false));
    const double sep = separation * kSeparationSlack;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = 0; j < candidates.size(); ++j)
            compatible[i][j] = (candidates[i] - candidates[j]).norm() >= sep;
    long long best = 0;
    std::vector<std::size_t> chosen;
    brute_force_packing(candidates, compatible, 0, chosen, best);
    return best;
}

long long packing_number(const std::function<bool(const Point&)>& region, double separation,
                         int grid_per_axis, int dim, PackingMode mode) {
    if (grid_per_axis < 1) throw InvalidInputError("packing_number: grid_per_axis must be >= 1");
    std::vector<Point> candidates;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
        Point x(dim);
        for (int a = 0; a < dim; ++a)
            x[a] = static_cast<double>(idx[static_cast<std::size_t>(a)]) / grid_per_axis;
        if (region(x)) candidates.push_back(x);
        int a = dim - 1;
        while (a >= 0) {
            if (++idx[static_cast<std::size_t>(a)] <= grid_per_axis) break;
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return packing_number_candidates(candidates, separation, mode);
}

ComplexityReport lower_complexity(const RkhsFunction& f, double delta, double lambda,
                                  int grid_per_axis, int bump_grid_n) {
    if (!(delta > 0.0)) throw InvalidInputError("lower_complexity: Delta must be positive");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidInputError("lower_complexity: lambda in (0,1)");
    if (std::abs((1.0 - lambda) * f.M - f.declared_norm()) > 1e-6 * std::max(1.0, f.M))
        throw ContractError("lower_complexity: instance norm != (1-lambda) M");
    if (f.kernel.family != KernelFamily::Matern)
        throw InvalidInputError("lower_complexity: Matern kernels only");

    const int grid = grid_per_axis > 0 ? grid_per_axis : default_domain_grid(f.kernel.dim);
    const int bump_grid = bump_grid_n > 0 ? bump_grid_n : default_bump_grid(f.kernel.dim);
    const double m_nu = estimate_bump_norm(f.kernel, bump_grid);

    ComplexityReport report;
    report.kind = "lower";
    report.delta = delta;
    report.lambda = lambda;
    report.m_nu = m_nu;
    report.big_m = f.M;
    report.grid_per_axis = grid;
    report.bump_grid_n = bump_grid;

    const GapGrid gg(f, grid);
    // k0 <= ceil(log2(2 M K(0) / Delta)); K(0) = 1.
    const int k_max = static_cast<int>(std::ceil(std::log2(std::max(2.0 * f.M / delta, 1.0))));
    for (int k = 0;; ++k) {
        const double lo = std::ldexp(delta, k);      // 2^k Delta
        const double hi = std::ldexp(delta, k + 1);  // 2^{k+1} Delta
        std::vector<Point> candidates;
        for (std::size_t i = 0; i < gg.points.size(); ++i)
            if (gg.gaps[i] >= lo && gg.gaps[i] < hi) candidates.push_back(gg.points[i]);
        if (candidates.empty() || k > k_max) {
            report.k_cutoff = k;
            break;
        }
        const double w_k = std::pow(3.0 * lo * m_nu / (lambda * f.M), 1.0 / f.kernel.nu);
        const long long m_k = packing_cached(candidates, 2.0 * w_k);
        const double term = static_cast<double>(m_k) / (std::ldexp(delta, k + 2));
        report.rows.push_back({k, w_k, m_k, term});
        report.total += term;
    }
    return report;
}

ComplexityReport upper_complexity(const RkhsFunction& f, double delta, double rho, double c1,
                                  double c2, int grid_per_axis) {
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidInputError("upper_complexity: Delta in (0,1)");
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidInputError("upper_complexity: rho in (0,1)");
    if (!(c1 > 0.0 && c2 > 0.0)) throw InvalidInputError("upper_complexity: c1, c2 > 0");

    const int grid = grid_per_axis > 0 ? grid_per_axis : default_domain_grid(f.kernel.dim);
    const double xi = f.kernel.holder_exponent();
    const double diam = std::sqrt(static_cast<double>(f.kernel.dim));

    ComplexityReport report;
    report.kind = "upper";
    report.delta = delta;
    report.rho = rho;
    report.c1 = c1;
    report.c2 = c2;
    report.xi = xi;
    report.big_m = f.M;
    report.grid_per_axis = grid;

    const GapGrid gg(f, grid);
    const double span = gg.gaps.empty() ? 0.0 : *std::max_element(gg.gaps.begin(), gg.gaps.end());
    if (!(span > 0.0)) return report;  // all-optimal objective: zero regret at any budget

    // Exactly-optimal points carry no regret and are excluded from the
    // sublevel sets; on generic instances no lattice point is exactly optimal.
    const double scale_base = std::pow(1.0 / rho, xi);
    for (int k = 0;; ++k) {
        const double scale = std::pow(scale_base, k) * delta;  // (1/rho)^{k xi} Delta
        const double level = c1 * scale;
        std::vector<Point> candidates;
        for (std::size_t i = 0; i < gg.points.size(); ++i)
            if (gg.gaps[i] > 0.0 && gg.gaps[i] <= level) candidates.push_back(gg.points[i]);
        const double w_k = c2 * std::pow(scale, 1.0 / xi);
        const bool whole_domain = level >= span;
        if (whole_domain && 2.0 * w_k > diam) {
            // All later sets stay the whole domain and pack a single point:
            // sum_{j>=k} rho^{j xi} / Delta in closed form.
            report.k_cutoff = k;
            report.tail = std::pow(rho, static_cast<double>(k) * xi) /
                          (delta * (1.0 - std::pow(rho, xi)));
            report.total += report.tail;
            break;
        }
        const long long m_k =
            candidates.empty() ? 0 : packing_cached(candidates, 2.0 * w_k);
        const double term = static_cast<double>(m_k) / scale;
        report.rows.push_back({k, w_k, m_k, term});
        report.total += term;
        if (k > 400)
            throw NumericalError("upper_complexity: no convergence after 400 scales");
    }
    return report;
}

ComplexityReport lipschitz_complexity(const RkhsFunction& f, double delta, double lipschitz_l,
                                      double lambda, int grid_per_axis) {
    if (!(delta > 0.0)) throw InvalidInputError("lipschitz_complexity: Delta must be positive");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidInputError("lipschitz_complexity: lambda in (0,1)");
    if (!(lipschitz_l > 0.0)) throw InvalidInputError("lipschitz_complexity: L must be positive");
    if (f.holder_l_hat > (1.0 - lambda) * lipschitz_l + 1e-12)
        throw ContractError("lipschitz_complexity: measured witness exceeds (1-lambda) L");

    const int grid = grid_per_axis > 0 ? grid_per_axis : default_domain_grid(f.kernel.dim);

    ComplexityReport report;
    report.kind = "lipschitz";
    report.delta = delta;
    report.lambda = lambda;
    report.lipschitz_l = lipschitz_l;
    report.big_m = f.M;
    report.grid_per_axis = grid;

    const GapGrid gg(f, grid);
    const double span = gg.gaps.empty() ? 0.0 : *std::max_element(gg.gaps.begin(), gg.gaps.end());
    const int k_max =
        static_cast<int>(std::ceil(std::log2(std::max(2.0 * std::max(span, f.M) / delta, 1.0))));
    for (int k = 0;; ++k) {
        const double lo = std::ldexp(delta, k);
        const double hi = std::ldexp(delta, k + 1);
        std::vector<Point> candidates;
        for (std::size_t i = 0; i < gg.points.size(); ++i)
            if (gg.gaps[i] >= lo && gg.gaps[i] < hi) candidates.push_back(gg.points[i]);
        if (candidates.empty() || k > k_max) {
            report.k_cutoff = k;
            break;
        }
        const double w_k = 3.0 * lo / (lambda * lipschitz_l);
        const long long m_k = packing_cached(candidates, 2.0 * w_k);
        const double term = static_cast<double>(m_k) / (std::ldexp(delta, k + 2));
        report.rows.push_back({k, w_k, m_k, term});
        report.total += term;
    }
    return report;
}

double min_queries_diagnostic(double delta, double c, double sigma) {
    if (!(delta > 0.0) || !(c > 0.0) || sigma < 0.0)
        throw InvalidInputError("min_queries_diagnostic: need Delta, c > 0 and sigma >= 0");
    return (7.0 * std::log(2.0) / 4.0) * sigma * sigma / (c * c * delta * delta);
}

double default_upper_c1(const RkhsFunction& f) {
    const TreeGeometry geom = geometry_constants(f.kernel.dim);
    const double xi = f.kernel.holder_exponent();
    return 7.0 * f.M * std::pow(geom.v_inner, xi) / std::pow(geom.rho, xi);
}

double default_upper_c2(const RkhsFunction& f) {
    return geometry_constants(f.kernel.dim).v_outer;
}

int horizon_depth(const RkhsFunction& f, long long n, double rho, double c1,
                  int grid_per_axis) {
    const int grid = grid_per_axis > 0 ? grid_per_axis : default_domain_grid(f.kernel.dim);
    const double xi = f.kernel.holder_exponent();
    const double v2 = default_upper_c2(f);
    const GapGrid gg(f, grid);
    double budget = 0.0;
    int h = -1;
    while (true) {
        const int next = h + 1;
        const double level = c1 * std::pow(rho, next * xi);
        std::vector<Point> candidates;
        for (std::size_t i = 0; i < gg.points.size(); ++i)
            if (gg.gaps[i] <= level) candidates.push_back(gg.points[i]);
        const long long m_h = candidates.empty()
                                  ? 0
                                  : packing_cached(candidates, 2.0 * v2 * std::pow(rho, next));
        budget += std::pow(rho, -2.0 * next * xi) * static_cast<double>(m_h);
        if (budget > static_cast<double>(n)) break;
        h = next;
        if (h > 200) break;
    }
    return std::max(h, 0);
}

std::string serialize_complexity_report(const ComplexityReport& report) {
    std::string s;
    s += "# kbopt-complexity v1 kind=" + report.kind + "\n";
    s += "# delta=" + fmt_g17(report.delta) + " lambda=" + fmt_g17(report.lambda) +
         " m_nu=" + fmt_g17(report.m_nu) + " M=" + fmt_g17(report.big_m) +
         " rho=" + fmt_g17(report.rho) + " c1=" + fmt_g17(report.c1) +
         " c2=" + fmt_g17(report.c2) + " xi=" + fmt_g17(report.xi) +
         " lipschitz_l=" + fmt_g17(report.lipschitz_l) +
         " grid=" + std::to_string(report.grid_per_axis) +
         " bump_grid=" + std::to_string(report.bump_grid_n) + "\n";
    s += "# columns: k radius count term\n";
    for (const ComplexityRow& row : report.rows)
        s += std::to_string(row.k) + " " + fmt_g17(row.radius) + " " +
             std::to_string(row.count) + " " + fmt_g17(row.term) + "\n";
    if (report.tail != 0.0) s += "tail " + fmt_g17(report.tail) + "\n";
    s += "total " + fmt_g17(report.total) + " k_cutoff " + std::to_string(report.k_cutoff) +
         "\n";
    return s;
}

}  // namespace kbopt
