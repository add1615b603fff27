#include "kbopt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kbopt {

namespace {

// Enumerate the lattice {i/n : 0 <= i <= n}^d in lexicographic order.
void for_each_lattice_point(int dim, int n, const std::function<void(const Point&)>& fn) {
    Point x = Point::Zero(dim);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
        for (int a = 0; a < dim; ++a)
            x[a] = static_cast<double>(idx[static_cast<std::size_t>(a)]) / n;
        fn(x);
        int a = dim - 1;
        while (a >= 0) {
            if (++idx[static_cast<std::size_t>(a)] <= n) break;
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
}

Point pattern_refine(const std::function<double(const Point&)>& f, Point x, double step,
                     double floor_step = 1e-12) {
    const int dim = static_cast<int>(x.size());
    double best = f(x);
    while (step > floor_step) {
        bool moved = false;
        for (int a = 0; a < dim; ++a) {
            for (double sgn : {+1.0, -1.0}) {
                Point cand = x;
                cand[a] = std::clamp(cand[a] + sgn * step, 0.0, 1.0);
                const double v = f(cand);
                if (v > best) {
                    best = v;
                    x = cand;
                    moved = true;
                }
            }
        }
        if (!moved) step *= 0.5;
    }
    return x;
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<Point> growth_directions(int dim) {
    std::vector<Point> dirs;
    if (dim == 1) {
        Point p(1);
        p[0] = 1.0;
        dirs.push_back(p);
        p[0] = -1.0;
        dirs.push_back(p);
        return dirs;
    }
    if (dim == 2) {
        for (int j = 0; j < 16; ++j) {
            const double a = 2.0 * M_PI * j / 16.0;
            Point p(2);
            p << std::cos(a), std::sin(a);
            dirs.push_back(p);
        }
        return dirs;
    }
    // d >= 3: normalized sign patterns.
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy)
            for (int sz = -1; sz <= 1; ++sz) {
                if (sx == 0 && sy == 0 && sz == 0) continue;
                Point p = Point::Zero(dim);
                p[0] = sx;
                p[1] = sy;
                p[2] = sz;
                dirs.push_back(p / p.norm());
            }
    return dirs;
}

}  // namespace

double bump(const Point& x, const Point& center, double radius) {
    if (!(radius > 0.0)) throw InvalidInputError("bump: radius must be positive");
    const double q = (x - center).squaredNorm() / (radius * radius);
    if (q >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - q));
}

double RkhsFunction::value(const Point& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
        v += weights[static_cast<Eigen::Index>(i)] * eval_kernel(kernel, x, centers[i]);
    for (const BumpTerm& b : bumps) v += b.amplitude * bump(x, b.center, b.radius);
    return v;
}

double expansion_inner(const RkhsFunction& f, const RkhsFunction& g) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.centers.size(); ++i)
        for (std::size_t j = 0; j < g.centers.size(); ++j)
            v += f.weights[static_cast<Eigen::Index>(i)] *
                 g.weights[static_cast<Eigen::Index>(j)] *
                 eval_kernel(f.kernel, f.centers[i], g.centers[j]);
    return v;
}

int default_domain_grid(int dim) {
    if (dim == 1) return 512;
    if (dim == 2) return 128;
    return 32;
}

int default_bump_grid(int dim) { return dim == 1 ? 256 : 32; }

std::pair<Point, double> locate_argmax(const std::function<double(const Point&)>& f, int dim,
                                       int grid_per_axis) {
    struct Scored {
        double v;
        Point x;
    };
    std::vector<Scored> top;
    const std::size_t keep = 5;
    for_each_lattice_point(dim, grid_per_axis, [&](const Point& x) {
        const double v = f(x);
        if (top.size() < keep) {
            top.push_back({v, x});
            std::sort(top.begin(), top.end(),
                      [](const Scored& a, const Scored& b) { return a.v > b.v; });
        } else if (v > top.back().v) {
            top.back() = {v, x};
            std::sort(top.begin(), top.end(),
                      [](const Scored& a, const Scored& b) { return a.v > b.v; });
        }
    });
    Point best_x = top.front().x;
    double best_v = top.front().v;
    for (const Scored& s : top) {
        const Point refined = pattern_refine(f, s.x, 1.0 / grid_per_axis);
        const double v = f(refined);
        if (v > best_v) {
            best_v = v;
            best_x = refined;
        }
    }
    return {best_x, best_v};
}

RkhsFunction synth_expansion(const KernelSpec& spec, int n_centers, double target_norm,
                             std::uint64_t seed, double norm_budget_factor) {
    spec.validate();
    if (n_centers < 1) throw InvalidInputError("synth_expansion: n_centers must be >= 1");
    if (!(target_norm > 0.0)) throw InvalidInputError("synth_expansion: target_norm must be > 0");

    Rng rng(mix_seed(seed, hash_string("synth_expansion")));
    RkhsFunction f;
    f.kernel = spec;
    f.seed = seed;

    for (int attempt = 0;; ++attempt) {
        if (attempt >= 10)
            throw NumericalError("synth_expansion: degenerate centers after 10 retries");
        f.centers.clear();
        for (int i = 0; i < n_centers; ++i) {
            Point c(spec.dim);
            for (int a = 0; a < spec.dim; ++a) c[a] = rng.uniform01();
            f.centers.push_back(c);
        }
        if (attempt > 0) {
            for (Point& c : f.centers)
                for (int a = 0; a < spec.dim; ++a)
                    c[a] = std::clamp(c[a] + rng.uniform(-1e-6, 1e-6), 0.0, 1.0);
        }
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < f.centers.size(); ++i)
            for (std::size_t j = i + 1; j < f.centers.size(); ++j)
                min_dist = std::min(min_dist, (f.centers[i] - f.centers[j]).norm());
        if (n_centers > 1 && min_dist < 1e-12) continue;

        f.weights = Vector(n_centers);
        for (int i = 0; i < n_centers; ++i) f.weights[i] = rng.normal();
        const Matrix k = gram_matrix(spec, f.centers);
        const double q = f.weights.dot(k * f.weights);
        if (!(q > 1e-24)) continue;
        f.weights *= target_norm / std::sqrt(q);
        break;
    }

    f.norm_expansion = target_norm;
    f.M = norm_budget_factor * target_norm;
    f.argmax_grid_res = default_domain_grid(spec.dim);
    // Orient the expansion so its peak is a maximum (sign is arbitrary up to
    // the norm); a single section then reduces to +k(., c) with fmax = 1.
    auto [x_pos, v_pos] =
        locate_argmax([&](const Point& x) { return f.value(x); }, spec.dim, f.argmax_grid_res);
    auto [x_neg, v_neg] =
        locate_argmax([&](const Point& x) { return -f.value(x); }, spec.dim, f.argmax_grid_res);
    if (v_neg > v_pos) {
        f.weights = -f.weights;
        f.argmax = x_neg;
        f.fmax = v_neg;
    } else {
        f.argmax = x_pos;
        f.fmax = v_pos;
    }
    f.holder_xi = spec.holder_exponent();
    f.holder_l_hat = holder_witness(f, seed);
    return f;
}

RkhsFunction constant_instance(const KernelSpec& spec, double budget_m) {
    spec.validate();
    RkhsFunction f;
    f.kernel = spec;
    f.weights = Vector(0);
    f.M = budget_m;
    f.argmax = Point::Constant(spec.dim, 0.5);
    f.fmax = 0.0;
    f.argmax_grid_res = default_domain_grid(spec.dim);
    f.holder_xi = spec.holder_exponent();
    return f;
}

double interpolant_norm(const KernelSpec& spec, const std::vector<Point>& points,
                        const Vector& values, double eps) {
    if (points.size() != static_cast<std::size_t>(values.size()))
        throw InvalidInputError("interpolant_norm: size mismatch");
    if (values.size() == 0) return 0.0;
    const Eigen::Index n = values.size();
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = eval_kernel_distance(
                spec, (points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)])
                          .norm());
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    GramSystem sys(std::move(k), eps);
    const double q = values.dot(sys.solve(values));
    return std::sqrt(std::max(0.0, q));
}

double estimate_bump_norm(const KernelSpec& spec, int grid_n) {
    spec.validate();
    if (spec.dim > 2)
        throw InvalidInputError("estimate_bump_norm: supported for d <= 2 only");
    if (grid_n < 16) throw InvalidInputError("estimate_bump_norm: grid_n must be >= 16");

    // Regular grid over [-1,1]^d, grid_n intervals per axis; doubling grid_n
    // nests the grids, which makes the estimate monotone nondecreasing.
    std::vector<Point> pts;
    const Point origin = Point::Zero(spec.dim);
    if (spec.dim == 1) {
        for (int i = 0; i <= grid_n; ++i) {
            Point p(1);
            p[0] = -1.0 + 2.0 * i / grid_n;
            pts.push_back(p);
        }
    } else {
        for (int i = 0; i <= grid_n; ++i)
            for (int j = 0; j <= grid_n; ++j) {
                Point p(2);
                p << -1.0 + 2.0 * i / grid_n, -1.0 + 2.0 * j / grid_n;
                pts.push_back(p);
            }
    }
    Vector g(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        g[static_cast<Eigen::Index>(i)] = bump(pts[i], origin, 1.0);
    return interpolant_norm(spec, pts, g, 1e-8);
}

GrowthFit measure_growth(const RkhsFunction& f, double b_target) {
    const int dim = f.kernel.dim;
    const std::vector<Point> dirs = growth_directions(dim);
    std::vector<double> log_r, log_gap;
    std::vector<std::pair<double, double>> samples;  // (r, gap)
    const int n_radii = 24;
    for (int i = 0; i < n_radii; ++i) {
        const double r = 0.01 * std::pow(10.0, static_cast<double>(i) / (n_radii - 1));
        for (const Point& u : dirs) {
            const Point x = f.argmax + r * u;
            if (!in_unit_cube(x, 0.0)) continue;
            const double gap = f.gap(x);
            if (gap <= 1e-15) continue;
            log_r.push_back(std::log(r));
            log_gap.push_back(std::log(gap));
            samples.emplace_back(r, gap);
        }
    }
    GrowthFit fit;
    fit.b_target = b_target;
    if (log_r.size() < 8) return fit;
    fit.b_hat = ols_slope(log_r, log_gap);
    double clo = std::numeric_limits<double>::infinity(), chi = 0.0;
    for (const auto& [r, gap] : samples) {
        const double c = gap / std::pow(r, fit.b_hat);
        clo = std::min(clo, c);
        chi = std::max(chi, c);
    }
    fit.c_lower = clo;
    fit.c_upper = chi;
    fit.rho0 = 0.1;
    fit.valid = true;
    return fit;
}

RkhsFunction synth_growth_instance(const KernelSpec& spec, double b, std::uint64_t seed) {
    spec.validate();
    if (!(b > 0.0)) throw InvalidInputError("synth_growth_instance: b must be positive");

    const double r_edge = 0.3;
    GrowthFit last_fit;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Rng rng(mix_seed(seed, hash_string("synth_growth"), static_cast<std::uint64_t>(attempt)));
        const Point xstar = Point::Constant(spec.dim, 0.5);

        // Profile nodes: phi(r) = 1 - (r/r_edge)^b pinned on geometric radii,
        // plus a zero ring beyond the edge to keep the far field down.
        std::vector<Point> nodes{xstar};
        std::vector<double> vals{1.0};
        const std::vector<Point> dirs = growth_directions(spec.dim);
        const double rot = rng.uniform01();  // attempt-dependent jitter
        const int n_radii = 14;
        for (int i = 0; i < n_radii; ++i) {
            const double t = static_cast<double>(i) / (n_radii - 1);
            const double r = 0.006 * std::pow(r_edge / 0.006, t) * (1.0 + 0.03 * rot);
            for (const Point& u : dirs) {
                const Point x = xstar + std::min(r, r_edge) * u;
                if (!in_unit_cube(x, 0.0)) continue;
                nodes.push_back(x);
                vals.push_back(1.0 - std::pow(std::min(r, r_edge) / r_edge, b));
            }
        }
        for (double rf : {0.36, 0.45}) {
            for (const Point& u : dirs) {
                const Point x = xstar + rf * u;
                if (!in_unit_cube(x, 0.0)) continue;
                nodes.push_back(x);
                vals.push_back(0.0);
            }
        }

        Vector y = Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
        Vector alpha;
        try {
            GramSystem sys(spec, nodes, 1e-10);
            alpha = sys.solve(y);
        } catch (const NumericalError&) {
            GramSystem sys(spec, nodes, 1e-8);
            alpha = sys.solve(y);
        }

        RkhsFunction f;
        f.kernel = spec;
        f.seed = seed;
        f.centers = nodes;
        f.weights = alpha;
        const Matrix k = gram_matrix(spec, nodes);
        const double q = std::max(0.0, alpha.dot(k * alpha));
        if (!(q > 1e-20)) continue;
        f.weights /= std::sqrt(q);  // norm 1
        f.norm_expansion = 1.0;
        f.M = 2.0;
        f.argmax_grid_res = default_domain_grid(spec.dim);
        auto [xm, vm] = locate_argmax([&](const Point& x) { return f.value(x); }, spec.dim,
                                      f.argmax_grid_res);
        f.argmax = xm;
        f.fmax = vm;
        f.holder_xi = spec.holder_exponent();

        last_fit = measure_growth(f, b);
        if (last_fit.valid && std::abs(last_fit.b_hat - b) <= 0.25) {
            f.growth = last_fit;
            f.holder_l_hat = holder_witness(f, seed);
            return f;
        }
    }
    throw NumericalError("synth_growth_instance: shaping failed, achieved b_hat=" +
                         fmt_g17(last_fit.b_hat) + " for target b=" + fmt_g17(b));
}

double holder_witness(const RkhsFunction& f, std::uint64_t seed, int n_pairs) {
    Rng rng(mix_seed(seed, hash_string("holder_witness")));
    const int dim = f.kernel.dim;
    const double xi = f.kernel.holder_exponent();
    double worst = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        Point x(dim), z(dim);
        for (int a = 0; a < dim; ++a) {
            x[a] = rng.uniform01();
            z[a] = rng.uniform01();
        }
        const double dist = (x - z).norm();
        if (dist < 1e-12) continue;
        worst = std::max(worst, std::abs(f.value(x) - f.value(z)) / std::pow(dist, xi));
    }
    return worst;
}

RkhsFunction perturb(const RkhsFunction& f, const Point& z, double delta, double c,
                     double lambda, int grid_per_axis) {
    if (f.kernel.family != KernelFamily::Matern)
        throw InvalidInputError("perturb: Matern kernels only");
    if (!(delta > 0.0) || !(c > 1.0)) throw InvalidInputError("perturb: need delta > 0, c > 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidInputError("perturb: lambda in (0,1)");
    if (std::abs((1.0 - lambda) * f.M - f.declared_norm()) > 1e-9 * std::max(1.0, f.M))
        throw ContractError("perturb: declared norm != (1-lambda) M");

    const double gap_z = f.gap(z);
    if (!(gap_z >= delta - 1e-12 && gap_z <= c * delta + 1e-12))
        throw InvalidInputError("perturb: z outside the annulus [Delta, c*Delta]");

    const double m_nu = estimate_bump_norm(f.kernel, default_bump_grid(f.kernel.dim));
    const double w =
        std::pow((c + 1.0) * delta * m_nu / (lambda * f.M), 1.0 / f.kernel.nu);

    // Ball containment (Remark on the annulus diameter): every lattice point
    // of the validation grid inside B(z, w) must carry a gap in [Delta, c*Delta].
    const int n = grid_per_axis > 0 ? grid_per_axis : (f.kernel.dim == 1 ? 10000 : 100);
    bool contained = true;
    for_each_lattice_point(f.kernel.dim, n, [&](const Point& x) {
        if (!contained) return;
        if ((x - z).norm() >= w) return;
        const double g = f.gap(x);
        if (!(g >= delta - 1e-9 && g <= c * delta + 1e-9)) contained = false;
    });
    if (!contained)
        throw ContractError("perturb: B(z,w) not contained in the annulus (w=" + fmt_g17(w) +
                            ")");

    RkhsFunction out = f;
    BumpTerm term;
    term.amplitude = (c + 1.0) * delta;
    term.center = z;
    term.radius = w;
    out.bumps.push_back(term);
    // Scaling bound: |amp * g(./w)| <= amp * w^{-nu} M_nu = lambda * M by the
    // choice of w.
    out.norm_bump_estimate = f.norm_bump_estimate + term.amplitude * m_nu / std::pow(w, f.kernel.nu);

    auto [xm, vm] = locate_argmax([&](const Point& x) { return out.value(x); }, f.kernel.dim,
                                  f.argmax_grid_res > 0 ? f.argmax_grid_res
                                                        : default_domain_grid(f.kernel.dim));
    // The bump peak is a known candidate; keep whichever is higher.
    if (out.value(z) > vm) {
        xm = z;
        vm = out.value(z);
    }
    out.argmax = xm;
    out.fmax = vm;

    out.holder_l_hat = holder_witness(out, f.seed);

    out.perturbation.valid = true;
    out.perturbation.z = z;
    out.perturbation.radius = w;
    out.perturbation.delta = delta;
    out.perturbation.c_annulus = c;
    // The additive construction deviates by the full amplitude (c+1) Delta at
    // z, so the deviation constant of the realized perturbation is c+1.
    out.perturbation.c_deviation = c + 1.0;
    return out;
}

PerturbationCheck validate_perturbation(const RkhsFunction& base, const RkhsFunction& perturbed,
                                        int grid_per_axis, double tolerance) {
    if (!perturbed.perturbation.valid)
        throw InvalidInputError("validate_perturbation: no perturbation metadata");
    const PerturbationMeta& meta = perturbed.perturbation;
    const int dim = base.kernel.dim;
    const int n = grid_per_axis > 0 ? grid_per_axis : (dim == 1 ? 10000 : 100);

    PerturbationCheck chk;
    chk.tolerance = tolerance;
    chk.p1_equal_outside = true;
    chk.p3_deviation = true;
    chk.p3_base_gap = true;
    chk.p3_perturbed_gap = true;

    const double dev_bound = meta.c_deviation * meta.delta;
    double best_in = -std::numeric_limits<double>::infinity();
    double best_out = -std::numeric_limits<double>::infinity();
    double best_base_in = -std::numeric_limits<double>::infinity();
    double best_base_out = -std::numeric_limits<double>::infinity();
    int count = 0;
    for_each_lattice_point(dim, n, [&](const Point& x) {
        ++count;
        const double fb = base.value(x);
        const double fp = perturbed.value(x);
        const bool inside = (x - meta.z).norm() < meta.radius;
        if (inside) {
            if (std::abs(fb - fp) > dev_bound + tolerance) chk.p3_deviation = false;
            if (base.fmax - fb < meta.delta - tolerance) chk.p3_base_gap = false;
            best_in = std::max(best_in, fp);
            best_base_in = std::max(best_base_in, fb);
        } else {
            if (std::abs(fb - fp) > tolerance) chk.p1_equal_outside = false;
            if (perturbed.fmax - fp < meta.delta - tolerance) chk.p3_perturbed_gap = false;
            best_out = std::max(best_out, fp);
            best_base_out = std::max(best_base_out, fb);
        }
    });
    chk.grid_points = count;
    chk.p2_argmax_inside = best_in > best_out;
    chk.p2_base_argmax_outside = best_base_out > best_base_in;
    return chk;
}

std::optional<std::pair<Point, double>> find_perturbation_site(const RkhsFunction& f,
                                                               double delta, double c,
                                                               double lambda,
                                                               int grid_per_axis) {
    const int dim = f.kernel.dim;
    const int n = grid_per_axis > 0 ? grid_per_axis : default_domain_grid(dim);
    for (double scale : {1.0, 0.75, 0.5, 1.5, 0.35, 0.25, 2.0, 0.15, 0.1}) {
        const double d = delta * scale;
        // Prefer sites near the middle of the annulus.
        std::vector<std::pair<double, Point>> candidates;
        for_each_lattice_point(dim, n, [&](const Point& x) {
            const double g = f.gap(x);
            if (g >= d && g <= c * d)
                candidates.emplace_back(std::abs(g - 0.5 * (1.0 + c) * d), x);
        });
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::size_t tries = std::min<std::size_t>(candidates.size(), 64);
        for (std::size_t i = 0; i < tries; ++i) {
            try {
                perturb(f, candidates[i].second, d, c, lambda);
                return std::make_pair(candidates[i].second, d);
            } catch (const Error&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

NoisyOracle::NoisyOracle(RkhsFunction target, double sigma, std::uint64_t seed)
    : target_(std::move(target)),
      sigma_(sigma),
      seed_(seed),
      rng_(mix_seed(seed, hash_string("oracle"))) {
    if (!(sigma >= 0.0)) throw InvalidInputError("NoisyOracle: sigma must be >= 0");
}

double NoisyOracle::observe(const Point& x) {
    if (!in_unit_cube(x)) throw InvalidInputError("NoisyOracle: query outside [0,1]^d");
    ++query_count_;
    const double f = target_.value(x);
    if (sigma_ == 0.0) return f;
    return f + sigma_ * rng_.normal();
}

}  // namespace kbopt
