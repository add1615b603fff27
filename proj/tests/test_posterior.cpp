#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kbopt/posterior.hpp"
#include "kbopt/rng.hpp"
#include "support/posterior_oracle.hpp"

using namespace kbopt;

namespace {

KernelSpec matern(double nu, int dim = 1) {
    KernelSpec s;
    s.nu = nu;
    s.dim = dim;
    return s;
}

Point pt(double x) {
    Point p(1);
    p[0] = x;
    return p;
}

PosteriorParams params_with(double tau, long long n = 100) {
    PosteriorParams p;
    p.tau = tau;
    p.n = n;
    p.sigma = 1.0;
    return p;
}

std::vector<Point> random_points(Rng& rng, int count, int dim) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) {
        Point p(dim);
        for (int a = 0; a < dim; ++a) p[a] = rng.uniform01();
        pts.push_back(p);
    }
    return pts;
}

}  // namespace

TEST_CASE("empty evidence gives the prior") {
    const auto post = compute_posterior(matern(1.5), {pt(0.2), pt(0.8)}, {}, Vector(0),
                                        params_with(4.0));
    CHECK(post.mu[0] == 0.0);
    CHECK(post.mu[1] == 0.0);
    CHECK(post.sigma[0] == doctest::Approx(0.5).epsilon(1e-15));  // tau^{-1/2}
    CHECK(post.sigma[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(post.batch_size == 0);
}

TEST_CASE("single observation closed form") {
    Vector y(1);
    y[0] = 2.0;
    const auto post =
        compute_posterior(matern(1.5), {pt(0.3)}, {pt(0.3)}, y, params_with(1.0));
    CHECK(post.mu[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(post.sigma[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("repeated-sampling variance law sigma^2 = 1/(s + tau)") {
    for (double tau : {0.1, 1.0}) {
        for (int s : {1, 2, 5, 10}) {
            std::vector<Point> evidence(s, pt(0.4));
            Vector y = Vector::Ones(s);
            const auto post =
                compute_posterior(matern(0.5), {pt(0.4)}, evidence, y, params_with(tau));
            const double v = post.sigma[0] * post.sigma[0];
            CHECK(std::abs(v - 1.0 / (s + tau)) <= 1e-10);
        }
    }
}

TEST_CASE("posterior std never exceeds the prior scale") {
    Rng rng(17);
    const KernelSpec spec = matern(1.1);
    const auto points = random_points(rng, 12, 1);
    std::vector<Point> ev;
    Vector y(6);
    for (int i = 0; i < 6; ++i) {
        ev.push_back(points[static_cast<std::size_t>(i)]);
        y[i] = rng.normal();
    }
    for (double tau : {0.1, 1.0}) {
        const auto post = compute_posterior(spec, points, ev, y, params_with(tau));
        for (Eigen::Index i = 0; i < post.sigma.size(); ++i)
            CHECK(post.sigma[i] <= std::sqrt(1.0 / tau) + 1e-12);
    }
}

TEST_CASE("evidence outside the active set is a contract violation") {
    Vector y(1);
    y[0] = 0.5;
    CHECK_THROWS_AS(
        compute_posterior(matern(1.5), {pt(0.3)}, {pt(0.31)}, y, params_with(1.0)),
        ContractError);
}

TEST_CASE("beta modes") {
    // decaying width: sqrt(2 log(|P| n^3) / t)
    CHECK(confidence_width(BetaMode::LogDecay, 4, 3, 100, 0.0, 0.0) ==
          doctest::Approx(std::sqrt(2.0 * std::log(4.0 * 1e6) / 3.0)).epsilon(1e-12));
    // concentration width: sqrt(2 sigma^2 log(|P| pi^2 t^2 / (3 delta))), delta = 1/n
    const double expected =
        0.2 * std::sqrt(2.0 * std::log(4.0 * M_PI * M_PI * 9.0 * 100.0 / 3.0));
    CHECK(confidence_width(BetaMode::Concentration, 4, 3, 100, 0.0, 0.2) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mu is linear in y") {
    Rng rng(23);
    const auto points = random_points(rng, 8, 1);
    std::vector<Point> ev{points[1], points[3], points[5]};
    Vector y(3);
    for (int i = 0; i < 3; ++i) y[i] = rng.normal();
    const auto p1 = compute_posterior(matern(1.5), points, ev, y, params_with(0.5));
    const auto p2 = compute_posterior(matern(1.5), points, ev, Vector(2.0 * y), params_with(0.5));
    for (Eigen::Index i = 0; i < p1.mu.size(); ++i) {
        CHECK(p2.mu[i] == doctest::Approx(2.0 * p1.mu[i]).epsilon(1e-12));
        CHECK(p2.sigma[i] == doctest::Approx(p1.sigma[i]).epsilon(1e-12));
    }
}

TEST_CASE("monotone shrinkage: appending evidence never raises sigma") {
    Rng rng(29);
    for (int run = 0; run < 100; ++run) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        const KernelSpec spec = matern(run % 2 == 0 ? 1.5 : 1.1, dim);
        const auto points = random_points(rng, 6, dim);
        std::vector<Point> ev;
        Vector y(0);
        auto prev = compute_posterior(spec, points, ev, y, params_with(1.0));
        for (int step = 0; step < 5; ++step) {
            ev.push_back(points[rng.next_u64() % points.size()]);
            y.conservativeResize(y.size() + 1);
            y[y.size() - 1] = rng.normal();
            const auto cur = compute_posterior(spec, points, ev, y, params_with(1.0));
            for (Eigen::Index i = 0; i < cur.sigma.size(); ++i)
                CHECK(cur.sigma[i] <= prev.sigma[i] + 1e-10);
            prev = cur;
        }
    }
}

TEST_CASE("empty evidence agrees with the oracle exactly") {
    const auto points = std::vector<Point>{pt(0.1), pt(0.6)};
    const auto post = compute_posterior(matern(1.1), points, {}, Vector(0), params_with(0.5));
    const auto ref = kbopt::testing::posterior_oracle(matern(1.1), points, {}, Vector(0), 0.5);
    for (Eigen::Index i = 0; i < 2; ++i) {
        CHECK(post.mu[i] == ref.mu[i]);
        CHECK(post.sigma[i] == ref.sigma[i]);
    }
}

TEST_CASE("agreement with the dense-inverse oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 3);
        const KernelSpec spec = matern(trial % 2 == 0 ? 1.5 : 0.5, dim);
        const int n_points = 2 + static_cast<int>(rng.next_u64() % 10);
        const auto points = random_points(rng, n_points, dim);
        const int m = static_cast<int>(rng.next_u64() % 20);
        std::vector<Point> ev;
        Vector y(m);
        for (int i = 0; i < m; ++i) {
            ev.push_back(points[rng.next_u64() % points.size()]);
            y[i] = rng.normal();
        }
        const double tau = trial % 2 == 0 ? 1.0 : 0.1;
        const auto post = compute_posterior(spec, points, ev, y, params_with(tau));
        const auto ref = kbopt::testing::posterior_oracle(spec, points, ev, y, tau);
        for (Eigen::Index i = 0; i < post.mu.size(); ++i) {
            CHECK(std::abs(post.mu[i] - ref.mu[i]) <= 1e-8);
            CHECK(std::abs(post.sigma[i] - ref.sigma[i]) <= 1e-8);
        }
    }
}

TEST_CASE("batch engine matches the multiset path exactly") {
    Rng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        const KernelSpec spec = matern(1.1, dim);
        const auto anchors = random_points(rng, 5 + static_cast<int>(rng.next_u64() % 6), dim);
        PosteriorParams params = params_with(trial % 2 == 0 ? 1.0 : 0.1, 64);
        BatchPosterior engine(spec, anchors, params);
        std::vector<Point> ev;
        std::vector<double> ys;
        const int m = 1 + static_cast<int>(rng.next_u64() % 30);
        for (int i = 0; i < m; ++i) {
            const std::size_t pick = rng.next_u64() % anchors.size();
            const double y = rng.normal();
            engine.add_observation(pick, y);
            ev.push_back(anchors[pick]);
            ys.push_back(y);
        }
        const auto fast = engine.summarize();
        const auto slow = compute_posterior(spec, anchors, ev,
                                            Eigen::Map<Vector>(ys.data(), m), params);
        CHECK(fast.beta == doctest::Approx(slow.beta).epsilon(1e-12));
        for (Eigen::Index i = 0; i < fast.mu.size(); ++i) {
            CHECK(fast.mu[i] == doctest::Approx(slow.mu[i]).epsilon(1e-9));
            CHECK(std::abs(fast.sigma[i] - slow.sigma[i]) <= 1e-9);
        }
    }
}
