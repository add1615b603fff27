#include "kbopt/kernel.hpp"

#include <cmath>
#include <utility>

namespace kbopt {

namespace {

constexpr double kZeroDistance = 1e-14;

double matern_half_integer(double nu, double s) {
    // s = sqrt(2 nu) r / theta
    if (nu == 0.5) return std::exp(-s);
    if (nu == 1.5) return (1.0 + s) * std::exp(-s);
    // nu == 2.5
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double matern_general(double nu, double s) {
    // 2^{1-nu}/Gamma(nu) * s^nu * K_nu(s)
    const double scale = std::pow(2.0, 1.0 - nu) / std::tgamma(nu);
    return scale * std::pow(s, nu) * std::cyl_bessel_k(nu, s);
}

}  // namespace

double KernelSpec::holder_exponent() const {
    if (family == KernelFamily::SquaredExponential) return 1.0;
    return std::min(nu, 1.0);
}

void KernelSpec::validate() const {
    if (dim < 1) throw InvalidInputError("kernel: dim must be >= 1");
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidInputError("kernel: theta must be positive");
    if (family == KernelFamily::Matern && (!(nu > 0.0) || !std::isfinite(nu)))
        throw InvalidInputError("kernel: nu must be positive");
}

double eval_kernel_distance(const KernelSpec& spec, double r) {
    if (!std::isfinite(r) || r < 0.0)
        throw InvalidInputError("eval_kernel: non-finite or negative distance");
    // Treat vanishing distances as zero; avoids the 0*log(0) limit in the
    // Bessel branch.
    if (r < kZeroDistance) return 1.0;
    if (spec.family == KernelFamily::SquaredExponential) {
        return std::exp(-r * r / (2.0 * spec.theta * spec.theta));
    }
    const double s = std::sqrt(2.0 * spec.nu) * r / spec.theta;
    if (spec.nu == 0.5 || spec.nu == 1.5 || spec.nu == 2.5) {
        return matern_half_integer(spec.nu, s);
    }
    return matern_general(spec.nu, s);
}

double eval_kernel(const KernelSpec& spec, const Point& x, const Point& z) {
    if (x.size() != spec.dim || z.size() != spec.dim)
        throw InvalidInputError("eval_kernel: point dimension mismatch");
    if (!x.allFinite() || !z.allFinite())
        throw InvalidInputError("eval_kernel: non-finite input point");
    return eval_kernel_distance(spec, (x - z).norm());
}

Matrix gram_matrix(const KernelSpec& spec, const std::vector<Point>& points) {
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = eval_kernel(spec, points[i], points[j]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

GramSystem::GramSystem(const KernelSpec& spec, std::vector<Point> points, double tau)
    : gram_(gram_matrix(spec, points)), tau_(tau) {
    factorize();
}

GramSystem::GramSystem(Matrix gram, double tau) : gram_(std::move(gram)), tau_(tau) {
    factorize();
}

void GramSystem::factorize() {
    if (gram_.rows() != gram_.cols())
        throw InvalidInputError("GramSystem: gram matrix must be square");
    if (!(tau_ > 0.0)) throw InvalidInputError("GramSystem: tau must be positive");
    Matrix reg = gram_;
    reg.diagonal().array() += tau_;
    llt_.compute(reg);
    if (llt_.info() != Eigen::Success) {
        // Gershgorin bounds as a condition diagnostic.
        double lo = reg(0, 0), hi = reg(0, 0);
        for (Eigen::Index i = 0; i < reg.rows(); ++i) {
            const double off = reg.row(i).cwiseAbs().sum() - std::abs(reg(i, i));
            lo = std::min(lo, reg(i, i) - off);
            hi = std::max(hi, reg(i, i) + off);
        }
        throw NumericalError("GramSystem: factorization of (gram + tau*I) failed, n=" +
                             std::to_string(reg.rows()) + " tau=" + fmt_g17(tau_) +
                             " gershgorin=[" + fmt_g17(lo) + ", " + fmt_g17(hi) + "]");
    }
}

Vector GramSystem::solve(const Vector& rhs) const {
    if (rhs.size() != gram_.rows())
        throw InvalidInputError("GramSystem::solve: rhs length mismatch");
    return llt_.solve(rhs);
}

Matrix GramSystem::reconstruct() const {
    Matrix l = llt_.matrixL();
    return l * l.transpose();
}

}  // namespace kbopt
