#ifndef KBOPT_KERNEL_HPP
#define KBOPT_KERNEL_HPP

#include <vector>

#include "kbopt/common.hpp"

namespace kbopt {

enum class KernelFamily { Matern, SquaredExponential };

/// Isotropic unit-variance kernel on [0,1]^d.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern;
    double nu = 1.5;     // smoothness, Matern only
    double theta = 1.0;  // lengthscale
    int dim = 1;

    // Holder exponent of RKHS members: min{nu, 1}; 1 for squared-exponential.
    double holder_exponent() const;
    void validate() const;
};

// Kernel value at distance r. k(0) = 1 for every family.
double eval_kernel_distance(const KernelSpec& spec, double r);

// k(x, z) with domain and finiteness checks.
double eval_kernel(const KernelSpec& spec, const Point& x, const Point& z);

// Symmetric Gram matrix with exact unit diagonal.
Matrix gram_matrix(const KernelSpec& spec, const std::vector<Point>& points);

/// Cached Cholesky factorization of (gram + tau*I), rebuilt from scratch per
/// batch; batches stay small because RefinePartition resets evidence.
class GramSystem {
public:
    GramSystem(const KernelSpec& spec, std::vector<Point> points, double tau);
    GramSystem(Matrix gram, double tau);

    Vector solve(const Vector& rhs) const;
    // L L^T, for factorization-accuracy checks.
    Matrix reconstruct() const;

    const Matrix& gram() const { return gram_; }
    double tau() const { return tau_; }
    Eigen::Index size() const { return gram_.rows(); }

private:
    void factorize();

    Matrix gram_;
    double tau_ = 0.0;
    Eigen::LLT<Matrix> llt_;
};

}  // namespace kbopt

#endif
