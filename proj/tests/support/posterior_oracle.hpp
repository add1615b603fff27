// Test-only reference implementations, kept independent of the library's
// Cholesky-based solve path: dense Gauss-Jordan inversion and the posterior
// formulas written out explicitly against the inverse.
#ifndef KBOPT_TESTS_POSTERIOR_ORACLE_HPP
#define KBOPT_TESTS_POSTERIOR_ORACLE_HPP

#include "kbopt/kernel.hpp"

namespace kbopt::testing {

// Gauss-Jordan elimination with partial pivoting.
Matrix dense_inverse(Matrix a);

struct OracleResult {
    Vector mu;
    Vector sigma;
};

OracleResult posterior_oracle(const KernelSpec& spec, const std::vector<Point>& points,
                              const std::vector<Point>& evidence_x, const Vector& evidence_y,
                              double tau);

}  // namespace kbopt::testing

#endif
