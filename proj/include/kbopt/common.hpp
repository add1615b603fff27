#ifndef KBOPT_COMMON_HPP
#define KBOPT_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite or out-of-domain arguments.
struct InvalidInputError : Error {
    using Error::Error;
};

// Factorization failures, negative variances beyond round-off, shaping failures.
struct NumericalError : Error {
    using Error::Error;
};

// Caller broke a documented contract (evidence outside active set, norm bookkeeping).
struct ContractError : Error {
    using Error::Error;
};

// Refinement loop guard tripped (should be unreachable in valid configs).
struct StallError : Error {
    using Error::Error;
};

// Shortest-round-trip formatting: 17 significant digits always parse back
// to the identical double, which keeps serialized files bit-stable.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline std::string fmt_point(const Point& p) {
    std::string s;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i > 0) s += ' ';
        s += fmt_g17(p[i]);
    }
    return s;
}

inline bool in_unit_cube(const Point& x, double slack = 1e-12) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] >= -slack && x[i] <= 1.0 + slack)) return false;
    }
    return true;
}

}  // namespace kbopt

#endif
