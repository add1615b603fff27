#ifndef KBOPT_PARTITION_HPP
#define KBOPT_PARTITION_HPP

#include <cstdint>

#include "kbopt/common.hpp"

namespace kbopt {

/// Node (h, i) of the dyadic tree over [0,1]^d; i is 1-based within depth h.
/// Children of (h, i) are (h+1, 2i-1) and (h+1, 2i).
struct CellId {
    int h = 0;
    std::int64_t i = 1;

    CellId left_child() const { return {h + 1, 2 * i - 1}; }
    CellId right_child() const { return {h + 1, 2 * i}; }
    CellId parent() const { return {h - 1, (i + 1) / 2}; }

    friend bool operator==(const CellId& a, const CellId& b) {
        return a.h == b.h && a.i == b.i;
    }
};

struct Box {
    Vector lo;
    Vector hi;
    double volume() const { return (hi - lo).prod(); }
};

struct TreeGeometry {
    int dim = 1;
    double rho = 0.5;      // per-depth contraction factor
    double v_outer = 1.0;  // cell subset of B(center, v_outer * rho^h)
    double v_inner = 0.5;  // B(center, v_inner * rho^h) subset of cell
    int h_max = 40;
};

// rho = 2^{-1/d}; v_outer = sqrt(d). For d = 1 the inner constant 1/2 is
// tight; for d >= 2 the mid-cycle depths (where only some axes have been
// halved) force the smaller uniform constant 1/4.
TreeGeometry geometry_constants(int dim);

// Deterministic box for (h, i): repeated bisection of the longest axis, ties
// broken by lowest axis index, left child takes the lower half.
Box cell_region(const TreeGeometry& geom, CellId id);

// Geometric center of the cell; the representative point of (h, i).
Point cell_center(const TreeGeometry& geom, CellId id);

// Half-open membership [lo, hi), closed on the domain's upper faces.
bool cell_contains(const TreeGeometry& geom, CellId id, const Point& x);

}  // namespace kbopt

#endif
