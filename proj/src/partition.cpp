#include "kbopt/partition.hpp"

#include <cmath>

namespace kbopt {

namespace {

void check_id(const TreeGeometry& geom, CellId id) {
    if (id.h < 0) throw InvalidInputError("cell id: negative depth");
    if (id.h > geom.h_max)
        throw InvalidInputError("cell id: depth " + std::to_string(id.h) +
                                " exceeds h_max " + std::to_string(geom.h_max));
    if (id.i < 1 || (id.h < 63 && id.i > (std::int64_t(1) << id.h)))
        throw InvalidInputError("cell id: index out of range at depth " +
                                std::to_string(id.h));
}

int longest_axis(const Box& box) {
    int axis = 0;
    double best = box.hi[0] - box.lo[0];
    for (int a = 1; a < box.lo.size(); ++a) {
        const double len = box.hi[a] - box.lo[a];
        if (len > best) {
            best = len;
            axis = a;
        }
    }
    return axis;
}

}  // namespace

TreeGeometry geometry_constants(int dim) {
    if (dim < 1) throw InvalidInputError("geometry_constants: dim must be >= 1");
    TreeGeometry g;
    g.dim = dim;
    g.rho = std::pow(2.0, -1.0 / dim);
    g.v_outer = std::sqrt(static_cast<double>(dim));
    g.v_inner = (dim == 1) ? 0.5 : 0.25;
    g.h_max = 40;
    return g;
}

Box cell_region(const TreeGeometry& geom, CellId id) {
    check_id(geom, id);
    Box box{Vector::Zero(geom.dim), Vector::Ones(geom.dim)};
    // Walk root -> (h, i); bit k of (i-1), most significant first, selects
    // the right child at depth k+1. Midpoints of dyadic doubles are exact.
    const std::uint64_t path = static_cast<std::uint64_t>(id.i - 1);
    for (int depth = 0; depth < id.h; ++depth) {
        const int axis = longest_axis(box);
        const double mid = 0.5 * (box.lo[axis] + box.hi[axis]);
        const bool right = (path >> (id.h - 1 - depth)) & 1u;
        if (right) {
            box.lo[axis] = mid;
        } else {
            box.hi[axis] = mid;
        }
    }
    return box;
}

Point cell_center(const TreeGeometry& geom, CellId id) {
    const Box box = cell_region(geom, id);
    return 0.5 * (box.lo + box.hi);
}

bool cell_contains(const TreeGeometry& geom, CellId id, const Point& x) {
    const Box box = cell_region(geom, id);
    for (int a = 0; a < geom.dim; ++a) {
        if (x[a] < box.lo[a]) return false;
        if (x[a] > box.hi[a]) return false;
        if (x[a] == box.hi[a] && box.hi[a] != 1.0) return false;
    }
    return true;
}

}  // namespace kbopt
