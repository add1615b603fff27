#ifndef KBOPT_TRACE_HPP
#define KBOPT_TRACE_HPP

#include <string>
#include <vector>

#include "kbopt/common.hpp"

namespace kbopt {

struct RefineEvent {
    long long query_index = 0;  // number of queries issued before the refine
    int old_depth = 0;
    int survivors = 0;
    int new_active_size = 0;
};

/// Per-query record of a strategy run. cumulative is nondecreasing and
/// instant regret is nonnegative up to the argmax grid tolerance.
struct RegretTrace {
    std::vector<Point> queried_points;
    std::vector<double> observations;
    std::vector<double> instant_regret;
    std::vector<double> cumulative;
    std::vector<int> depth;
    std::vector<int> active_size;
    std::vector<RefineEvent> refine_events;

    void append(const Point& x, double y, double regret, int h, int n_active);
    long long size() const { return static_cast<long long>(queried_points.size()); }
    double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

// Columnar text: one row per query
//   step x... y instant_regret cumulative_regret depth active_size
// followed by refine-event rows. The header carries the caller's config line.
std::string serialize_trace(const RegretTrace& trace, const std::string& config_line);
RegretTrace parse_trace(const std::string& text, int dim);

}  // namespace kbopt

#endif
