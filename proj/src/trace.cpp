#include "kbopt/trace.hpp"

#include <sstream>

namespace kbopt {

void RegretTrace::append(const Point& x, double y, double regret, int h, int n_active) {
    queried_points.push_back(x);
    observations.push_back(y);
    instant_regret.push_back(regret);
    cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + regret);
    depth.push_back(h);
    active_size.push_back(n_active);
}

std::string serialize_trace(const RegretTrace& trace, const std::string& config_line) {
    std::string s;
    s += "# kbopt-trace v1\n";
    s += "# " + config_line + "\n";
    s += "# columns: step x... y instant_regret cumulative_regret depth active_size\n";
    for (std::size_t t = 0; t < trace.queried_points.size(); ++t) {
        s += std::to_string(t + 1);
        s += ' ';
        s += fmt_point(trace.queried_points[t]);
        s += ' ';
        s += fmt_g17(trace.observations[t]);
        s += ' ';
        s += fmt_g17(trace.instant_regret[t]);
        s += ' ';
        s += fmt_g17(trace.cumulative[t]);
        s += ' ';
        s += std::to_string(trace.depth[t]);
        s += ' ';
        s += std::to_string(trace.active_size[t]);
        s += '\n';
    }
    for (const RefineEvent& e : trace.refine_events) {
        s += "refine " + std::to_string(e.query_index) + ' ' + std::to_string(e.old_depth) +
             ' ' + std::to_string(e.survivors) + ' ' + std::to_string(e.new_active_size) +
             '\n';
    }
    return s;
}

RegretTrace parse_trace(const std::string& text, int dim) {
    RegretTrace trace;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string first;
        ss >> first;
        if (first == "refine") {
            RefineEvent e;
            ss >> e.query_index >> e.old_depth >> e.survivors >> e.new_active_size;
            trace.refine_events.push_back(e);
            continue;
        }
        Point x(dim);
        for (int a = 0; a < dim; ++a) ss >> x[a];
        double y, inst, cum;
        int h, active;
        ss >> y >> inst >> cum >> h >> active;
        if (!ss) throw InvalidInputError("trace parse error: " + line);
        trace.queried_points.push_back(x);
        trace.observations.push_back(y);
        trace.instant_regret.push_back(inst);
        trace.cumulative.push_back(cum);
        trace.depth.push_back(h);
        trace.active_size.push_back(active);
    }
    return trace;
}

}  // namespace kbopt
