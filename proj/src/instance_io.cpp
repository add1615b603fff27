#include "kbopt/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace kbopt {

namespace {

struct LineReader {
    std::istringstream in;
    std::string line;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    bool next() {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidInputError("instance parse error at line " + std::to_string(line_no) +
                                ": " + why);
    }
};

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

double to_double(LineReader& r, const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        r.fail("bad float '" + s + "'");
    }
}

Point parse_point(LineReader& r, const std::vector<std::string>& ts, std::size_t from, int dim) {
    if (ts.size() != from + static_cast<std::size_t>(dim)) r.fail("wrong coordinate count");
    Point p(dim);
    for (int a = 0; a < dim; ++a) p[a] = to_double(r, ts[from + static_cast<std::size_t>(a)]);
    return p;
}

void expect_key(LineReader& r, const std::vector<std::string>& ts, const std::string& key,
                std::size_t n_vals) {
    if (ts.empty() || ts[0] != key) r.fail("expected '" + key + "'");
    if (n_vals != static_cast<std::size_t>(-1) && ts.size() != n_vals + 1)
        r.fail("wrong field count for '" + key + "'");
}

}  // namespace

std::string serialize_instance(const RkhsFunction& f) {
    std::string s;
    s += "kbopt-instance v1\n";
    s += std::string("kernel ") +
         (f.kernel.family == KernelFamily::Matern ? "matern" : "se") + "\n";
    if (f.kernel.family == KernelFamily::Matern) s += "nu " + fmt_g17(f.kernel.nu) + "\n";
    s += "theta " + fmt_g17(f.kernel.theta) + "\n";
    s += "dim " + std::to_string(f.kernel.dim) + "\n";
    s += "m " + fmt_g17(f.M) + "\n";
    s += "norm_expansion " + fmt_g17(f.norm_expansion) + "\n";
    s += "norm_bump_estimate " + fmt_g17(f.norm_bump_estimate) + "\n";
    s += "argmax " + fmt_point(f.argmax) + "\n";
    s += "fmax " + fmt_g17(f.fmax) + "\n";
    s += "argmax_grid " + std::to_string(f.argmax_grid_res) + "\n";
    s += "seed " + std::to_string(f.seed) + "\n";
    s += "holder_xi " + fmt_g17(f.holder_xi) + "\n";
    s += "holder_l_hat " + fmt_g17(f.holder_l_hat) + "\n";
    s += "centers " + std::to_string(f.centers.size()) + "\n";
    for (std::size_t i = 0; i < f.centers.size(); ++i)
        s += "c " + fmt_g17(f.weights[static_cast<Eigen::Index>(i)]) + " " +
             fmt_point(f.centers[i]) + "\n";
    s += "bumps " + std::to_string(f.bumps.size()) + "\n";
    for (const BumpTerm& b : f.bumps)
        s += "b " + fmt_g17(b.amplitude) + " " + fmt_g17(b.radius) + " " +
             fmt_point(b.center) + "\n";
    if (f.growth.valid)
        s += "growth " + fmt_g17(f.growth.b_target) + " " + fmt_g17(f.growth.b_hat) + " " +
             fmt_g17(f.growth.c_lower) + " " + fmt_g17(f.growth.c_upper) + " " +
             fmt_g17(f.growth.rho0) + "\n";
    if (f.perturbation.valid)
        s += "perturbation " + fmt_g17(f.perturbation.delta) + " " +
             fmt_g17(f.perturbation.c_annulus) + " " + fmt_g17(f.perturbation.c_deviation) +
             " " + fmt_g17(f.perturbation.radius) + " " + fmt_point(f.perturbation.z) + "\n";
    s += "end\n";
    return s;
}

RkhsFunction parse_instance(const std::string& text) {
    LineReader r(text);
    if (!r.next() || r.line != "kbopt-instance v1") r.fail("missing header");

    RkhsFunction f;
    if (!r.next()) r.fail("truncated");
    auto ts = tokens(r.line);
    expect_key(r, ts, "kernel", 1);
    if (ts[1] == "matern") {
        f.kernel.family = KernelFamily::Matern;
        if (!r.next()) r.fail("truncated");
        ts = tokens(r.line);
        expect_key(r, ts, "nu", 1);
        f.kernel.nu = to_double(r, ts[1]);
    } else if (ts[1] == "se") {
        f.kernel.family = KernelFamily::SquaredExponential;
    } else {
        r.fail("unknown kernel family '" + ts[1] + "'");
    }

    auto read_scalar = [&](const std::string& key) {
        if (!r.next()) r.fail("truncated");
        ts = tokens(r.line);
        expect_key(r, ts, key, 1);
        return ts[1];
    };

    f.kernel.theta = to_double(r, read_scalar("theta"));
    f.kernel.dim = static_cast<int>(to_double(r, read_scalar("dim")));
    f.M = to_double(r, read_scalar("m"));
    f.norm_expansion = to_double(r, read_scalar("norm_expansion"));
    f.norm_bump_estimate = to_double(r, read_scalar("norm_bump_estimate"));

    if (!r.next()) r.fail("truncated");
    ts = tokens(r.line);
    expect_key(r, ts, "argmax", static_cast<std::size_t>(-1));
    f.argmax = parse_point(r, ts, 1, f.kernel.dim);

    f.fmax = to_double(r, read_scalar("fmax"));
    f.argmax_grid_res = static_cast<int>(to_double(r, read_scalar("argmax_grid")));
    f.seed = std::stoull(read_scalar("seed"));
    f.holder_xi = to_double(r, read_scalar("holder_xi"));
    f.holder_l_hat = to_double(r, read_scalar("holder_l_hat"));

    const int n_centers = static_cast<int>(to_double(r, read_scalar("centers")));
    f.weights = Vector(n_centers);
    for (int i = 0; i < n_centers; ++i) {
        if (!r.next()) r.fail("truncated centers");
        ts = tokens(r.line);
        expect_key(r, ts, "c", static_cast<std::size_t>(-1));
        if (ts.size() != 2 + static_cast<std::size_t>(f.kernel.dim)) r.fail("bad center line");
        f.weights[i] = to_double(r, ts[1]);
        f.centers.push_back(parse_point(r, ts, 2, f.kernel.dim));
    }

    const int n_bumps = static_cast<int>(to_double(r, read_scalar("bumps")));
    for (int i = 0; i < n_bumps; ++i) {
        if (!r.next()) r.fail("truncated bumps");
        ts = tokens(r.line);
        expect_key(r, ts, "b", static_cast<std::size_t>(-1));
        if (ts.size() != 3 + static_cast<std::size_t>(f.kernel.dim)) r.fail("bad bump line");
        BumpTerm b;
        b.amplitude = to_double(r, ts[1]);
        b.radius = to_double(r, ts[2]);
        b.center = parse_point(r, ts, 3, f.kernel.dim);
        f.bumps.push_back(b);
    }

    while (r.next()) {
        ts = tokens(r.line);
        if (ts.empty()) continue;
        if (ts[0] == "end") return f;
        if (ts[0] == "growth") {
            if (ts.size() != 6) r.fail("bad growth line");
            f.growth.valid = true;
            f.growth.b_target = to_double(r, ts[1]);
            f.growth.b_hat = to_double(r, ts[2]);
            f.growth.c_lower = to_double(r, ts[3]);
            f.growth.c_upper = to_double(r, ts[4]);
            f.growth.rho0 = to_double(r, ts[5]);
        } else if (ts[0] == "perturbation") {
            if (ts.size() != 5 + static_cast<std::size_t>(f.kernel.dim))
                r.fail("bad perturbation line");
            f.perturbation.valid = true;
            f.perturbation.delta = to_double(r, ts[1]);
            f.perturbation.c_annulus = to_double(r, ts[2]);
            f.perturbation.c_deviation = to_double(r, ts[3]);
            f.perturbation.radius = to_double(r, ts[4]);
            f.perturbation.z = parse_point(r, ts, 5, f.kernel.dim);
        } else {
            r.fail("unknown key '" + ts[0] + "'");
        }
    }
    r.fail("missing 'end'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write file: " + path);
    out << content;
}

void save_instance(const std::string& path, const RkhsFunction& f) {
    write_text_file(path, serialize_instance(f));
}

RkhsFunction load_instance(const std::string& path) {
    return parse_instance(read_text_file(path));
}

}  // namespace kbopt
