#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "juliadim/csv.hpp"
#include "juliadim/error.hpp"
#include "juliadim/experiments.hpp"
#include "juliadim/parallel.hpp"
#include "juliadim/quadrature.hpp"
#include "juliadim/verify.hpp"

#ifndef JULIADIM_VERSION
#define JULIADIM_VERSION "0.0.0"
#endif

using namespace juliadim;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int EXIT_PARSE = 2, EXIT_NUMERIC = 3, EXIT_VERIFY = 4;

struct Common {
    int level = 14;
    double tol = 1e-12;
    std::string out;
    std::string config;
    int threads = 1;
    std::string json_path;
    std::string cache_dir;

    RunOptions run() const {
        RunOptions o;
        o.level = level;
        o.tol = tol;
        o.threads = threads <= 0 ? default_threads() : threads;
        o.cache_dir = cache_dir;
        return o;
    }
};

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::PARSE_ERROR, msg); }

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// accepts "x", "x+yi", "x-yi", "yi" and "x,y"
cplx parse_complex(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) parse_fail("empty complex number");
    const char* p = s.c_str();
    char* end = nullptr;
    const auto comma = s.find(',');
    if (comma != std::string::npos) {
        const double re = std::strtod(p, &end);
        if (end != p + comma) parse_fail("bad complex number '" + s + "'");
        const char* q = p + comma + 1;
        const double im = std::strtod(q, &end);
        if (end == q || *end != '\0') parse_fail("bad complex number '" + s + "'");
        return {re, im};
    }
    const double a = std::strtod(p, &end);
    if (end == p) {
        if (s == "i" || s == "+i") return {0, 1};
        if (s == "-i") return {0, -1};
        parse_fail("bad complex number '" + s + "'");
    }
    if (*end == '\0') return {a, 0};
    if (*end == 'i' && end[1] == '\0') return {0, a};
    if (*end != '+' && *end != '-') parse_fail("bad complex number '" + s + "'");
    const char* q = end;
    double b = 0;
    if ((q[1] == 'i') && q[2] == '\0') {
        b = *q == '-' ? -1 : 1;
    } else {
        b = std::strtod(q, &end);
        if (end == q || *end != 'i' || end[1] != '\0') parse_fail("bad complex number '" + s + "'");
    }
    if (!std::isfinite(a) || !std::isfinite(b)) parse_fail("non-finite complex number");
    return {a, b};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        char* end = nullptr;
        const double x = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0' || !std::isfinite(x)) parse_fail("bad number '" + item + "' in list");
        v.push_back(x);
    }
    if (v.empty()) parse_fail("empty list");
    return v;
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) parse_fail(std::string(what) + " must be finite");
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// CSV goes to --out, or stdout when no file was given; the summary then goes to stderr
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Error(ErrorKind::IO_ERROR, "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& csv() { return path_.empty() ? std::cout : static_cast<std::ostream&>(file_); }
    std::ostream& text() { return path_.empty() ? std::cerr : std::cout; }
    void close() {
        if (!path_.empty()) {
            file_.close();
            if (!file_) throw Error(ErrorKind::IO_ERROR, "failed writing '" + path_ + "'");
        }
    }

private:
    std::string path_;
    std::ofstream file_;
};

struct Outcome {
    int code = 0;
    json results = json::object();
};

// ---------------------------------------------------------------- commands

struct DimArgs {
    std::string delta = "0.5";
};

Outcome run_dim(const Common& c, const DimArgs& a) {
    const cplx delta = parse_complex(a.delta);
    if (!in_main_disk(delta))
        throw Error(ErrorKind::OUT_OF_DOMAIN, "delta must satisfy |delta - 1| < 1");
    const RunOptions opt = c.run();
    const DimensionResult r = hausdorff_dim(get_table(delta, opt), c.level, c.tol);
    Outcome o;
    o.results = {{"delta_re", delta.real()},
                 {"delta_im", delta.imag()},
                 {"level", r.level},
                 {"tau0", r.tau0},
                 {"richardson_estimate", num(r.richardson_estimate)},
                 {"error_bound", num(r.error_bound)},
                 {"pressure_residual", r.pressure_residual},
                 {"level_values", r.level_values}};
    std::printf("dim %.10f\nrichardson %.10f\nerror_bound %.3e\npressure_residual %.3e\n", r.tau0,
                r.richardson_estimate, r.error_bound, r.pressure_residual);
    if (!c.out.empty()) {
        Output out(c.out);
        CsvWriter w(out.csv());
        w.header({"delta_re", "delta_im", "level", "tau0", "richardson_estimate", "error_bound", "pressure_residual"});
        w.row({fmt17(delta.real()), fmt17(delta.imag()), std::to_string(r.level), fmt17(r.tau0),
               fmt17(r.richardson_estimate), fmt17(r.error_bound), fmt17(r.pressure_residual)});
        out.close();
    }
    return o;
}

struct OmegaArgs {
    double d0 = 1.08;
    double theta_min = -3, theta_max = 3, step = 0.05;
};

void check_d0(double d0) {
    if (!(d0 > 1.0 && d0 < 1.5)) throw Error(ErrorKind::INVALID_DIMENSION, "d0 must lie in (1, 1.5)");
}

Outcome run_omega(const Common& c, const OmegaArgs& a) {
    require_finite(a.theta_min, "--theta-min");
    require_finite(a.theta_max, "--theta-max");
    if (!(a.step > 0) || !std::isfinite(a.step)) parse_fail("--step must be positive");
    if (a.theta_max < a.theta_min) parse_fail("--theta-max must not be below --theta-min");
    check_d0(a.d0);
    const long n = std::lround(std::floor((a.theta_max - a.theta_min) / a.step + 1e-9)) + 1;
    if (n > 10000000) parse_fail("too many rows");

    struct Row {
        double theta = 0;
        QuadratureResult q;
        std::string flag;
    };
    const RunOptions opt = c.run();
    const auto rows = parallel_map<Row>(std::size_t(n), opt.threads, [&](std::size_t i) {
        Row r;
        r.theta = a.theta_min + double(i) * a.step;
        try {
            r.q = omega(r.theta, a.d0);
        } catch (const Error& e) {
            r.q.value = r.q.err_estimate = kNaN;
            r.flag = to_string(e.kind());
        }
        return r;
    });

    Output out(c.out);
    CsvWriter w(out.csv());
    w.header({"theta", "omega", "err", "flag"});
    int flagged = 0;
    double crossing = kNaN;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        w.row({fmt17(r.theta), fmt17(r.q.value), fmt17(r.q.err_estimate), r.flag});
        if (!r.flag.empty()) ++flagged;
        if (i > 0 && std::isnan(crossing) && rows[i - 1].theta >= 0 && rows[i - 1].q.value < 0 && r.q.value >= 0) {
            const double x0 = rows[i - 1].theta, y0 = rows[i - 1].q.value;
            crossing = x0 + (r.theta - x0) * (-y0) / (r.q.value - y0);
        }
    }
    out.close();
    Outcome o;
    o.results = {{"rows", rows.size()}, {"flagged", flagged}, {"first_positive_crossing", num(crossing)}};
    out.text() << "rows " << rows.size() << "\nflagged " << flagged << "\ncrossing " << fmt17(crossing) << "\n";
    return o;
}

struct Theta0Args {
    double d0 = 1.08;
    double d0_err = 0;
};

Outcome run_theta0(const Common&, const Theta0Args& a) {
    check_d0(a.d0);
    if (!(a.d0_err >= 0)) parse_fail("--d0-err must be non-negative");
    const double t = find_theta0(a.d0);
    double unc = 0;
    if (a.d0_err > 0) {
        const double lo = find_theta0(a.d0 - a.d0_err), hi = find_theta0(a.d0 + a.d0_err);
        unc = std::max(std::abs(lo - t), std::abs(hi - t));
    }
    Outcome o;
    o.results = {{"theta0", t}, {"uncertainty", unc}};
    std::printf("theta0 %.12f\nuncertainty %.3e\n", t, unc);
    return o;
}

struct RayArgs {
    double alpha = 0;
    double t_start = 0.4, t_end = 0.05;
    int points = 0;
    double d0 = kNaN;
    std::string d0_t = "0.2,0.1,0.05";
    int fit_points = 3;
};

Outcome run_ray(const Common& c, const RayArgs& a) {
    require_finite(a.alpha, "--alpha");
    if (!(std::abs(a.alpha) < std::numbers::pi / 2)) parse_fail("--alpha must lie in (-pi/2, pi/2)");
    if (!(a.t_start > a.t_end && a.t_end > 0)) parse_fail("need t_start > t_end > 0");
    if (a.points == 1 || a.points < 0) parse_fail("--points must be 0 (default grid) or >= 2");
    if (a.fit_points < 1) parse_fail("--fit-points must be positive");
    const RunOptions opt = c.run();
    double d0 = a.d0;
    double d0_unc = kNaN;
    if (std::isnan(d0)) {
        const D0Estimate e = d0_estimate(parse_list(a.d0_t), opt);
        d0 = e.value;
        d0_unc = e.uncertainty;
    }
    check_d0(d0);
    const std::vector<double> grid =
        a.points == 0 ? default_t_grid(a.t_start, a.t_end) : geometric_grid(a.t_start, a.t_end, a.points);
    const RayScan s = ray_scan(a.alpha, grid, d0, opt, a.fit_points);

    Output out(c.out);
    CsvWriter w(out.csv());
    w.header({"t", "alpha", "d0", "delta_re", "delta_im", "dim", "deriv_formula", "deriv_fd", "ratio", "chi",
              "pressure_residual", "flag"});
    bool all_negative = true;
    int failed = 0;
    for (const RayRow& r : s.rows) {
        w.row({fmt17(r.t), fmt17(s.alpha), fmt17(s.d0), fmt17(r.point.delta.real()), fmt17(r.point.delta.imag()),
               fmt17(r.point.dim), fmt17(r.point.deriv_formula), fmt17(r.point.deriv_fd), fmt17(r.ratio),
               fmt17(r.point.chi), fmt17(r.point.pressure_residual), r.flag});
        if (!r.ok) ++failed;
        else if (!(r.ratio < 0)) all_negative = false;
    }
    out.close();
    const double stab_tol = 0.2;
    Outcome o;
    o.results = {{"d0", d0},
                 {"d0_uncertainty", num(d0_unc)},
                 {"omega", s.omega_value},
                 {"fit_points", s.fit_points},
                 {"fitted_A", num(s.fitted_A)},
                 {"chi_small_t", num(s.chi_small)},
                 {"implied_H_mu", num(s.implied_H_mu)},
                 {"A_big", num(s.A_big)},
                 {"A_big_from_H_mu", num(s.A_big_check)},
                 {"A_big_consistency", num(std::abs(s.A_big - s.A_big_check))},
                 {"stabilization", num(s.stabilization)},
                 {"stabilization_tolerance", stab_tol},
                 {"stabilization_tolerance_note", "engineering choice, no rate is known for the limit"},
                 {"ratios_negative", all_negative},
                 {"failed_rows", failed}};
    auto& t = out.text();
    t << "d0 " << fmt17(d0) << "\nomega " << fmt17(s.omega_value) << "\nfitted_A " << fmt17(s.fitted_A)
      << "\nchi " << fmt17(s.chi_small) << "\nimplied_H_mu " << fmt17(s.implied_H_mu) << "\nA_big "
      << fmt17(s.A_big) << "\nA_big_consistency " << fmt17(std::abs(s.A_big - s.A_big_check)) << "\nstabilization "
      << fmt17(s.stabilization) << " (tolerance 0.2, engineering choice)\nfailed_rows " << failed << "\n";
    if (failed == int(s.rows.size())) o.code = EXIT_NUMERIC;
    return o;
}

struct D0Args {
    std::string t = "0.2,0.1,0.05";
    bool sensitivity = false;
};

Outcome run_d0(const Common& c, const D0Args& a) {
    const std::vector<double> t = parse_list(a.t);
    if (t.size() < 2) parse_fail("--t needs at least two values");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(t[i] > 0 && t[i] < 1) || (i && !(t[i] < t[i - 1]))) parse_fail("--t must be decreasing in (0, 1)");
    const RunOptions opt = c.run();
    const D0Estimate e = d0_estimate(t, opt);
    Outcome o;
    o.results = {{"d0", e.value},       {"uncertainty", e.uncertainty}, {"halving_change", e.halving_change},
                 {"exponent", e.exponent}, {"t", e.t},                   {"dims", e.dims},
                 {"pairwise", e.pairwise}, {"in_bounds", e.in_bounds}};
    std::printf("d0 %.10f\nuncertainty %.3e\nhalving_change %.3e\nexponent %.6f\n", e.value, e.uncertainty,
                e.halving_change, e.exponent);
    if (a.sensitivity) {
        RunOptions low = opt;
        low.level = opt.level - 2;
        const D0Estimate el = d0_estimate(t, low);
        o.results["level_sensitivity"] = {{"level", low.level}, {"d0", el.value}, {"change", e.value - el.value}};
        std::printf("level %d d0 %.10f change %.3e\n", low.level, el.value, e.value - el.value);
    }
    if (!e.in_bounds) {
        o.results["warning"] = "OUT_OF_BOUNDS";
        std::fprintf(stderr, "warning: OUT_OF_BOUNDS: estimate outside (1, 1.295)\n");
    }
    if (!c.out.empty()) {
        Output out(c.out);
        CsvWriter w(out.csv());
        w.header({"t", "dim", "pairwise"});
        for (std::size_t i = 0; i < e.t.size(); ++i)
            w.row({fmt17(e.t[i]), fmt17(e.dims[i]), fmt17(i ? e.pairwise[i - 1] : kNaN)});
        out.close();
    }
    return o;
}

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 20240601;
    int samples = 10000;
};

Outcome run_verify(const Common& c, const VerifyArgs& a) {
    const Suite s = parse_suite(a.suite);
    if (a.samples < 1) parse_fail("--samples must be positive");
    VerifyOptions vo;
    vo.seed = a.seed;
    vo.samples = a.samples;
    const auto checks = run_suite(s, vo);
    int failed = 0;
    for (const Check& k : checks) {
        std::printf("%s  %-12s %s  value=%.6g bound=%.6g %s\n", k.pass ? "PASS" : "FAIL", k.suite.c_str(),
                    k.name.c_str(), k.value, k.bound, k.detail.c_str());
        if (!k.pass) ++failed;
    }
    std::printf("%zu checks, %d failed\n", checks.size(), failed);
    if (!c.out.empty()) {
        Output out(c.out);
        CsvWriter w(out.csv());
        w.header({"suite", "name", "pass", "value", "bound", "detail"});
        for (const Check& k : checks)
            w.row({k.suite, sanitize(k.name), k.pass ? "1" : "0", fmt17(k.value), fmt17(k.bound), sanitize(k.detail)});
        out.close();
    }
    Outcome o;
    o.results = {{"checks", checks.size()}, {"failed", failed}};
    if (failed) o.code = EXIT_VERIFY;
    return o;
}

struct ConvexityArgs {
    double eps_min = -0.05, eps_max = -0.01;
    int points = 9;
    bool halving = false;
};

Outcome run_convexity(const Common& c, const ConvexityArgs& a) {
    require_finite(a.eps_min, "--eps-min");
    require_finite(a.eps_max, "--eps-max");
    if (!(a.eps_min < a.eps_max && a.eps_max < 0)) parse_fail("need eps_min < eps_max < 0");
    if (a.points < 3) parse_fail("--points must be at least 3");
    const RunOptions opt = c.run();
    const EpsScan s = eps_scan(linear_grid(a.eps_min, a.eps_max, a.points), opt);

    Output out(c.out);
    CsvWriter w(out.csv());
    w.header({"eps", "delta", "dim", "d_prime", "d_second", "noisy"});
    bool increasing = true;
    double prev = kNaN;
    for (const EpsRow& r : s.rows) {
        w.row({fmt17(r.eps), fmt17(2 * std::sqrt(-r.eps)), fmt17(r.dim), fmt17(r.d_prime), fmt17(r.d_second),
               r.noisy ? "1" : "0"});
        if (std::isfinite(r.d_second)) {
            if (std::isfinite(prev) && !(r.d_second > prev)) increasing = false;
            prev = r.d_second;
        }
    }
    out.close();
    Outcome o;
    o.results = {{"slope", s.slope},
                 {"min_second", s.min_second},
                 {"convex", s.convex},
                 {"second_increasing", increasing}};
    auto& t = out.text();
    t << "min_second " << fmt17(s.min_second) << "\nconvex " << (s.convex ? "yes" : "no") << "\nincreasing "
      << (increasing ? "yes" : "no") << "\nslope " << fmt17(s.slope) << "\n";
    if (a.halving) {
        const EpsScan f = eps_scan(linear_grid(a.eps_min, a.eps_max, 2 * a.points - 1), opt);
        double worst = 0;
        for (std::size_t i = 1; i + 1 < s.rows.size(); ++i) {
            const double fine = f.rows[2 * i].d_second, coarse = s.rows[i].d_second;
            worst = std::max(worst, std::abs(fine / coarse - 1));
        }
        o.results["halving_max_relative_change"] = worst;
        t << "halving_change " << fmt17(worst) << "\n";
    }
    if (!s.convex) o.code = EXIT_VERIFY;
    return o;
}

struct MandelbrotArgs {
    double re_min = -3, re_max = 3, im_min = -2, im_max = 2;
    int nx = 121, ny = 81;
    int max_iter = 1000;
};

Outcome run_mandelbrot(const Common& c, const MandelbrotArgs& a) {
    for (double x : {a.re_min, a.re_max, a.im_min, a.im_max}) require_finite(x, "grid bound");
    if (!(a.re_min < a.re_max && a.im_min < a.im_max)) parse_fail("empty grid window");
    if (a.nx < 2 || a.ny < 2 || a.max_iter < 1) parse_fail("grid needs nx, ny >= 2 and max-iter >= 1");
    const RunOptions opt = c.run();
    const auto cells = mandelbrot_grid(a.re_min, a.re_max, a.im_min, a.im_max, a.nx, a.ny, a.max_iter, opt.threads);
    Output out(c.out);
    CsvWriter w(out.csv());
    w.header({"re", "im", "in_delta", "in_eps"});
    long nd = 0, ne = 0;
    for (const auto& m : cells) {
        w.row({fmt17(m.re), fmt17(m.im), m.in_delta ? "1" : "0", m.in_eps ? "1" : "0"});
        nd += m.in_delta;
        ne += m.in_eps;
    }
    out.close();
    Outcome o;
    o.results = {{"cells", cells.size()}, {"in_delta", nd}, {"in_eps", ne}};
    out.text() << "cells " << cells.size() << "\nin_delta " << nd << "\nin_eps " << ne << "\n";
    return o;
}

// ---------------------------------------------------------------- plumbing

std::vector<std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot read config '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(path + ":" + std::to_string(lineno) + ": empty key");
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config" || key == "json") parse_fail("key '" + key + "' is not allowed in a config file");
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

std::string find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

const std::vector<std::string> kCommands = {"dim",    "omega",  "theta0",     "ray",
                                            "d0",     "verify", "convexity", "mandelbrot"};

// config values are spliced in right after the subcommand so that flags given
// later on the command line win (options keep their last value)
std::vector<std::string> expand_config(std::vector<std::string> args) {
    const std::string cfg = find_config(args);
    if (cfg.empty()) return args;
    auto it = std::find_if(args.begin(), args.end(),
                           [](const std::string& a) { return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end(); });
    if (it == args.end()) parse_fail("--config needs a subcommand");
    const auto extra = read_config(cfg);
    args.insert(it + 1, extra.begin(), extra.end());
    return args;
}

std::vector<std::string> replay_args(const std::string& path, const std::vector<std::string>& rest) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot read manifest '" + path + "'");
    json m;
    try {
        m = json::parse(in);
    } catch (const std::exception& e) {
        parse_fail(std::string("bad manifest: ") + e.what());
    }
    if (!m.contains("command") || !m.contains("params") || !m["params"].is_object())
        parse_fail("manifest lacks command or params");
    std::vector<std::string> args{m["command"].get<std::string>()};
    for (const auto& [k, v] : m["params"].items())
        args.push_back("--" + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()));
    args.insert(args.end(), rest.begin(), rest.end());
    return args;
}

void add_common(CLI::App* sub, Common& c, int default_level) {
    c.level = default_level;
    sub->add_option("--level", c.level, "table level N (2^N landing points)")->check(CLI::Range(4, 24));
    sub->add_option("--tol", c.tol, "Bowen root tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "CSV output path");
    sub->add_option("--config", c.config, "flat key=value file; command line flags override it");
    sub->add_option("--threads", c.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--json", c.json_path, "write a run manifest here ('-' for stdout)");
    sub->add_option("--cache-dir", c.cache_dir, "directory for cached tables");
}

json collect_params(const CLI::App* sub) {
    json p = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help" || name == "config" || name == "json") continue;
        std::string value;
        if (opt->count() > 0) {
            value = opt->results().back();
        } else {
            value = opt->get_default_str();
            if (value.empty()) continue;
        }
        p[name] = value;
    }
    return p;
}

int exit_code_for(ErrorKind k) { return k == ErrorKind::PARSE_ERROR ? EXIT_PARSE : EXIT_NUMERIC; }

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty() && (args[0] == "--replay" || args[0].rfind("--replay=", 0) == 0)) {
            std::string path;
            std::size_t skip = 1;
            if (args[0] == "--replay") {
                if (args.size() < 2) parse_fail("--replay needs a manifest path");
                path = args[1];
                skip = 2;
            } else {
                path = args[0].substr(9);
            }
            args = replay_args(path, std::vector<std::string>(args.begin() + long(skip), args.end()));
        }
        args = expand_config(args);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_PARSE;
    }

    CLI::App app{"Hausdorff dimension of quadratic Julia sets near the parabolic parameter"};
    app.name("juliadim");
    app.require_subcommand(1);
    app.set_version_flag("--version", JULIADIM_VERSION);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    DimArgs dim_a;
    OmegaArgs omega_a;
    Theta0Args theta_a;
    RayArgs ray_a;
    D0Args d0_a;
    VerifyArgs verify_a;
    ConvexityArgs conv_a;
    MandelbrotArgs mb_a;

    auto* dim = app.add_subcommand("dim", "dimension of the Julia set of f_delta");
    add_common(dim, common, 14);
    dim->add_option("--delta", dim_a.delta, "parameter: x, x+yi or x,y");

    auto* om = app.add_subcommand("omega", "tabulate Omega(theta)");
    add_common(om, common, 14);
    om->add_option("--d0", omega_a.d0, "dimension at the parabolic parameter");
    om->add_option("--theta-min", omega_a.theta_min);
    om->add_option("--theta-max", omega_a.theta_max);
    om->add_option("--step", omega_a.step);

    auto* th = app.add_subcommand("theta0", "positive zero of Omega");
    add_common(th, common, 14);
    th->add_option("--d0", theta_a.d0);
    th->add_option("--d0-err", theta_a.d0_err, "uncertainty of d0 to propagate");

    auto* ray = app.add_subcommand("ray", "derivative ratio scan along delta = t e^{i alpha}");
    add_common(ray, common, 14);
    ray->add_option("--alpha", ray_a.alpha);
    ray->add_option("--t-start", ray_a.t_start);
    ray->add_option("--t-end", ray_a.t_end);
    ray->add_option("--points", ray_a.points, "0: geometric grid with ratio 1/sqrt(2)");
    ray->add_option("--d0", ray_a.d0, "fixed d0; estimated at this level when absent");
    ray->add_option("--d0-t", ray_a.d0_t, "t sequence for the d0 estimate");
    ray->add_option("--fit-points", ray_a.fit_points);

    auto* d0 = app.add_subcommand("d0", "extrapolate the dimension at delta = 0 along the real ray");
    add_common(d0, common, 16);
    d0->add_option("--t", d0_a.t, "decreasing comma separated t values");
    d0->add_flag("--sensitivity", d0_a.sensitivity, "repeat two levels lower");

    auto* ver = app.add_subcommand("verify", "run property suites");
    add_common(ver, common, 14);
    ver->add_option("--suite", verify_a.suite, "appendix|fatou|cylinders|transfer|perturbation|quadrature|all");
    ver->add_option("--seed", verify_a.seed);
    ver->add_option("--samples", verify_a.samples);

    auto* conv = app.add_subcommand("convexity", "second differences of d(eps) on the real ray");
    add_common(conv, common, 14);
    conv->add_option("--eps-min", conv_a.eps_min);
    conv->add_option("--eps-max", conv_a.eps_max);
    conv->add_option("--points", conv_a.points);
    conv->add_flag("--halving", conv_a.halving, "repeat with half the spacing");

    auto* mb = app.add_subcommand("mandelbrot", "membership grid in the delta and eps planes");
    add_common(mb, common, 14);
    mb->add_option("--re-min", mb_a.re_min);
    mb->add_option("--re-max", mb_a.re_max);
    mb->add_option("--im-min", mb_a.im_min);
    mb->add_option("--im-max", mb_a.im_max);
    mb->add_option("--nx", mb_a.nx);
    mb->add_option("--ny", mb_a.ny);
    mb->add_option("--max-iter", mb_a.max_iter);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: PARSE_ERROR: %s\n", e.what());
        return EXIT_PARSE;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    std::string error_kind;
    try {
        if (command == "dim") outcome = run_dim(common, dim_a);
        else if (command == "omega") outcome = run_omega(common, omega_a);
        else if (command == "theta0") outcome = run_theta0(common, theta_a);
        else if (command == "ray") outcome = run_ray(common, ray_a);
        else if (command == "d0") outcome = run_d0(common, d0_a);
        else if (command == "verify") outcome = run_verify(common, verify_a);
        else if (command == "convexity") outcome = run_convexity(common, conv_a);
        else outcome = run_mandelbrot(common, mb_a);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        outcome.code = exit_code_for(e.kind());
        error_kind = to_string(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        outcome.code = EXIT_NUMERIC;
        error_kind = "INTERNAL";
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!common.json_path.empty()) {
        json m;
        m["command"] = command;
        m["params"] = collect_params(sub);
        m["outputs"] = common.out.empty() || !error_kind.empty() ? json::array() : json::array({common.out});
        m["duration_ms"] = ms;
        m["version"] = JULIADIM_VERSION;
        m["exit_code"] = outcome.code;
        if (!error_kind.empty()) m["error"] = error_kind;
        m["results"] = outcome.results;
        const std::string text = m.dump(2) + "\n";
        if (common.json_path == "-") {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(common.json_path, std::ios::binary | std::ios::trunc);
            f << text;
            if (!f) {
                std::fprintf(stderr, "error: IO_ERROR: cannot write manifest '%s'\n", common.json_path.c_str());
                return EXIT_NUMERIC;
            }
        }
    }
    return outcome.code;
}
