#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "suite.hpp"

namespace hyperdual {

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (no whitespace).
inline cplx parse_complex(const std::string& text) {
    static const std::string num = R"([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+\.)";
    static const std::regex re_real("^([+-]?(?:" + num + "))$");
    static const std::regex re_imag("^([+-]?(?:" + num + ")?)i$");
    static const std::regex re_both("^([+-]?(?:" + num + "))([+-](?:" + num + ")?)i$");
    auto coef = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
    };
    std::smatch m;
    if (std::regex_match(text, m, re_real)) return {std::stod(m[1]), 0.0};
    if (std::regex_match(text, m, re_imag)) return {0.0, coef(m[1])};
    if (std::regex_match(text, m, re_both)) return {std::stod(m[1]), coef(m[2])};
    throw ConfigError("cannot parse complex number '" + text + "' (expected a+bi)");
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// JSON has no infinity; failed rate tests (metric +inf) are written as the largest double.
inline double json_number(double x) {
    if (std::isnan(x) || x > std::numeric_limits<double>::max()) return std::numeric_limits<double>::max();
    if (x < -std::numeric_limits<double>::max()) return -std::numeric_limits<double>::max();
    return x;
}

inline nlohmann::json report_json(const CheckReport& r) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : r.values)
        values.push_back({{"label", v.label},
                          {"re", json_number(v.value.real())},
                          {"im", json_number(v.value.imag())},
                          {"err", json_number(v.err)}});
    return {{"schema", 1},          {"check", r.check},         {"params", r.params},
            {"values", values},     {"max_rel_err", json_number(r.max_rel_err)}, {"tolerance", r.tolerance},
            {"pass", r.pass},       {"runtime_ms", r.runtime_ms}, {"timestamp", utc_timestamp()}};
}

/// Several reports under one envelope with the report schema; max_rel_err
/// counts failing reports.
inline nlohmann::json suite_json(const std::string& name, const nlohmann::json& params,
                                 const std::vector<std::pair<std::string, std::vector<CheckReport>>>& groups,
                                 const std::vector<bool>& verdicts, double runtime_ms) {
    nlohmann::json values = nlohmann::json::array(), reports = nlohmann::json::array();
    int failures = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        failures += verdicts[g] ? 0 : 1;
        values.push_back({{"label", groups[g].first}, {"re", verdicts[g] ? 0.0 : 1.0}, {"im", 0.0}, {"err", 0.0}});
        for (const auto& r : groups[g].second) {
            auto j = report_json(r);
            j["group"] = groups[g].first;
            reports.push_back(j);
        }
    }
    return {{"schema", 1},
            {"check", name},
            {"params", params},
            {"values", values},
            {"max_rel_err", double(failures)},
            {"tolerance", 0.0},
            {"pass", failures == 0},
            {"runtime_ms", runtime_ms},
            {"timestamp", utc_timestamp()},
            {"reports", reports}};
}

/// The JSON with run-time fields removed (used to compare runs).
inline nlohmann::json numeric_fields(nlohmann::json j) {
    if (j.is_object()) {
        j.erase("runtime_ms");
        j.erase("timestamp");
        for (auto& [k, v] : j.items()) v = numeric_fields(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = numeric_fields(v);
    }
    return j;
}

struct RunConfig {
    std::string command;
    std::optional<cplx> m1, l1;
    std::optional<int> m2, l2;
    std::optional<double> kappa;
    std::optional<cplx> z;
    std::vector<cplx> z_list;        ///< asympt-check evaluation points
    std::optional<Point> point;      ///< solution-check point
    int l = 2;                       ///< selberg-check dimension
    cplx m{0.7, 0.0};                ///< selberg-check exponent
    QuadratureConfig quad = acceptance_setup().quad;
    std::optional<int> nodes;  ///< overrides quad.nodes; unset = per-subcommand default
    GeometryConfig geometry;
    std::optional<double> tolerance;
    std::vector<double> h{1e-2, 5e-3, 2.5e-3};
    double solution_h = 1e-2;
    std::vector<double> M{100, 400};
    std::optional<cplx> a;
    std::string kind = "both";       ///< saddle-check: Cprime, Cdoubleprime or both
    int points = 20;
    std::uint64_t seed = 11;
    std::vector<int> l2_values;      ///< dim-scan
    bool quick = false;              ///< all: reduced grid
    std::string output;              ///< empty = stdout
    std::string format = "json";     ///< json | csv
};

struct RunResult {
    int exit_code = 0;
    std::string text;
    nlohmann::json json;
};

namespace detail {

inline WeightData weight_from(const RunConfig& c, double default_kappa = 2.5) {
    if (!c.m2 || !c.l2) throw ConfigError("--m2 and --l2 are required");
    const double kappa = c.kappa.value_or(default_kappa);
    cplx m1, l1;
    if (c.m1 && c.l1) {
        m1 = *c.m1, l1 = *c.l1;
    } else if (c.m1) {
        m1 = *c.m1, l1 = *c.m1 + double(*c.m2 - *c.l2);
    } else if (c.l1) {
        l1 = *c.l1, m1 = *c.l1 + double(*c.l2 - *c.m2);
    } else {
        throw ConfigError("--m1 or --l1 is required");
    }
    try {
        return validate_weight_data(m1, *c.m2, l1, *c.l2, kappa);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

inline IntegralSetup setup_from(const RunConfig& c) {
    IntegralSetup s;
    s.quad = c.quad;
    // the stencil checks difference nearby quadratures and need the lower noise floor of 12 nodes
    const bool stencil = c.command == "ode-check" || c.command == "solution-check";
    s.quad.nodes = c.nodes.value_or(stencil ? 12 : c.quad.nodes);
    s.geometry = c.geometry;
    if (!(c.geometry.radius_ratio > 1.0)) throw ConfigError("radius ratio must exceed 1");
    if (c.geometry.truncation && !(*c.geometry.truncation > 0)) throw ConfigError("truncation must be positive");
    try {
        s.quad.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return s;
}

inline cplx upper_z(const RunConfig& c, cplx fallback) {
    const cplx z = c.z.value_or(fallback);
    if (!(z.imag() > 0.0)) throw ConfigError("z must satisfy Im z > 0");
    return z;
}

inline std::vector<std::pair<std::string, std::vector<CheckReport>>> single(const CheckReport& r) {
    return {{r.check, {r}}};
}

}  // namespace detail

/// Determinism: the quick suite run with one worker and with `workers`
/// workers must agree in every numeric field.
inline CriterionResult criterion_determinism(int workers = 3) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(9, "Determinism across worker counts");
    auto run_with = [](int w) {
        const char* old = std::getenv("HYPERDUAL_THREADS");
        const std::string saved = old ? old : "";
        setenv("HYPERDUAL_THREADS", std::to_string(w).c_str(), 1);
        std::vector<CheckReport> all;
        for (auto& cr : numeric_criteria(true))
            for (auto& r : cr.reports) all.push_back(r);
        if (old)
            setenv("HYPERDUAL_THREADS", saved.c_str(), 1);
        else
            unsetenv("HYPERDUAL_THREADS");
        return all;
    };
    const auto a = run_with(1), b = run_with(workers);
    CheckReport rep;
    rep.check = "determinism";
    rep.params = {{"workers", {1, workers}}, {"reports", a.size()}};
    rep.tolerance = 0.0;
    int mismatches = a.size() == b.size() ? 0 : 1;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (numeric_fields(report_json(a[i])) != numeric_fields(report_json(b[i]))) ++mismatches;
    rep.add("mismatching reports", double(mismatches));
    rep.update(double(mismatches));
    c.reports.push_back(rep);
    return detail::finish(c, t0);
}

inline std::vector<CriterionResult> acceptance_suite(bool quick) {
    auto out = numeric_criteria(quick);
    out.push_back(criterion_determinism());
    return out;
}

inline std::string criterion_line(const CriterionResult& c) {
    double worst = 0.0;
    for (const auto& r : c.reports) worst = std::max(worst, r.max_rel_err);
    std::ostringstream os;
    os << "criterion " << c.id << " [" << (c.pass ? "PASS" : "FAIL") << "] " << c.title << ": " << c.reports.size()
       << " report(s), worst metric " << std::scientific << std::setprecision(3) << worst << ", "
       << std::fixed << std::setprecision(1) << c.runtime_ms / 1000.0 << " s";
    if (c.runtime_limit_ms > 0) os << " (limit " << c.runtime_limit_ms / 1000.0 << " s)";
    for (const auto& r : c.informational)
        os << "\n    info: " << r.check << " metric " << std::scientific << std::setprecision(3) << r.max_rel_err
           << (r.pass ? " (would pass)" : " (would fail)");
    return os.str();
}

/// Executes one subcommand.  Throws ConfigError for invalid input; numerical
/// failures inside checks surface as failing reports or library errors.
inline RunResult run(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
    if (c.format == "csv" && c.command != "dim-scan") throw ConfigError("csv output is available for dim-scan only");
    std::vector<std::pair<std::string, std::vector<CheckReport>>> groups;
    std::vector<bool> verdicts;
    nlohmann::json params = nlohmann::json::object();
    RunResult out;
    const auto& cmd = c.command;

    if (cmd == "selberg-check") {
        SelbergParams p{c.l, c.m, c.kappa.value_or(2.5)};
        try {
            p.validate();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (p.l > 4) throw ConfigError("--l must be at most 4");
        groups = detail::single(selberg_check(p, detail::setup_from(c).quad, c.tolerance.value_or(-1.0)));
    } else if (cmd == "duality-check") {
        const auto wd = detail::weight_from(c);
        groups = detail::single(duality_gap(detail::upper_z(c, {1, 2}), wd, detail::setup_from(c), c.tolerance.value_or(-1.0)));
    } else if (cmd == "ode-check") {
        const auto wd = detail::weight_from(c);
        const cplx z = detail::upper_z(c, {1, 2});
        for (double h : c.h)
            if (!(h > 0) || z.imag() <= 2 * h) throw ConfigError("stencil steps must be positive and keep Im z > 0");
        groups = detail::single(ode_check(z, wd, c.h, detail::setup_from(c), c.tolerance.value_or(1e-5)));
    } else if (cmd == "asympt-check") {
        const auto wd = detail::weight_from(c);
        auto zs = c.z_list.empty() ? std::vector<cplx>{cplx(0, 40), cplx(0, 80)} : c.z_list;
        for (auto z : zs)
            if (!(z.imag() > 0.0)) throw ConfigError("asymptotic points need Im z > 0");
        groups = detail::single(asympt_check(wd, zs, detail::setup_from(c)));
    } else if (cmd == "glrep-check") {
        const auto wd = detail::weight_from(c);
        if (c.points < 1) throw ConfigError("--points must be positive");
        groups = detail::single(glrep_check(wd, c.points, c.seed, c.tolerance.value_or(1e-10)));
    } else if (cmd == "solution-check") {
        const auto wd = detail::weight_from(c);
        const Point p = c.point.value_or(default_solution_point());
        if (std::abs(p[0] - p[1]) == 0.0 || std::abs(p[2] - p[3]) == 0.0) throw ConfigError("z1 = z2 or lambda1 = lambda2");
        if (!(scalar_argument(p).imag() > 0.0)) throw ConfigError("-(lambda1-lambda2)(z1-z2) must have Im > 0");
        groups = detail::single(solution_check(wd, p, c.solution_h, detail::setup_from(c), c.tolerance.value_or(1e-5)));
    } else if (cmd == "saddle-check") {
        const cplx z = detail::upper_z(c, {1, 2});
        if (c.M.size() < 2) throw ConfigError("--M needs at least two values");
        for (double M : c.M)
            if (!(M >= 1.0)) throw ConfigError("M must be at least 1");
        const auto q = detail::setup_from(c).quad;
        std::vector<CheckReport> reps;
        if (c.kind == "Cprime" || c.kind == "both")
            reps.push_back(saddle_check(z, c.a.value_or(0.0), SteepestKind::CPrime, c.M, q));
        if (c.kind == "Cdoubleprime" || c.kind == "both")
            reps.push_back(saddle_check(z, c.a.value_or(0.25), SteepestKind::CDoublePrime, c.M, q));
        if (reps.empty()) throw ConfigError("--kind must be Cprime, Cdoubleprime or both");
        for (auto& r : reps) groups.push_back({r.check, {r}});
    } else if (cmd == "dim-scan") {
        DimensionScanConfig dc;
        if (c.m1) dc.m1 = *c.m1;
        if (c.m2) dc.m2 = *c.m2;
        if (c.kappa) dc.kappa = *c.kappa;
        dc.z = detail::upper_z(c, dc.z);
        if (!c.l2_values.empty()) dc.l2_values = c.l2_values;
        if (dc.m2 < 0 || dc.m2 > kMaxDim) throw ConfigError("--m2 must lie in [0, 4] (the fixed dual dimension)");
        for (int l2 : dc.l2_values) {
            if (l2 < 0) throw ConfigError("l2 values must be nonnegative");
            try {
                validate_weight_data(dc.m1, dc.m2, dc.m1 + double(dc.m2 - l2), l2, dc.kappa);
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }
        const auto rows = dimension_scan(dc, detail::setup_from(c));
        const auto rep = dimension_check(rows, dc, c.tolerance.value_or(1e-5));
        if (c.format == "csv") {
            std::ostringstream os;
            write_dimension_csv(os, rows);
            out.text = os.str();
            out.exit_code = rep.pass ? 0 : 1;
            return out;
        }
        groups = detail::single(rep);
    } else if (cmd == "all") {
        params = {{"quick", c.quick}};
        for (auto& cr : acceptance_suite(c.quick)) {
            auto reports = cr.reports;
            for (auto& r : cr.informational) {
                r.check += " (informational)";
                reports.push_back(r);
            }
            groups.push_back({"criterion " + std::to_string(cr.id) + ": " + cr.title, reports});
            verdicts.push_back(cr.pass);
        }
    } else {
        throw ConfigError("unknown subcommand '" + cmd + "'");
    }

    if (cmd != "glrep-check" && cmd != "all")
        for (auto& g : groups)
            for (auto& r : g.second)
                if (!r.params.contains("quadrature")) r.params["quadrature"] = detail::quad_json(detail::setup_from(c).quad);
    if (verdicts.empty())
        for (const auto& g : groups) {
            bool ok = true;
            for (const auto& r : g.second) ok = ok && r.pass;
            verdicts.push_back(ok);
        }
    const double ms = detail::elapsed_ms(t0);
    if (groups.size() == 1 && groups[0].second.size() == 1 && cmd != "all") {
        out.json = report_json(groups[0].second[0]);
    } else {
        out.json = suite_json(cmd, params, groups, verdicts, ms);
    }
    out.text = out.json.dump(2) + "\n";
    out.exit_code = out.json["pass"].get<bool>() ? 0 : 1;
    return out;
}

/// Runs and writes the output; returns the exit code (2 for ConfigError).
inline int run_and_write(const RunConfig& c, std::ostream& err = std::cerr) {
    try {
        const RunResult r = run(c);
        if (c.output.empty()) {
            std::cout << r.text;
        } else {
            std::ofstream f(c.output);
            if (!f) throw ConfigError("cannot open output file " + c.output);
            f << r.text;
        }
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "CheckFailure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hyperdual
