// Command-line front end: one subcommand per verification.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperdual/hyperdual.hpp"

namespace {

using hyperdual::cplx;

// CLI11 stores complex flags as strings; parse_complex turns them into values.
struct ComplexFlags {
    std::string m1, l1, z, a, m;
    std::vector<std::string> zs, point;
};

void add_weight(CLI::App* sub, hyperdual::RunConfig& c, ComplexFlags& f) {
    sub->add_option("--m1", f.m1, "complex weight m1 (a+bi)");
    sub->add_option("--l1", f.l1, "complex weight l1 (a+bi)");
    sub->add_option("--m2", c.m2, "dimension m2");
    sub->add_option("--l2", c.l2, "dimension l2");
    sub->add_option("--kappa", c.kappa, "real kappa");
}

void add_common(CLI::App* sub, hyperdual::RunConfig& c) {
    sub->add_option("--nodes", c.nodes, "Gauss-Legendre nodes per panel (default 8, 12 for stencil checks)");
    sub->add_option("--levels", c.quad.levels, "refinement levels");
    sub->add_option("--target", c.quad.target_rel_err, "target relative error");
    sub->add_option("--truncation", c.quad.truncation, "ray truncation radius override");
    sub->add_flag("--strict", c.quad.strict, "fail when the refinement target is missed");
    sub->add_option("--radius-base", c.geometry.radius_base, "base loop radius");
    sub->add_option("--radius-ratio", c.geometry.radius_ratio, "ratio between nested loop radii");
    sub->add_option("--tolerance", c.tolerance, "override the pass tolerance");
    sub->add_option("-o,--output", c.output, "report file (stdout when omitted)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    hyperdual::RunConfig cfg;
    ComplexFlags f;
    CLI::App app{"hyperdual: loop-contour hypergeometric integrals and their identities"};
    app.set_config("--config", "", "TOML/INI file with option values");
    app.require_subcommand(1, 1);

    auto* selberg = app.add_subcommand("selberg-check", "numeric Selberg integral against the closed form");
    selberg->add_option("--l", cfg.l, "number of variables");
    selberg->add_option("--m", f.m, "complex exponent m");
    selberg->add_option("--kappa", cfg.kappa, "real kappa");
    add_common(selberg, cfg);

    auto* duality = app.add_subcommand("duality-check", "I(z) against the dual-side integrals");
    auto* ode = app.add_subcommand("ode-check", "finite-difference residual of the matrix ODE");
    auto* asympt = app.add_subcommand("asympt-check", "large-z asymptotics of I(z)");
    auto* glrep = app.add_subcommand("glrep-check", "KZ/dynamical compatibility and the duality intertwiner");
    auto* solution = app.add_subcommand("solution-check", "U_b and the ODE transport solve the joint system");
    for (auto* sub : {duality, ode, asympt, glrep, solution}) {
        add_weight(sub, cfg, f);
        add_common(sub, cfg);
    }
    for (auto* sub : {duality, ode}) sub->add_option("--z", f.z, "evaluation point (Im z > 0)");
    ode->add_option("--steps", cfg.h, "stencil steps");
    asympt->add_option("--zs", f.zs, "evaluation points along the imaginary axis");
    glrep->add_option("--points", cfg.points, "random points");
    glrep->add_option("--seed", cfg.seed, "random seed");
    solution->add_option("--point", f.point, "z1 z2 lambda1 lambda2")->expected(4);
    solution->add_option("--step", cfg.solution_h, "stencil step");

    auto* saddle = app.add_subcommand("saddle-check", "steepest-descent leading terms on C' and C''");
    saddle->add_option("--z", f.z, "evaluation point");
    saddle->add_option("--M", cfg.M, "large parameter values (at least two)");
    saddle->add_option("--a", f.a, "complex exponent a");
    saddle->add_option("--kind", cfg.kind, "Cprime, Cdoubleprime or both");
    add_common(saddle, cfg);

    auto* scan = app.add_subcommand("dim-scan", "dual-side scan over l2 with the saddle prediction");
    scan->add_option("--m1", f.m1, "complex weight m1");
    scan->add_option("--m2", cfg.m2, "fixed dual dimension");
    scan->add_option("--kappa", cfg.kappa, "real kappa");
    scan->add_option("--z", f.z, "evaluation point");
    scan->add_option("--l2-values", cfg.l2_values, "dimensions to scan");
    add_common(scan, cfg);

    auto* all = app.add_subcommand("all", "the acceptance suite");
    all->add_flag("--quick", cfg.quick, "reduced parameter grid");
    add_common(all, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!f.m1.empty()) cfg.m1 = hyperdual::parse_complex(f.m1);
        if (!f.l1.empty()) cfg.l1 = hyperdual::parse_complex(f.l1);
        if (!f.z.empty()) cfg.z = hyperdual::parse_complex(f.z);
        if (!f.a.empty()) cfg.a = hyperdual::parse_complex(f.a);
        if (!f.m.empty()) cfg.m = hyperdual::parse_complex(f.m);
        for (const auto& s : f.zs) cfg.z_list.push_back(hyperdual::parse_complex(s));
        if (!f.point.empty()) {
            hyperdual::Point p;
            for (int i = 0; i < 4; ++i) p[i] = hyperdual::parse_complex(f.point[i]);
            cfg.point = p;
        }
    } catch (const hyperdual::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return hyperdual::run_and_write(cfg);
}
