#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "hyperdual/cli.hpp"

using namespace hyperdual;

namespace {

// Runs the built executable (path from the test environment) and returns its exit status.
int run_binary(const std::string& args, std::string* out = nullptr) {
    const char* exe = std::getenv("HYPERDUAL_CLI");
    if (!exe) return -1;
    const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    std::array<char, 4096> buf{};
    std::string text;
    while (std::fgets(buf.data(), int(buf.size()), pipe)) text += buf.data();
    const int status = pclose(pipe);
    if (out) *out = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig duality_config() {
    RunConfig c;
    c.command = "duality-check";
    c.m1 = 2.3;
    c.l1 = 1.3;
    c.m2 = 1;
    c.l2 = 2;
    c.kappa = 2.5;
    c.z = cplx(1, 2);
    return c;
}

}  // namespace

TEST(ParseComplex, Grammar) {
    EXPECT_EQ(parse_complex("1+2i"), cplx(1, 2));
    EXPECT_EQ(parse_complex("1-2i"), cplx(1, -2));
    EXPECT_EQ(parse_complex("-0.5+i"), cplx(-0.5, 1));
    EXPECT_EQ(parse_complex("3i"), cplx(0, 3));
    EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
    EXPECT_EQ(parse_complex("2.5"), cplx(2.5, 0));
    EXPECT_EQ(parse_complex("1e-3-2.5e1i"), cplx(1e-3, -25));
    EXPECT_EQ(parse_complex(".5"), cplx(0.5, 0));
}

TEST(ParseComplex, RejectsWhitespaceAndJunk) {
    for (const char* bad : {"1 + 2i", "", "i2", "1+2j", "abc", "1+2i+3", "--1"})
        EXPECT_THROW(parse_complex(bad), ConfigError) << bad;
}

TEST(Run, SelbergCheckPasses) {
    RunConfig c;
    c.command = "selberg-check";
    c.l = 2;
    c.m = 0.7;
    c.kappa = 2.5;
    const auto r = run(c);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.json["schema"], 1);
    EXPECT_EQ(r.json["check"], "selberg");
    EXPECT_TRUE(r.json["pass"].get<bool>());
    for (const char* key : {"params", "values", "max_rel_err", "tolerance", "runtime_ms", "timestamp"})
        EXPECT_TRUE(r.json.contains(key)) << key;
    for (const auto& v : r.json["values"])
        for (const char* key : {"label", "re", "im", "err"}) EXPECT_TRUE(v.contains(key)) << key;
}

TEST(Run, DualityCheckPasses) {
    const auto r = run(duality_config());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_LE(r.json["max_rel_err"].get<double>(), 1e-5);
}

TEST(Run, DualityCheckRejectsLowerHalfPlane) {
    auto c = duality_config();
    c.z = cplx(1, -2);
    EXPECT_THROW(run(c), ConfigError);
    c.z = cplx(1, 0);
    EXPECT_THROW(run(c), ConfigError);
}

TEST(Run, WeightValidationIsConfigError) {
    auto c = duality_config();
    c.m1 = 1.0;
    c.l1 = 1.0;
    EXPECT_THROW(run(c), ConfigError);
    c = duality_config();
    c.kappa = 1.0;
    EXPECT_THROW(run(c), ConfigError);
}

TEST(Run, BalanceFillsMissingWeight) {
    auto c = duality_config();
    c.l1.reset();
    const auto r = run(c);
    const cplx l1 = parse_complex(r.json["params"]["weight"]["l1"].get<std::string>());
    EXPECT_NEAR(std::abs(l1 - 1.3), 0.0, 1e-14);
}

TEST(Run, UnknownSubcommand) {
    RunConfig c;
    c.command = "nope";
    EXPECT_THROW(run(c), ConfigError);
}

TEST(Run, TightToleranceFailsCheck) {
    RunConfig c;
    c.command = "selberg-check";
    c.l = 2;
    c.m = 0.7;
    c.kappa = 2.5;
    c.tolerance = 1e-15;
    const auto r = run(c);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(r.json["pass"].get<bool>());
}

TEST(Run, ReportsAreReproducible) {
    RunConfig c;
    c.command = "glrep-check";
    c.m1 = 2.3;
    c.l1 = 1.3;
    c.m2 = 1;
    c.l2 = 2;
    c.kappa = 2.5;
    c.points = 4;
    setenv("HYPERDUAL_THREADS", "1", 1);
    const auto a = run(c);
    setenv("HYPERDUAL_THREADS", "4", 1);
    const auto b = run(c);
    unsetenv("HYPERDUAL_THREADS");
    EXPECT_EQ(numeric_fields(a.json).dump(), numeric_fields(b.json).dump());
}

TEST(Run, DimScanCsv) {
    RunConfig c;
    c.command = "dim-scan";
    c.l2_values = {1, 2};
    c.format = "csv";
    const auto r = run(c);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.text.rfind("l2,l1,a,b,direct_re", 0), 0u);
    c.command = "selberg-check";
    EXPECT_THROW(run(c), ConfigError);
}

TEST(Binary, ExitCodes) {
    if (!std::getenv("HYPERDUAL_CLI")) GTEST_SKIP() << "HYPERDUAL_CLI not set";
    std::string out;
    EXPECT_EQ(run_binary("selberg-check --l 2 --m 0.7 --kappa 2.5", &out), 0);
    const auto j = nlohmann::json::parse(out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(run_binary("duality-check --m1 2.3 --m2 1 --l1 1.3 --l2 2 --kappa 2.5 --z 1+2i"), 0);
    EXPECT_EQ(run_binary("duality-check --m1 2.3 --m2 1 --l1 1.3 --l2 2 --kappa 2.5 --z 1-2i"), 2);
    EXPECT_EQ(run_binary("duality-check --m1 2.3 --m2 1 --l1 1.3 --l2 2 --kappa 2.5 --z 1+2j"), 2);
    EXPECT_EQ(run_binary("selberg-check --l 2 --m 0.7 --kappa 2.5 --tolerance 1e-15"), 1);
    EXPECT_EQ(run_binary("no-such-command"), 2);
}

TEST(Run, StencilCheckUsesFinerDefault) {
    RunConfig c;
    c.command = "ode-check";
    c.m1 = 2.3;
    c.l1 = 1.3;
    c.m2 = 1;
    c.l2 = 2;
    c.kappa = 2.5;
    c.z = cplx(1, 2);
    const auto r = run(c);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.json["params"]["quadrature"]["nodes"], 12);
}

TEST(ReportJson, NonFiniteMetricStaysNumeric) {
    CheckReport rep;
    rep.check = "x";
    rep.update(std::numeric_limits<double>::infinity());
    const auto j = report_json(rep);
    EXPECT_TRUE(j["max_rel_err"].is_number());
    EXPECT_FALSE(j["pass"].get<bool>());
}
