#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "polya/cli.hpp"

using namespace polya;
using polya::cli::Command;
using polya::cli::OutputFormat;

namespace {

struct Captured {
    int status = 0;
    std::string out;
};

// Runs the built executable through the shell; stderr is folded into stdout
// when `merge` is set.
Captured shell(const std::string& args, bool merge = false) {
    const std::string cmd = std::string(POLYA_CLI_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
    Captured c;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return c;
}

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const cli::RunConfig& cfg) {
    std::ostringstream out, err;
    const int status = cli::run(cfg, out, err);
    return {status, out.str(), err.str()};
}

const char* kThinSphere = R"({"product":[{"interval":{"a":"pi/24","bc":"dirichlet"}},{"sphere2":{}}]})";

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("polya_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Grammar, BuildsEveryKind) {
    EXPECT_EQ(cli::parse_model(R"({"interval":{"a":"pi/24","bc":"dirichlet"}})").meta.dimension, 1);
    EXPECT_TRUE(cli::parse_model(R"({"interval":{"a":"pi/24","bc":"dirichlet"}})").generate(1000).exact());
    EXPECT_FALSE(cli::parse_model(R"({"interval":{"a":0.5,"bc":"neumann"}})").generate(1000).exact());
    EXPECT_EQ(cli::parse_model(R"({"box":{"sides":["10","10"],"bc":"neumann"}})").meta.volume, 100);
    EXPECT_EQ(cli::parse_model(R"({"sphere2":{}})").meta.bc, BoundaryCondition::Closed);
    const auto tri = cli::parse_model(R"({"triangle":{}})");
    EXPECT_TRUE(static_cast<bool>(tri.closed_form));
    EXPECT_EQ(tri.closed_form(1), 1u);
    const auto prod = cli::parse_model(kThinSphere);
    EXPECT_EQ(prod.meta.dimension, 3);
    EXPECT_EQ(polya_constant_exact(prod.meta), PiRational(1296));
    const auto tab = cli::parse_model(
        R"({"tabulated":{"entries":[[0,1],[2,3],[6,5]],"cutoff":10,"dimension":2,"volume":"4pi","bc":"closed"}})");
    EXPECT_EQ(tab.generate(100).total_multiplicity(), 9u);
    EXPECT_EQ(tab.generate(5).total_multiplicity(), 4u);
    EXPECT_EQ(tab.max_cutoff, 10);
}

TEST(Grammar, Rejections) {
    EXPECT_THROW(cli::parse_model("not json"), ConfigError);
    EXPECT_THROW(cli::parse_model(R"({"disk":{}})"), ConfigError);
    EXPECT_THROW(cli::parse_model(R"({"interval":{"a":"pi"}})"), ConfigError);
    EXPECT_THROW(cli::parse_model(R"({"interval":{"a":"x","bc":"dirichlet"}})"), ConfigError);
    EXPECT_THROW(cli::parse_model(R"({"interval":{"a":-1,"bc":"dirichlet"}})"), DomainError);
    EXPECT_THROW(cli::parse_model(R"({"product":[{"sphere2":{}}]})"), ConfigError);
    EXPECT_THROW(cli::parse_model(
                     R"({"product":[{"interval":{"a":1,"bc":"dirichlet"}},{"interval":{"a":1,"bc":"neumann"}}]})"),
                 ConfigError);
    EXPECT_THROW(cli::parse_model(R"({"tabulated":{"entries":[[1,1]],"cutoff":10,"dimension":2,"volume":1,"bc":"neumann"}})"),
                 ValidationError);
}

TEST(Run, ErrorsAreMachineReadable) {
    cli::RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.spec = R"({"disk":{}})";
    cfg.k_max = 10;
    const auto r = run(cfg);
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(r.out.empty());
    const auto j = Json::parse(r.err);
    EXPECT_EQ(j.at("error"), "config_error");
    EXPECT_TRUE(j.at("message").is_string());

    cfg.spec = kThinSphere;
    cfg.k_max.reset();
    EXPECT_EQ(Json::parse(run(cfg).err).at("error"), "config_error");
}

TEST(Run, VerifyExactThinSphere) {
    cli::RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.spec = kThinSphere;
    cfg.k_max = 100000;
    cfg.exact = true;
    cfg.timestamp = false;
    const auto r = run(cfg);
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("constant"), "1296");
    EXPECT_EQ(j.at("report").at("verdict"), "holds");
    EXPECT_EQ(j.at("report").at("checked"), 100000);
    EXPECT_TRUE(j.at("report").at("exact_arithmetic").get<bool>());
    EXPECT_FALSE(j.contains("generated_at"));
}

TEST(Run, VerifyFailureExitsOne) {
    cli::RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.spec = R"({"product":[{"interval":{"a":"pi","bc":"dirichlet"}},{"sphere2":{}}]})";
    cfg.k_max = 5;
    const auto r = run(cfg);
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(Json::parse(r.out).at("report").at("verdict"), "fails");
}

TEST(Run, ExactNeedsSymbolicData) {
    cli::RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.spec = R"({"box":{"sides":[1.0,1.0],"bc":"dirichlet"}})";
    cfg.k_max = 5;
    cfg.exact = true;
    EXPECT_EQ(Json::parse(run(cfg).err).at("error"), "mode_error");
}

TEST(Run, CountingFormAndDump) {
    cli::RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.spec = R"({"box":{"sides":[1.0,1.0],"bc":"neumann"}})";
    cfg.counting_form = true;
    cfg.cutoff = 2000;
    const auto dump = temp_file("dump.csv");
    cfg.dump_path = dump.string();
    const auto r = run(cfg);
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out).at("report").at("mode"), "counting_jumps");
    std::ifstream in(dump);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "k,lhs,rhs,margin");
    std::filesystem::remove(dump);
}

TEST(Run, DeterministicWithoutTimestamp) {
    cli::RunConfig cfg;
    cfg.command = Command::Count;
    cfg.spec = R"({"box":{"sides":["1","2"],"bc":"dirichlet"}})";
    cfg.cutoff = 500;
    cfg.samples = 50;
    cfg.timestamp = false;
    const auto a = run(cfg);
    const auto b = run(cfg);
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    cfg.seed = 7;
    EXPECT_NE(run(cfg).out, a.out);
    cfg.output = OutputFormat::Csv;
    EXPECT_EQ(run(cfg).out.substr(0, 18), "lambda,count,weyl\n");
}

TEST(Run, SpectrumCsvRoundTrip) {
    cli::RunConfig cfg;
    cfg.command = Command::Spectrum;
    cfg.spec = R"({"product":[{"interval":{"a":0.7,"bc":"neumann"}},{"box":{"sides":[1.3,0.4],"bc":"neumann"}}]})";
    cfg.cutoff = 800;
    cfg.output = OutputFormat::Csv;
    const auto path = temp_file("spec.csv");
    cfg.out_path = path.string();
    ASSERT_EQ(run(cfg).status, 0);

    const auto original = cli::parse_model(cfg.spec);
    const std::string tab = R"({"tabulated":{"csv":")" + path.string() +
                            R"(","cutoff":800,"dimension":3,"volume":0.364,"bc":"neumann"}})";
    const auto back = cli::parse_model(tab);
    const CountingFunction a(original.generate(800), original.meta);
    const CountingFunction b(back.generate(800), back.meta);
    std::mt19937_64 rng(cli::kDefaultSeed);
    std::uniform_real_distribution<double> lam(0, 800);
    for (int i = 0; i < 1000; ++i) {
        const double l = lam(rng);
        ASSERT_EQ(a(l), b(l)) << l;
    }
    std::filesystem::remove(path);
}

TEST(Run, ConstantsD3) {
    cli::RunConfig cfg;
    cfg.command = Command::Constants;
    cfg.dimension = 3;
    cfg.gamma = 1.5;
    const auto r = run(cfg);
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_NEAR(j.at("C_d").get<double>(), 1 / (6 * kPi * kPi), 1e-15);
    EXPECT_NEAR(j.at("omega_d").get<double>(), 4 * kPi / 3, 1e-15);
    EXPECT_NEAR(j.at("L_gamma_d").get<double>(), static_cast<double>(l_gamma_d(1.5L, 3)), 1e-15);
    EXPECT_NEAR(j.at("H1").at("value").get<double>(), 0.479487160368, 1e-8);
    EXPECT_NEAR(j.at("H2").at("value").get<double>(), 0.406777834772, 1e-8);
    EXPECT_TRUE(j.at("H2").contains("argmin"));
}

TEST(Run, ConstantsThreshold) {
    cli::RunConfig cfg;
    cfg.command = Command::Constants;
    cfg.dimension = 2;
    cfg.volume = 4 * std::numbers::pi;
    cfg.remainder = 1;
    cfg.threshold = ThresholdCase::ManifoldDirichletD1D2Eq2;
    const auto j = Json::parse(run(cfg).out);
    EXPECT_NEAR(j.at("threshold").at("a0").get<double>(), 0.5, 1e-15);
    EXPECT_EQ(j.at("threshold").at("conditional_on").at(0), "remainder");
}

TEST(Run, RieszMargins) {
    cli::RunConfig cfg;
    cfg.command = Command::Riesz;
    cfg.spec = R"({"box":{"sides":[1.0,1.0],"bc":"dirichlet"}})";
    cfg.lambdas = {50, 500, 5000};
    cfg.gamma = 1;
    cfg.two_term = BoundSide::Upper;
    cfg.cutoff = 5000;
    const auto r = run(cfg);
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("bound"), "berezin");
    for (const auto& row : j.at("rows")) EXPECT_GE(row.at("margin").get<double>(), 0);
    EXPECT_TRUE(j.at("two_term").contains("onset"));
}

TEST(Run, ReproduceSquareTriangle) {
    cli::RunConfig cfg;
    cfg.command = Command::Reproduce;
    cfg.example = "square-triangle";
    const auto r = run(cfg);
    ASSERT_EQ(r.status, 0) << r.out << r.err;
    const auto j = Json::parse(r.out);
    ASSERT_EQ(j.at("checks").size(), 4u);
    for (const auto& c : j.at("checks")) EXPECT_TRUE(c.at("passed").get<bool>()) << c.at("name");
}

TEST(Binary, HelpAndBadArguments) {
    EXPECT_EQ(shell("--help").status, 0);
    const auto bad = shell("verify --spec '{}' --k-max 3", true);
    EXPECT_EQ(bad.status, 2);
    EXPECT_EQ(Json::parse(bad.out).at("error"), "config_error");
    const auto unknown = shell("frobnicate", true);
    EXPECT_EQ(unknown.status, 2);
    EXPECT_EQ(Json::parse(unknown.out).at("error"), "config_error");
}

TEST(Binary, VerifyFromTheCommandLine) {
    const auto r = shell(std::string("verify --spec '") + kThinSphere + "' --k-max 1000 --exact --no-timestamp");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out).at("report").at("verdict"), "holds");
    const auto csv = shell(std::string("--output csv verify --spec '") + kThinSphere + "' --k-max 10");
    EXPECT_EQ(csv.status, 0);
    EXPECT_EQ(csv.out.substr(0, 5), "mode,");
}

TEST(Binary, SphereThinReproduction) {
    const auto r = shell("reproduce sphere-thin --no-timestamp");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = Json::parse(r.out);
    ASSERT_EQ(j.at("checks").size(), 5u);
    for (const auto& c : j.at("checks")) EXPECT_TRUE(c.at("passed").get<bool>()) << c.at("name");
}
