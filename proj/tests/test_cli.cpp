#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <decimate/cli.hpp>

using namespace decimate;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "decimate");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

} // namespace

TEST(Cli, ParseNumber) {
    EXPECT_EQ(std::get<Rational>(cli::parse_number("1/3")), Rational(1, 3));
    EXPECT_EQ(std::get<Rational>(cli::parse_number("2")), Rational(2));
    EXPECT_DOUBLE_EQ(std::get<double>(cli::parse_number("0.25")), 0.25);
    EXPECT_THROW(cli::parse_number("1/0"), validation_error);
    EXPECT_THROW(cli::parse_number("abc"), validation_error);
    EXPECT_THROW(cli::parse_number("1/3x"), validation_error);
}

TEST(Cli, TriadicPair) {
    EXPECT_EQ(cli::triadic_pair(Rational(1, 3)), (std::pair<std::int64_t, int>{1, 1}));
    EXPECT_EQ(cli::triadic_pair(Rational(4, 9)), (std::pair<std::int64_t, int>{4, 2}));
    EXPECT_EQ(cli::triadic_pair(Rational(0)), (std::pair<std::int64_t, int>{0, 1}));
    EXPECT_EQ(cli::triadic_pair(Rational(4, 3)), (std::pair<std::int64_t, int>{1, 1}));
    EXPECT_FALSE(cli::triadic_pair(Rational(1, 2)).has_value());
    EXPECT_FALSE(cli::triadic_pair(Frequency{1.0 / 3.0}).has_value());
    EXPECT_EQ(cli::triadic_label(Rational(2, 27)), "2/3^3");
}

TEST(Cli, TableOneJson) {
    const auto r = run({"amo-spectrum", "--p", "1/3", "--beta", "1", "--alpha", "1/3", "--level", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const auto ev = j.at("eigenvalues").get<std::vector<double>>();
    const double a = std::sqrt(217.0), b = std::sqrt(145.0);
    const std::vector<double> want{(1 - a) / 12, (5 - b) / 12, (1 + a) / 12, (5 + b) / 12};
    ASSERT_EQ(ev.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], want[i], 1e-10);
    EXPECT_EQ(j.at("method"), "decimation");
}

TEST(Cli, DecimalAlphaRoutesToDirect) {
    const auto r = run({"amo-spectrum", "--alpha", "0.3333333333333333", "--level", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("method"), "direct");
    const auto bad = run({"amo-spectrum", "--alpha", "0.25", "--method", "decimation"});
    EXPECT_EQ(bad.code, 2);
}

TEST(Cli, SpectrumCsv) {
    const auto r = run({"laplacian-spectrum", "--p", "1/3", "--level", "1", "--verify"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[0], "index,eigenvalue");
    EXPECT_EQ(l[1], "0,0");
    EXPECT_EQ(l[4], "3,2");
    EXPECT_NE(r.err.find("hausdorff"), std::string::npos);
}

TEST(Cli, DecimationPoly) {
    const auto r = run({"decimation-poly", "--p", "1/3", "--beta", "1", "--alpha", "1/3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const auto c = j.at("coeffs").get<std::vector<double>>();
    const std::vector<double> want{-9.0 / 8, -55.0 / 8, 0.0, 4.5};
    ASSERT_EQ(c.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(c[i], want[i], 1e-10);
    const auto e = j.at("exceptional").get<std::vector<double>>();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NEAR(e[0], -5.0 / 6, 1e-12);
    EXPECT_NEAR(e[1], -1.0 / 6, 1e-12);
    EXPECT_EQ(j.at("n"), 1);
    EXPECT_TRUE(j.contains("phi_scale"));
}

TEST(Cli, IdsAndGaps) {
    const auto r = run({"ids", "--p", "1/3", "--level", "3", "--from", "0", "--to", "2", "--points", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[0], "x,N");
    EXPECT_EQ(l[5], "2,1");
    const auto g = run({"gaps", "--p", "1/3", "--alpha", "1/3", "--level", "5", "--min-width", "0.01", "--format", "json"});
    ASSERT_EQ(g.code, 0) << g.err;
    const auto j = nlohmann::json::parse(g.out).at("gaps");
    ASSERT_FALSE(j.empty());
    for (const auto& gap : j) {
        const auto lab = gap.at("exact_label").get<std::string>();
        EXPECT_NE(lab.find("/3^"), std::string::npos) << lab;
    }
    const auto csv = run({"gaps", "--p", "1/3", "--alpha", "1/3", "--level", "4"});
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(lines(csv.out)[0], "lo,hi,label");
}

TEST(Cli, ButterflyCsvAndSvg) {
    const auto svg = (std::filesystem::temp_directory_path() / "decimate_cli_test.svg").string();
    const auto r = run({"butterfly", "--p", "1/2", "--level", "2", "--count", "5", "--svg", svg});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    EXPECT_EQ(l[0], "alpha,eigenvalue");
    EXPECT_EQ(l.size(), 1u + 5u * 10u);
    std::ifstream f(svg);
    std::string head;
    std::getline(f, head);
    EXPECT_EQ(head.rfind("<svg", 0), 0u);
    std::filesystem::remove(svg);
    const auto beta = run({"butterfly", "--sweep", "beta", "--alpha", "0.618", "--level", "2", "--count", "3"});
    ASSERT_EQ(beta.code, 0) << beta.err;
    EXPECT_EQ(lines(beta.out)[0], "beta,eigenvalue");
}

TEST(Cli, JuliaSeeded) {
    const auto a = run({"julia", "--p", "0.3", "--mode", "stochastic", "--depth", "50", "--seed", "9"});
    const auto b = run({"julia", "--p", "0.3", "--mode", "stochastic", "--depth", "50", "--seed", "9"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out).size(), 51u);
    const auto full = run({"julia", "--p", "0.3", "--depth", "3"});
    EXPECT_EQ(lines(full.out).size(), 28u);
}

TEST(Cli, ByteStableOutput) {
    const std::vector<std::string> args{"amo-spectrum", "--p", "0.3", "--beta", "2", "--alpha", "4/9", "--level", "4"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, OutputFile) {
    const auto path = (std::filesystem::temp_directory_path() / "decimate_cli_test.csv").string();
    const auto r = run({"laplacian-spectrum", "--level", "2", "-o", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    EXPECT_EQ(first, "index,eigenvalue");
    std::filesystem::remove(path);
}

TEST(Cli, ValidationExitCodes) {
    EXPECT_EQ(run({"laplacian-spectrum", "--p", "1.5"}).code, 2);
    EXPECT_EQ(run({"laplacian-spectrum", "--p", "0"}).code, 2);
    EXPECT_EQ(run({"laplacian-spectrum", "--bogus"}).code, 2);
    EXPECT_EQ(run({"laplacian-spectrum", "--level", "0", "--boundary", "dirichlet"}).code, 2);
    EXPECT_EQ(run({"laplacian-spectrum", "--level", "10"}).code, 2);
    EXPECT_EQ(run({"amo-spectrum", "--level", "1"}).code, 2);  // missing alpha
    EXPECT_EQ(run({"amo-spectrum", "--alpha", "1/9", "--level", "1", "--method", "decimation"}).code, 2);
    EXPECT_EQ(run({"decimation-poly", "--alpha", "1/2"}).code, 2);
    EXPECT_EQ(run({"nope"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DirichletDirect) {
    const auto r = run({"laplacian-spectrum", "--p", "1/2", "--level", "1", "--boundary", "dirichlet"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 3u);
}
