/* SPDX-License-Identifier: Apache-2.0 */
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "dclab/config.hpp"
#include "dclab/field_io.hpp"
#include "dclab/table.hpp"
#include "helpers.hpp"

using namespace dclab;

TEST(Config, ParsesSectionsAndLists)
{
    const ExperimentConfig c = parse_config(R"(
# comment
[experiment]
kind = convergence
seed = 9
[geometry]
n = 48
radius = 0.75
center = 0.1, -0.2
[source]
term = power(2, 0.5)
[analysis]
n_list = 16, 32
kappa_list = 1, 0.5
[audit]
terms = power(1, 1), exp_minus_one
)");
    EXPECT_EQ(c.kind, ExperimentKind::Convergence);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.geometry.n, 48);
    EXPECT_DOUBLE_EQ(c.geometry.center[1], -0.2);
    EXPECT_EQ(c.source, "power(2, 0.5)");
    EXPECT_EQ(c.analysis.n_list, (std::vector<int>{16, 32}));
    ASSERT_EQ(c.audit.terms.size(), 2u);
    EXPECT_EQ(c.audit.terms[0], "power(1, 1)");
}

TEST(Config, RoundTripsLosslessly)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::Flatness;
    c.seed = 123456789;
    c.geometry.radius = 0.1 + 0.2;
    c.analysis.mu = 1.0 / 3.0;
    c.analysis.kappa_list = {1.0, std::ldexp(1.0, -7), 0.3};
    c.solver.tol = 3e-9;
    c.solver.order = SweepOrder::RedBlack;
    c.gradient = GradientSurrogate::Monotone;
    c.boundary.mode = BoundaryMode::Affine;
    c.boundary.slope = {0.25, -1.5, 0.0};
    c.audit.report_only = {"log_one_plus_cube"};
    const ExperimentConfig back = parse_config(serialize_config(c));
    EXPECT_TRUE(back == c);
    EXPECT_EQ(back.geometry.radius, c.geometry.radius);
    EXPECT_EQ(back.analysis.mu, c.analysis.mu);
}

TEST(Config, HashIsFileTextHash)
{
    const std::string text = "[experiment]\nkind = audit\n";
    EXPECT_EQ(parse_config(text).hash, fnv1a64(text));
    EXPECT_EQ(fnv1a64(""), 14695981039346656037ull);
    EXPECT_EQ(hash_hex(0xabcull), "0000000000000abc");
}

TEST(Config, RejectsUnknownKeysAndBadValues)
{
    EXPECT_THROW(parse_config("[geometry]\nbogus = 1\n"), Error);
    EXPECT_THROW(parse_config("[nowhere]\n"), Error);
    EXPECT_THROW(parse_config("[geometry]\nn = abc\n"), Error);
    EXPECT_THROW(parse_config("[geometry]\ndim = 4\n"), Error);
    EXPECT_THROW(parse_config("[stencil]\ngradient = mean\n"), Error);
    EXPECT_THROW(parse_config("key = value\n"), Error);
    try {
        parse_config("[geometry]\n\nn = x\n");
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(Config, SetAndGetValue)
{
    ExperimentConfig c;
    set_config_value(c, "solver", "threads", "4");
    EXPECT_EQ(c.solver.threads, 4);
    EXPECT_EQ(get_config_value(c, "solver", "threads"), "4");
    EXPECT_THROW(set_config_value(c, "solver", "nope", "1"), Error);
}

TEST(ResultTable, RectangularAndTyped)
{
    ResultTable t({"a", "b", "c"});
    t.add_row({std::int64_t{1}, 0.5, std::string("x")});
    EXPECT_THROW(t.add_row({std::int64_t{1}}), Error);
    EXPECT_DOUBLE_EQ(t.number(0, "a"), 1.0);
    EXPECT_DOUBLE_EQ(t.number(0, "b"), 0.5);
    EXPECT_THROW((void)t.number(0, "c"), Error);
    EXPECT_THROW((void)t.at(0, "missing"), Error);
}

TEST(ResultTable, CsvQuotingAndHeader)
{
    ResultTable t({"name", "value"});
    t.config_hash = 0x1234;
    t.add_row({std::string("power(1, 1)"), 0.1});
    t.add_row({std::string("say \"hi\""), std::int64_t{-3}});
    const std::string csv = t.to_csv();
    EXPECT_EQ(csv.rfind("# dclab 0.1.0 config_hash=0000000000001234\r\n", 0), 0u);
    EXPECT_NE(csv.find("\"power(1, 1)\",0.1\r\n"), std::string::npos);
    EXPECT_NE(csv.find("\"say \"\"hi\"\"\",-3\r\n"), std::string::npos);
}

TEST(ResultTable, JsonRecords)
{
    ResultTable t({"k", "v"});
    t.name = "demo";
    t.add_row({std::string("nan"), std::numeric_limits<double>::quiet_NaN()});
    t.add_row({std::string("one"), 1.0});
    const auto j = nlohmann::json::parse(t.to_json());
    EXPECT_EQ(j["name"], "demo");
    ASSERT_EQ(j["records"].size(), 2u);
    EXPECT_EQ(j["records"][1]["v"], 1.0);
    EXPECT_TRUE(j["records"][0]["v"].is_string());
}

class FieldIo : public ::testing::TestWithParam<bool> {};

TEST_P(FieldIo, RoundTripsBitExactly)
{
    const std::vector<double> origin{-1.03125, 0.1}, extent{1.25, 1.25};
    const std::vector<int> cells{20, 20};
    const GridSpec g = make_grid(2, origin, extent, cells);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    ScalarField u(g, 0.0);
    for (NodeId n = 0; n < u.size(); ++n) u[n] = d(rng) * std::pow(10.0, static_cast<int>(n % 40) - 20);
    u[0] = -0.0;
    u[1] = std::numeric_limits<double>::denorm_min();
    const ScalarField back = parse_field(format_field(u, GetParam()));
    EXPECT_EQ(back.grid(), u.grid());
    for (NodeId n = 0; n < u.size(); ++n)
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back[n]), std::bit_cast<std::uint64_t>(u[n])) << n;

    const auto path = std::filesystem::temp_directory_path() / (GetParam() ? "dclab_rt.bin" : "dclab_rt.txt");
    write_field(u, path.string(), GetParam());
    const ScalarField disk = read_field(path.string());
    for (NodeId n = 0; n < u.size(); ++n) EXPECT_EQ(std::bit_cast<std::uint64_t>(disk[n]), std::bit_cast<std::uint64_t>(u[n]));
    std::filesystem::remove(path);
}

INSTANTIATE_TEST_SUITE_P(AsciiAndBinary, FieldIo, ::testing::Values(false, true));

TEST(FieldIoErrors, RejectsMalformedInput)
{
    EXPECT_THROW(parse_field("NOTDCLAB 1 4 0.25 0\n0\n"), Error);
    EXPECT_THROW(parse_field("DCLAB1 1 4 0.25 0\n0\n1\n"), Error);
    EXPECT_THROW(read_field("/nonexistent/dir/field.dclab"), Error);
}
