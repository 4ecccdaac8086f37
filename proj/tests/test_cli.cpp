#include "cli.hpp"

#include "volsel/csv.hpp"
#include "volsel/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace volsel;
using namespace volsel::cli;
using nlohmann::json;

namespace {

const std::filesystem::path kData = VOLSEL_DATA_DIR;

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

ErrorKind parse_error_kind(std::string_view text) {
    try {
        parse_csv(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return ErrorKind::ParseError;
}

RunConfig config(std::string command, std::size_t k, std::filesystem::path input = {}) {
    RunConfig cfg;
    cfg.command = std::move(command);
    cfg.k = k;
    if (!input.empty()) cfg.input = std::move(input);
    return cfg;
}

std::optional<RunConfig> parse(std::vector<const char*> args, int& code) {
    args.insert(args.begin(), "volsel");
    return parse_args(static_cast<int>(args.size()), args.data(), code);
}

} // namespace

TEST(ParseCsv, Examples) {
    EXPECT_EQ(parse_csv("1,0\n0,1\n"), RealMatrix::identity(2));
    EXPECT_EQ(parse_csv("a,b\n1,2\n3,4\n"), RealMatrix::from_rows({{1, 2}, {3, 4}}));
    EXPECT_EQ(parse_csv("1.5, -2e3\r\n\n  4,5\n"), RealMatrix::from_rows({{1.5, -2000}, {4, 5}}));
    EXPECT_EQ(parse_error_kind("1,2\n3\n"), ErrorKind::NonRectangular);
    EXPECT_EQ(parse_error_kind("1,2\n3,inf\n"), ErrorKind::NonFinite);
    EXPECT_EQ(parse_error_kind("1,2\n3,x\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_error_kind(""), ErrorKind::ParseError);
}

TEST(ParseCsv, ReportsLineAndColumn) {
    try {
        parse_csv("1,2\n3,4\n5,oops\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
    }
}

TEST(IngestCsv, BundledFixtures) {
    const auto a = ingest_csv(kData / "fixture_7x4.csv");
    EXPECT_EQ(a.rows(), 7u);
    EXPECT_EQ(a.cols(), 4u);
    EXPECT_THROW(ingest_csv(kData / "does_not_exist.csv"), Error);
}

TEST(ParseArgs, FlagsAndEnvironmentFallback) {
    int code = -1;
    auto cfg = parse({"select", "--input", "m.csv", "--k", "3", "--subroutine", "svd", "--output", "csv", "--threads", "2"}, code);
    ASSERT_TRUE(cfg);
    EXPECT_EQ(cfg->command, "select");
    EXPECT_EQ(cfg->k, 3u);
    EXPECT_EQ(cfg->subroutine, MarginalSubroutine::Svd);
    EXPECT_EQ(cfg->output, OutputFormat::Csv);
    EXPECT_EQ(cfg->threads, 2u);
    EXPECT_EQ(cfg->seed, 0u);

    ::setenv("VOLSEL_THREADS", "3", 1);
    cfg = parse({"sample", "--k", "1"}, code);
    ASSERT_TRUE(cfg);
    EXPECT_EQ(cfg->threads, 3u);
    cfg = parse({"sample", "--threads", "5"}, code);
    EXPECT_EQ(cfg->threads, 5u);
    ::unsetenv("VOLSEL_THREADS");

    EXPECT_FALSE(parse({"sample", "--subroutine", "qr"}, code));
    EXPECT_EQ(code, kExitInputError);
    EXPECT_FALSE(parse({}, code));
    EXPECT_EQ(code, kExitInputError);
}

TEST(Run, SelectOnDiagonal) {
    const auto out = run(config("select", 2, kData / "diag_3_2_1.csv"));
    ASSERT_EQ(out.exit_code, kExitOk) << out.output;
    const auto report = json::parse(out.output);
    EXPECT_EQ(report["indices"], json::array({1, 2}));
    EXPECT_NEAR(report["frobenius_residual_sq"].get<double>(), 1.0, 1e-12);
    EXPECT_TRUE(report["frobenius_bound_holds"].get<bool>());
    EXPECT_EQ(report["conditional_expectations"].size(), 2u);

    auto csv = config("select", 2, kData / "diag_3_2_1.csv");
    csv.output = OutputFormat::Csv;
    EXPECT_EQ(run(csv).output, "1,2\n");
}

TEST(Run, SampleReportIsDeterministic) {
    auto cfg = config("sample", 2, kData / "fixture_7x4.csv");
    cfg.seed = 42;
    const auto first = run(cfg);
    ASSERT_EQ(first.exit_code, kExitOk) << first.output;
    EXPECT_EQ(first.output, run(cfg).output);
    cfg.threads = 3;
    EXPECT_EQ(first.output, run(cfg).output);

    const auto report = json::parse(first.output);
    EXPECT_EQ(report["indices"].size(), 2u);
    for (const auto& i : report["indices"]) {
        EXPECT_GE(i.get<int>(), 1);
        EXPECT_LE(i.get<int>(), 7);
    }
    ASSERT_EQ(report["marginals"].size(), 2u);
    double sum = 0.0;
    for (const auto& p : report["marginals"][0]) sum += p.get<double>();
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Run, ApproxSampleReportsSketch) {
    auto cfg = config("approx-sample", 1, kData / "diag_3_2_1.csv");
    const auto report = json::parse(run(cfg).output);
    EXPECT_FALSE(report["sketch_applied"].get<bool>());
    EXPECT_TRUE(report["sketch_dim"].is_null());
    cfg.eps = 0.9;
    EXPECT_EQ(run(cfg).exit_code, kExitInputError);
}

TEST(Run, VerifyOnFixture) {
    auto cfg = config("verify", 2, kData / "fixture_7x4.csv");
    cfg.trials = 50000;
    const auto out = run(cfg);
    ASSERT_EQ(out.exit_code, kExitOk) << out.output;
    const auto report = json::parse(out.output);
    EXPECT_LE(report["tv_distance"].get<double>(), 0.02);
    EXPECT_EQ(report["subsets"].size(), 21u);
    EXPECT_TRUE(report["minor_sum"]["passed"].get<bool>());

    cfg.tv_tolerance = 1e-6;
    EXPECT_EQ(run(cfg).exit_code, kExitVerificationFailed);
}

TEST(Run, LowerBound) {
    auto cfg = config("lowerbound", 1);
    cfg.n = 25;
    cfg.eps = 0.1;
    const auto out = run(cfg);
    ASSERT_EQ(out.exit_code, kExitOk) << out.output;
    const auto report = json::parse(out.output);
    EXPECT_GE(report["min_ratio"].get<double>(), 2.5);
    EXPECT_EQ(report["ratios"].size(), 25u);
}

TEST(Run, BenchReportsBothSubroutines) {
    auto cfg = config("bench", 2);
    cfg.bench_sizes = {4, 6};
    const auto out = run(cfg);
    ASSERT_EQ(out.exit_code, kExitOk) << out.output;
    const auto report = json::parse(out.output);
    ASSERT_EQ(report["sizes"].size(), 2u);
    for (const auto& entry : report["sizes"]) {
        EXPECT_EQ(entry["gram"]["round_seconds"].size(), 2u);
        EXPECT_EQ(entry["svd"]["round_seconds"].size(), 2u);
    }
}

TEST(Run, InputErrors) {
    const auto ragged = write_temp("volsel_ragged.csv", "1,2\n3\n");
    const auto out = run(config("sample", 1, ragged));
    EXPECT_EQ(out.exit_code, kExitInputError);
    EXPECT_EQ(json::parse(out.output)["error"], "NonRectangular");
    EXPECT_EQ(run(config("sample", 1)).exit_code, kExitInputError);
    EXPECT_EQ(run(config("sample", 0, kData / "diag_3_2_1.csv")).exit_code, kExitInputError);
    EXPECT_EQ(run(config("sample", 4, kData / "diag_3_2_1.csv")).exit_code, kExitInputError);
    EXPECT_EQ(run(config("nonsense", 1)).exit_code, kExitInputError);
}
