#pragma once

#include "volsel/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace volsel::cli {

enum class OutputFormat { Json, Csv };

struct RunConfig {
    std::string command;  // sample | select | approx-sample | verify | lowerbound | bench
    std::optional<std::filesystem::path> input;
    std::size_t k = 1;
    double eps = 0.5;
    std::uint64_t seed = 0;
    MarginalSubroutine subroutine = MarginalSubroutine::Gram;
    std::size_t trials = 200000;
    std::size_t threads = 1;
    OutputFormat output = OutputFormat::Json;
    double c_dim = 4.0;
    double tv_tolerance = 0.02;
    std::size_t n = 4;                       // lowerbound
    std::vector<std::size_t> bench_sizes{10, 20, 40, 80};  // bench: n values, m = 10 n

    /// Throws DomainError describing the first invalid field.
    void validate() const;
};

struct RunOutcome {
    int exit_code = 0;  // 0 success, 1 input error, 2 verification failure
    std::string output;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Parses argv into a RunConfig. VOLSEL_THREADS is read when --threads is absent.
/// Returns nullopt after printing help or a usage error (exit code in `exit_code`).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, int& exit_code);

RunOutcome run(const RunConfig& cfg);

} // namespace volsel::cli
