#include "cli.hpp"

#include "volsel/csv.hpp"
#include "volsel/derand.hpp"
#include "volsel/error.hpp"
#include "volsel/linalg.hpp"
#include "volsel/oracle.hpp"
#include "volsel/random.hpp"
#include "volsel/sketch.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

namespace volsel::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"sample", "select", "approx-sample", "verify", "lowerbound", "bench"};

std::string subroutine_name(MarginalSubroutine s) {
    return s == MarginalSubroutine::Gram ? "gram" : "svd";
}

json one_based(const std::vector<std::size_t>& indices) {
    json out = json::array();
    for (std::size_t i : indices) out.push_back(i + 1);
    return out;
}

std::string index_csv(const std::vector<std::size_t>& indices) {
    std::ostringstream os;
    for (std::size_t j = 0; j < indices.size(); ++j) os << (j ? "," : "") << indices[j] + 1;
    os << '\n';
    return os.str();
}

RealMatrix load_input(const RunConfig& cfg) {
    if (!cfg.input) throw Error(ErrorKind::DomainError, "--input is required for " + cfg.command);
    return ingest_csv(*cfg.input);
}

RunOutcome emit(const RunConfig& cfg, const json& report, const std::vector<std::size_t>* indices,
                int exit_code = kExitOk) {
    if (cfg.output == OutputFormat::Csv) return {exit_code, index_csv(*indices)};
    return {exit_code, report.dump(2) + "\n"};
}

RunOutcome run_sample(const RunConfig& cfg) {
    const RealMatrix a = load_input(cfg);
    SamplerOptions opts;
    opts.subroutine = cfg.subroutine;
    opts.exec.threads = cfg.threads;
    const auto result = volume_sample(a, cfg.k, cfg.seed, opts);
    json report{{"command", "sample"},
                {"m", a.rows()},
                {"n", a.cols()},
                {"k", cfg.k},
                {"seed", cfg.seed},
                {"subroutine", subroutine_name(cfg.subroutine)},
                {"indices", one_based(result.indices)},
                {"marginals", result.per_round_marginals}};
    return emit(cfg, report, &result.indices);
}

RunOutcome run_select(const RunConfig& cfg) {
    const RealMatrix a = load_input(cfg);
    const auto result = derandomized_select(a, cfg.k, ExecutionOptions{cfg.threads});
    const auto svd = thin_svd(a);
    const RealMatrix residual = residual_after_projection(a, result.indices);
    const double frob_sq = residual.frobenius_norm_sq();
    const double tail_sq = tail_energy(svd, cfg.k);
    const double spectral = spectral_norm(residual);
    const double sigma_next = cfg.k < svd.rank() ? svd.singular_values[cfg.k] : 0.0;
    const double kk = static_cast<double>(cfg.k);
    const double frob_bound = (kk + 1.0) * tail_sq;
    const double spectral_bound = (kk + 1.0) * (static_cast<double>(a.cols()) - kk) * sigma_next * sigma_next;
    const double slack = 1e-8;
    const bool frob_ok = frob_sq <= frob_bound * (1.0 + slack) + 1e-300;
    const bool spectral_ok = spectral * spectral <= spectral_bound * (1.0 + slack) + 1e-300;

    json report{{"command", "select"},
                {"m", a.rows()},
                {"n", a.cols()},
                {"k", cfg.k},
                {"indices", one_based(result.indices)},
                {"initial_expectation", expected_residual_closed_form(a, cfg.k)},
                {"conditional_expectations", result.conditional_expectations},
                {"frobenius_residual_sq", frob_sq},
                {"best_rank_k_residual_sq", tail_sq},
                {"frobenius_bound", frob_bound},
                {"frobenius_bound_holds", frob_ok},
                {"spectral_residual_sq", spectral * spectral},
                {"spectral_bound", spectral_bound},
                {"spectral_bound_holds", spectral_ok}};
    return emit(cfg, report, &result.indices, frob_ok && spectral_ok ? kExitOk : kExitVerificationFailed);
}

RunOutcome run_approx(const RunConfig& cfg) {
    const RealMatrix a = load_input(cfg);
    const auto result = approx_volume_sample(a, cfg.k, cfg.eps, cfg.seed, cfg.c_dim, ExecutionOptions{cfg.threads});
    json report{{"command", "approx-sample"},
                {"m", a.rows()},
                {"n", a.cols()},
                {"k", cfg.k},
                {"eps", cfg.eps},
                {"c_dim", cfg.c_dim},
                {"seed", cfg.seed},
                {"indices", one_based(result.indices)},
                {"sketch_applied", result.sketch_dim.has_value()},
                {"sketch_dim", result.sketch_dim ? json(*result.sketch_dim) : json(nullptr)},
                {"sketch_seed", result.sketch_seed ? json(*result.sketch_seed) : json(nullptr)}};
    return emit(cfg, report, &result.indices);
}

RunOutcome run_verify(const RunConfig& cfg) {
    const RealMatrix a = load_input(cfg);
    const auto exact = oracle::brute_force_distribution(a, cfg.k);
    SamplerOptions opts;
    opts.subroutine = cfg.subroutine;
    opts.exec.threads = cfg.threads;
    VolumeSampler sampler(a, cfg.k, opts);
    std::map<oracle::Subset, std::size_t> counts;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        auto s = sampler.sample(mix_seed(cfg.seed, trial)).indices;
        std::ranges::sort(s);
        ++counts[s];
    }
    const double tv = oracle::total_variation(exact, counts, cfg.trials);

    json table = json::array();
    for (std::size_t s = 0; s < exact.subsets.size(); ++s) {
        const auto it = counts.find(exact.subsets[s]);
        const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(cfg.trials);
        table.push_back({{"indices", one_based(exact.subsets[s])},
                         {"exact", exact.probabilities[s]},
                         {"empirical", freq}});
    }

    const double minor_sum = subset_det_sum(a, cfg.k);
    const double minor_rel = std::abs(minor_sum - exact.normalizer) / exact.normalizer;
    const double expected = oracle::expected_residual(a, cfg.k);
    const double bound = (static_cast<double>(cfg.k) + 1.0) * tail_energy(thin_svd(a), cfg.k);
    const bool minor_ok = minor_rel <= 1e-8;
    const bool bound_ok = expected <= bound * (1.0 + 1e-8);
    const bool tv_ok = tv <= cfg.tv_tolerance;
    const bool passed = minor_ok && bound_ok && tv_ok;

    json report{{"command", "verify"},
                {"m", a.rows()},
                {"n", a.cols()},
                {"k", cfg.k},
                {"seed", cfg.seed},
                {"subroutine", subroutine_name(cfg.subroutine)},
                {"trials", cfg.trials},
                {"tv_distance", tv},
                {"tv_tolerance", cfg.tv_tolerance},
                {"subsets", table},
                {"minor_sum", {{"charpoly", minor_sum}, {"enumerated", exact.normalizer}, {"relative_error", minor_rel}, {"passed", minor_ok}}},
                {"expected_residual", {{"value", expected}, {"bound", bound}, {"passed", bound_ok}}},
                {"passed", passed}};
    if (cfg.output == OutputFormat::Csv) throw Error(ErrorKind::DomainError, "verify supports JSON output only");
    return {passed ? kExitOk : kExitVerificationFailed, report.dump(2) + "\n"};
}

RunOutcome run_lowerbound(const RunConfig& cfg) {
    if (cfg.output == OutputFormat::Csv) throw Error(ErrorKind::DomainError, "lowerbound supports JSON output only");
    const RealMatrix a = oracle::lower_bound_matrix(cfg.n, cfg.eps);
    const auto svd = thin_svd(a);
    const double sigma2 = svd.rank() > 1 ? svd.singular_values[1] : 0.0;
    const double nn = static_cast<double>(cfg.n);
    const double e2 = cfg.eps * cfg.eps;
    json ratios = json::array();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const std::vector<std::size_t> s{i};
        const double r = spectral_norm(residual_after_projection(a, s)) / sigma2;
        ratios.push_back(r);
        min_ratio = std::min(min_ratio, r);
    }
    const double floor = std::sqrt(nn) / 2.0;
    const bool passed = min_ratio >= floor;
    json report{{"command", "lowerbound"},
                {"n", cfg.n},
                {"eps", cfg.eps},
                {"sigma_1", svd.singular_values.front()},
                {"sigma_1_closed_form", std::sqrt(nn + e2)},
                {"sigma_2", sigma2},
                {"sigma_2_closed_form", cfg.eps},
                {"ratios", ratios},
                {"min_ratio", min_ratio},
                {"ratio_closed_form", std::sqrt(nn + e2) / std::sqrt(1.0 + e2)},
                {"sqrt_n_over_2", floor},
                {"passed", passed}};
    return {passed ? kExitOk : kExitVerificationFailed, report.dump(2) + "\n"};
}

RealMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (auto& x : a.row(i)) x = rng.normal();
    return a;
}

RunOutcome run_bench(const RunConfig& cfg) {
    if (cfg.output == OutputFormat::Csv) throw Error(ErrorKind::DomainError, "bench supports JSON output only");
    json sizes = json::array();
    json crossover = nullptr;
    for (std::size_t n : cfg.bench_sizes) {
        const std::size_t m = 10 * n;
        const std::size_t k = std::min(cfg.k, n);
        const RealMatrix a = random_matrix(m, n, mix_seed(cfg.seed, n));
        json entry{{"m", m}, {"n", n}, {"k", k}};
        double totals[2] = {0.0, 0.0};
        for (auto sub : {MarginalSubroutine::Gram, MarginalSubroutine::Svd}) {
            std::vector<double> rounds;
            SamplerOptions opts;
            opts.subroutine = sub;
            opts.exec.threads = cfg.threads;
            opts.round_seconds = &rounds;
            const auto started = std::chrono::steady_clock::now();
            volume_sample(a, k, cfg.seed, opts);
            const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            totals[sub == MarginalSubroutine::Gram ? 0 : 1] = total;
            entry[subroutine_name(sub)] = {{"total_seconds", total}, {"round_seconds", rounds}};
        }
        sizes.push_back(entry);
        if (crossover.is_null() && totals[1] < totals[0]) crossover = {{"m", m}, {"n", n}};
    }
    json report{{"command", "bench"}, {"seed", cfg.seed}, {"k", cfg.k}, {"sizes", sizes}, {"svd_faster_from", crossover}};
    return {kExitOk, report.dump(2) + "\n"};
}

} // namespace

void RunConfig::validate() const {
    if (std::ranges::find(kCommands, command) == kCommands.end())
        throw Error(ErrorKind::DomainError, "unknown command '" + command + "'");
    if (k == 0) throw Error(ErrorKind::DomainError, "--k must be at least 1");
    if (threads == 0) throw Error(ErrorKind::DomainError, "--threads must be at least 1");
    if (command == "approx-sample" && !(eps > 0.0 && eps <= 0.5))
        throw Error(ErrorKind::DomainError, "--eps must lie in (0, 1/2]");
    if (command == "lowerbound" && !(eps > 0.0 && eps < 1.0))
        throw Error(ErrorKind::DomainError, "--eps must lie in (0, 1) for lowerbound");
    if (command == "verify" && trials == 0) throw Error(ErrorKind::DomainError, "--trials must be positive");
    if (command == "bench" && bench_sizes.empty()) throw Error(ErrorKind::DomainError, "--sizes is empty");
}

RunOutcome run(const RunConfig& cfg) {
    try {
        cfg.validate();
        if (cfg.command == "sample") return run_sample(cfg);
        if (cfg.command == "select") return run_select(cfg);
        if (cfg.command == "approx-sample") return run_approx(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
        if (cfg.command == "lowerbound") return run_lowerbound(cfg);
        return run_bench(cfg);
    } catch (const Error& e) {
        json err{{"command", cfg.command}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
        return {kExitInputError, err.dump(2) + "\n"};
    }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, int& exit_code) {
    RunConfig cfg;
    std::optional<std::size_t> threads;
    std::string output = "json";
    std::string subroutine = "gram";

    CLI::App app{"volsel: volume sampling and deterministic row-subset selection"};
    app.require_subcommand(1);
    const std::map<std::string, std::string> descriptions{
        {"sample", "exact volume sampling of k rows"},
        {"select", "deterministic row-subset selection with certified bounds"},
        {"approx-sample", "approximate volume sampling after a Gaussian sketch"},
        {"verify", "compare the sampler against the brute-force distribution"},
        {"lowerbound", "spectral ratios of the one-row lower-bound matrix"},
        {"bench", "per-round timings of both marginal subroutines"}};
    for (const auto& name : kCommands) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--input", cfg.input, "CSV matrix");
        sub->add_option("--k", cfg.k, "subset size");
        sub->add_option("--eps", cfg.eps, "accuracy parameter");
        sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
        sub->add_option("--subroutine", subroutine, "marginal subroutine")->check(CLI::IsMember({"gram", "svd"}));
        sub->add_option("--trials", cfg.trials, "number of samples for verify");
        sub->add_option("--threads", threads, "worker threads (falls back to VOLSEL_THREADS)");
        sub->add_option("--output", output, "report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--c-dim", cfg.c_dim, "sketch dimension constant");
        sub->add_option("--tv-tol", cfg.tv_tolerance, "TV distance tolerance for verify");
        sub->add_option("--n", cfg.n, "lower-bound matrix size");
        sub->add_option("--sizes", cfg.bench_sizes, "bench column counts (m = 10 n)");
        sub->final_callback([&cfg, name] { cfg.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        exit_code = app.exit(e) == 0 ? kExitOk : kExitInputError;
        return std::nullopt;
    }
    cfg.subroutine = subroutine == "svd" ? MarginalSubroutine::Svd : MarginalSubroutine::Gram;
    cfg.output = output == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (threads) {
        cfg.threads = *threads;
    } else if (const char* env = std::getenv("VOLSEL_THREADS")) {
        try {
            cfg.threads = std::stoul(env);
        } catch (const std::exception&) {
            std::cerr << "ignoring invalid VOLSEL_THREADS='" << env << "'\n";
        }
    }
    return cfg;
}

} // namespace volsel::cli
