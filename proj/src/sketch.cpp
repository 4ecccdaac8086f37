#include "volsel/sketch.hpp"

#include "volsel/error.hpp"
#include "volsel/random.hpp"

#include <cmath>
#include <vector>

namespace volsel {

void ProjectionConfig::validate() const {
    if (k == 0) throw Error(ErrorKind::DomainError, "k must be at least 1");
    if (m == 0) throw Error(ErrorKind::DomainError, "m must be at least 1");
    if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorKind::DomainError, "eps must lie in (0, 1/2]");
    if (!(c_dim > 0.0)) throw Error(ErrorKind::DomainError, "c_dim must be positive");
}

std::size_t ProjectionConfig::sketch_dim() const {
    validate();
    const double kk = static_cast<double>(k);
    const double d = std::ceil(c_dim * kk * kk * std::log(static_cast<double>(m)) / (eps * eps));
    return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

RealMatrix gaussian_sketch(const RealMatrix& a, const ProjectionConfig& cfg,
                           const ExecutionOptions& exec) {
    const std::size_t d = cfg.sketch_dim();
    const std::size_t n = a.cols();
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));

    // R stored transposed: row j holds column j of R.
    RealMatrix rt(d, n);
    parallel_for(d, exec.threads, [&](std::size_t j) {
        Rng rng(mix_seed(cfg.seed, j));
        for (auto& x : rt.row(j)) x = scale * rng.normal();
    });

    RealMatrix out(a.rows(), d);
    parallel_for(a.rows(), exec.threads, [&](std::size_t i) {
        const auto ai = a.row(i);
        auto oi = out.row(i);
        for (std::size_t j = 0; j < d; ++j) oi[j] = dot(ai, rt.row(j));
    });
    return out;
}

ApproxVolumeSampler::ApproxVolumeSampler(const RealMatrix& a, std::size_t k, double eps,
                                         double c_dim, const ExecutionOptions& exec)
    : a_(a), k_(k), eps_(eps), c_dim_(c_dim), exec_(exec),
      d_(ProjectionConfig{k, eps, a.rows(), c_dim, 0}.sketch_dim()) {
    if (d_ >= a_.cols()) {
        SamplerOptions opts;
        opts.exec = exec_;
        exact_.emplace(a_, k_, opts);
    }
}

SelectionResult ApproxVolumeSampler::sample(std::uint64_t seed) {
    if (exact_) return exact_->sample(seed);

    ProjectionConfig cfg{k_, eps_, a_.rows(), c_dim_, mix_seed(seed, 0x5ce7c4)};
    SamplerOptions opts;
    opts.exec = exec_;
    for (int attempt = 0;; ++attempt) {
        const RealMatrix sketched = gaussian_sketch(a_, cfg, exec_);
        try {
            auto result = volume_sample(sketched, k_, seed, opts);
            result.sketch_dim = d_;
            result.sketch_seed = cfg.seed;
            return result;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::RankError || attempt > 0) throw;
            cfg.seed = mix_seed(cfg.seed, 1);
        }
    }
}

SelectionResult approx_volume_sample(const RealMatrix& a, std::size_t k, double eps,
                                     std::uint64_t seed, double c_dim,
                                     const ExecutionOptions& exec) {
    return ApproxVolumeSampler(a, k, eps, c_dim, exec).sample(seed);
}

} // namespace volsel
