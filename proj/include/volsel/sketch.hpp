#pragma once

#include "volsel/matrix.hpp"
#include "volsel/parallel.hpp"
#include "volsel/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace volsel {

struct ProjectionConfig {
    std::size_t k = 1;
    double eps = 0.5;
    std::size_t m = 1;
    double c_dim = 4.0;
    std::uint64_t seed = 0;

    /// Throws DomainError unless k >= 1, m >= 1, c_dim > 0 and 0 < eps <= 1/2.
    void validate() const;
    /// d = ceil(c_dim * k^2 * ln(m) / eps^2), at least 1.
    std::size_t sketch_dim() const;
};

/// A R with R an n x d matrix of i.i.d. N(0, 1/d) entries. Column j of R comes
/// from its own stream seeded by (seed, j), so the result does not depend on
/// how the multiply is scheduled.
RealMatrix gaussian_sketch(const RealMatrix& a, const ProjectionConfig& cfg,
                           const ExecutionOptions& exec = {});

/// Repeated approximate sampling from one matrix; sample(seed) equals
/// approx_volume_sample(a, k, eps, seed, c_dim, exec). When the sketch is
/// skipped the exact sampler and its caches are shared across draws.
class ApproxVolumeSampler {
public:
    ApproxVolumeSampler(const RealMatrix& a, std::size_t k, double eps, double c_dim = 4.0,
                        const ExecutionOptions& exec = {});

    SelectionResult sample(std::uint64_t seed);
    std::size_t sketch_dim() const noexcept { return d_; }
    bool sketched() const noexcept { return !exact_.has_value(); }

private:
    RealMatrix a_;
    std::size_t k_;
    double eps_;
    double c_dim_;
    ExecutionOptions exec_;
    std::size_t d_;
    std::optional<VolumeSampler> exact_;
};

/// Exact volume sampling (Gram subroutine) on the sketched rows. When d >= n
/// the sketch is skipped and A is sampled directly with the same seed. If the
/// sketch loses rank below k it is redrawn once with a fresh seed.
SelectionResult approx_volume_sample(const RealMatrix& a, std::size_t k, double eps,
                                     std::uint64_t seed, double c_dim = 4.0,
                                     const ExecutionOptions& exec = {});

} // namespace volsel
