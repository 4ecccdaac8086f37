#pragma once

#include "volsel/matrix.hpp"
#include "volsel/parallel.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace volsel {

enum class MarginalSubroutine { Gram, Svd };

/// Unnormalised per-row weights p_1..p_m for one round of the sampler.
struct MarginalVector {
    std::vector<double> weights;
    std::size_t round = 0;   // t, 1-based
    std::size_t target = 0;  // k

    double total() const noexcept;
    std::vector<double> normalized() const;
};

/// Outcome of a sampler or selector run. Indices are 0-based and in the order
/// they were chosen.
struct SelectionResult {
    std::vector<std::size_t> indices;
    /// Normalised marginals of every round (samplers only).
    std::vector<std::vector<double>> per_round_marginals;
    /// Conditional expectation of the final residual after each round (selector only).
    std::vector<double> conditional_expectations;
    std::uint64_t seed = 0;
    /// Set when the input was sketched before sampling.
    std::optional<std::size_t> sketch_dim;
    std::optional<std::uint64_t> sketch_seed;

    bool operator==(const SelectionResult&) const = default;
};

/// p_i = ||b_i||^2 |c_{n-k+t}(C_i^T C_i)|, with C_i^T C_i formed from G = B^T B by a
/// rank-two update. Rows with ||b_i||^2 <= delta_zero get weight 0. Throws
/// Degenerate if every weight is zero.
MarginalVector marginals_gram(const GramMatrix& g, const RealMatrix& b, std::size_t t,
                              std::size_t k, double delta_zero, const ExecutionOptions& exec = {});

/// Same weights from one thin SVD of B, using the rank-one update of the
/// characteristic polynomial given by the matrix determinant lemma.
MarginalVector marginals_svd(const RealMatrix& b, std::size_t t, std::size_t k, double delta_zero,
                             const ExecutionOptions& exec = {});

struct SamplerOptions {
    MarginalSubroutine subroutine = MarginalSubroutine::Gram;
    ExecutionOptions exec;
    /// When set, receives the wall-clock seconds spent in each round.
    std::vector<double>* round_seconds = nullptr;
};

/// Reusable sampler for many draws from the same matrix. The rank check runs
/// once and the marginals of every prefix already visited are cached (up to a
/// memory budget), so sample(seed) returns exactly volume_sample(a, k, seed, options).
class VolumeSampler {
public:
    VolumeSampler(const RealMatrix& a, std::size_t k, const SamplerOptions& options = {});

    SelectionResult sample(std::uint64_t seed);

private:
    struct Node {
        RealMatrix b;
        std::optional<GramMatrix> g;
        std::vector<double> weights;
        std::vector<double> normalized;
    };
    std::shared_ptr<const Node> make_node(RealMatrix b, std::optional<GramMatrix> g, std::size_t t);
    std::shared_ptr<const Node> child(const Node& parent, std::size_t chosen, std::size_t t);

    std::size_t k_;
    SamplerOptions options_;
    double delta_zero_;
    std::shared_ptr<const Node> root_;
    std::map<std::vector<std::size_t>, std::shared_ptr<const Node>> cache_;
    std::size_t cached_doubles_ = 0;
};

/// Draws an ordered k-tuple of distinct rows whose underlying set S has
/// probability proportional to det(A_S A_S^T). Throws RankError when k exceeds
/// the numerical rank of A.
SelectionResult volume_sample(const RealMatrix& a, std::size_t k, std::uint64_t seed,
                              const SamplerOptions& options = {});

/// Inverse-transform draw from unnormalised weights using one uniform in [0, 1).
/// Cut points resolve to the lower index; zero-weight entries are never chosen.
std::size_t draw_index(const std::vector<double>& weights, double uniform);

} // namespace volsel
