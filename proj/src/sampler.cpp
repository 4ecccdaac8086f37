#include "volsel/sampler.hpp"

#include "volsel/charpoly.hpp"
#include "volsel/error.hpp"
#include "volsel/linalg.hpp"
#include "volsel/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace volsel {

namespace {

void check_round(std::size_t t, std::size_t k, std::size_t n) {
    if (k == 0 || t == 0 || t > k) {
        throw Error(ErrorKind::DomainError, "round t = " + std::to_string(t) +
                                                " must satisfy 1 <= t <= k = " + std::to_string(k));
    }
    if (k > n) {
        throw Error(ErrorKind::RankError, "k = " + std::to_string(k) + " exceeds column count " +
                                              std::to_string(n));
    }
}

// Weights at or below 1e-13 ||B||_F^2 e_q(lambda(B^T B)) are set to zero.
void clear_noise_and_require_weight(MarginalVector& p, double frobenius_sq,
                                    const std::vector<double>& lambda, std::size_t q) {
    std::vector<double> clipped(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) clipped[j] = std::max(lambda[j], 0.0);
    const double floor = 1e-13 * frobenius_sq * elementary_symmetric(clipped)[q];
    for (double& w : p.weights)
        if (w <= floor) w = 0.0;
    for (double w : p.weights)
        if (w > 0.0) return;
    throw Error(ErrorKind::Degenerate, "all marginal weights vanish in round " +
                                           std::to_string(p.round));
}

} // namespace

double MarginalVector::total() const noexcept {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

std::vector<double> MarginalVector::normalized() const {
    const double s = total();
    if (!(s > 0.0)) throw Error(ErrorKind::Degenerate, "cannot normalise zero marginals");
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / s;
    return out;
}

MarginalVector marginals_gram(const GramMatrix& g, const RealMatrix& b, std::size_t t,
                              std::size_t k, double delta_zero, const ExecutionOptions& exec) {
    const std::size_t n = b.cols();
    check_round(t, k, n);
    if (g.dim() != n) throw Error(ErrorKind::DomainError, "Gram dimension does not match B");
    const std::size_t index = n - k + t;

    MarginalVector p{std::vector<double>(b.rows(), 0.0), t, k};
    if (t == k) {
        // |c_n| = 1, so the last round is squared-length sampling.
        for (std::size_t i = 0; i < b.rows(); ++i) {
            const double beta = squared_norm(b.row(i));
            if (beta > delta_zero) p.weights[i] = beta;
        }
        clear_noise_and_require_weight(p, g.trace(), {}, 0);
        return p;
    }
    parallel_for(b.rows(), exec.threads, [&](std::size_t i) {
        const auto bi = b.row(i);
        const double beta = squared_norm(bi);
        if (beta <= delta_zero) return;
        const auto projected = gram_after_projection(g, bi, delta_zero);
        p.weights[i] = beta * charpoly_direct(projected, g.trace()).abs_coeff(index);
    });
    clear_noise_and_require_weight(p, g.trace(), symmetric_eigenvalues(g), k - t);
    return p;
}

MarginalVector marginals_svd(const RealMatrix& b, std::size_t t, std::size_t k, double delta_zero,
                             const ExecutionOptions& exec) {
    const std::size_t n = b.cols();
    check_round(t, k, n);
    const auto svd = thin_svd(b, delta_zero);
    const std::size_t r = svd.rank();

    // Squared singular values padded with zeros to the Gram dimension n.
    std::vector<double> lambda(n, 0.0);
    for (std::size_t j = 0; j < r; ++j) lambda[j] = svd.singular_values[j] * svd.singular_values[j];

    // Coefficient n-k+t of f + (1/beta) sum_j lambda_j u_ij^2 g_j equals, up to
    // the common sign (-1)^q with q = k-t,
    //   e_q(lambda) - (1/beta) sum_j lambda_j^2 u_ij^2 e_{q-1}(lambda without j).
    const std::size_t q = k - t;
    const double f_coeff = elementary_symmetric(lambda)[q];
    std::vector<double> g_coeff(r, 0.0);
    if (q > 0) {
        std::vector<double> rest;
        rest.reserve(n - 1);
        for (std::size_t j = 0; j < r; ++j) {
            rest.clear();
            for (std::size_t l = 0; l < n; ++l)
                if (l != j) rest.push_back(lambda[l]);
            g_coeff[j] = elementary_symmetric(rest)[q - 1];
        }
    }

    MarginalVector p{std::vector<double>(b.rows(), 0.0), t, k};
    parallel_for(b.rows(), exec.threads, [&](std::size_t i) {
        const double beta = squared_norm(b.row(i));
        if (beta <= delta_zero) return;
        double correction = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            const double u = svd.left[j][i];
            correction += lambda[j] * lambda[j] * u * u * g_coeff[j];
        }
        p.weights[i] = std::abs(beta * f_coeff - correction);
    });
    clear_noise_and_require_weight(p, b.frobenius_norm_sq(), lambda, q);
    return p;
}

std::size_t draw_index(const std::vector<double>& weights, double uniform) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw Error(ErrorKind::Degenerate, "cannot sample from zero weights");
    double cumulative = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        cumulative += weights[i] / total;
        if (uniform <= cumulative) return i;
    }
    return last_positive;
}

namespace {

constexpr std::size_t kCacheBudgetDoubles = std::size_t{1} << 24;

} // namespace

VolumeSampler::VolumeSampler(const RealMatrix& a, std::size_t k, const SamplerOptions& options)
    : k_(k), options_(options), delta_zero_(zero_row_threshold(a)) {
    const std::size_t rank = numerical_rank(a);
    if (k == 0 || k > rank) {
        throw Error(ErrorKind::RankError, "k = " + std::to_string(k) + " but numerical rank is " +
                                              std::to_string(rank));
    }
    std::optional<GramMatrix> g;
    if (options_.subroutine == MarginalSubroutine::Gram) g = gram(a);
    root_ = make_node(a, std::move(g), 1);
}

std::shared_ptr<const VolumeSampler::Node> VolumeSampler::make_node(RealMatrix b,
                                                                    std::optional<GramMatrix> g,
                                                                    std::size_t t) {
    const auto started = std::chrono::steady_clock::now();
    auto p = g ? marginals_gram(*g, b, t, k_, delta_zero_, options_.exec)
               : marginals_svd(b, t, k_, delta_zero_, options_.exec);
    auto node = std::make_shared<Node>(Node{std::move(b), std::move(g), std::move(p.weights), {}});
    node->normalized = MarginalVector{node->weights, t, k_}.normalized();
    if (options_.round_seconds != nullptr) {
        options_.round_seconds->push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    }
    return node;
}

std::shared_ptr<const VolumeSampler::Node> VolumeSampler::child(const Node& parent,
                                                                std::size_t chosen, std::size_t t) {
    const auto bi = parent.b.row(chosen);
    std::optional<GramMatrix> g;
    if (parent.g) g = gram_after_projection(*parent.g, bi, delta_zero_);
    return make_node(project_out_row(parent.b, chosen, delta_zero_), std::move(g), t);
}

SelectionResult VolumeSampler::sample(std::uint64_t seed) {
    Rng rng(seed);
    SelectionResult result;
    result.seed = seed;
    std::shared_ptr<const Node> node = root_;
    for (std::size_t t = 1; t <= k_; ++t) {
        const std::size_t chosen = draw_index(node->weights, rng.uniform());
        result.indices.push_back(chosen);
        result.per_round_marginals.push_back(node->normalized);
        if (t == k_) break;

        if (auto it = cache_.find(result.indices); it != cache_.end()) {
            node = it->second;
            continue;
        }
        node = child(*node, chosen, t + 1);
        const std::size_t size = node->b.rows() * node->b.cols() +
                                 (node->g ? node->g->dim() * node->g->dim() : 0);
        if (cached_doubles_ + size <= kCacheBudgetDoubles) {
            cache_.emplace(result.indices, node);
            cached_doubles_ += size;
        }
    }
    return result;
}

SelectionResult volume_sample(const RealMatrix& a, std::size_t k, std::uint64_t seed,
                              const SamplerOptions& options) {
    return VolumeSampler(a, k, options).sample(seed);
}

} // namespace volsel
