#include "volsel/oracle.hpp"

#include "volsel/error.hpp"
#include "volsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace volsel::oracle {

namespace {

struct LuFactors {
    RealMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

LuFactors lu_factor(const RealMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::DomainError, "LU needs a square matrix");
    const std::size_t n = m.rows();
    LuFactors f{m, std::vector<std::size_t>(n), 1, false};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    auto& a = f.lu;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) {
            f.singular = true;
            continue;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(f.perm[pivot], f.perm[col]);
            f.sign = -f.sign;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            a(r, col) = factor;
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= factor * a(col, j);
        }
    }
    return f;
}

void require_enumerable(std::size_t m, std::size_t k) {
    if (binomial(m, k) > kEnumerationLimit) {
        throw Error(ErrorKind::TooLarge, "C(" + std::to_string(m) + ", " + std::to_string(k) +
                                             ") exceeds the enumeration limit");
    }
}

bool contains(const Subset& s, std::size_t i) { return std::ranges::find(s, i) != s.end(); }

/// Supersets U of `prefix` with |U| = k, each passed sorted.
void for_each_completion(std::size_t m, std::size_t k, const Subset& prefix,
                         const std::function<void(const Subset&)>& visit) {
    Subset free;
    for (std::size_t i = 0; i < m; ++i)
        if (!contains(prefix, i)) free.push_back(i);
    if (prefix.size() > k) return;
    require_enumerable(free.size(), k - prefix.size());
    for_each_subset(free.size(), k - prefix.size(), [&](const Subset& pick) {
        Subset u = prefix;
        for (std::size_t p : pick) u.push_back(free[p]);
        std::ranges::sort(u);
        visit(u);
    });
}

/// ||A - pi_U(A)||_F^2 via the normal equations on A_U; U must have full row rank.
double residual_by_normal_equations(const RealMatrix& a, const Subset& u) {
    const RealMatrix au = a.select_rows(u);
    RealMatrix gu(u.size(), u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) gu(i, j) = dot(au.row(i), au.row(j));
    double total = 0.0;
    std::vector<double> rhs(u.size());
    for (std::size_t l = 0; l < a.rows(); ++l) {
        for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = dot(au.row(i), a.row(l));
        const auto coef = solve(gu, rhs);
        const double projected = dot(coef, rhs);
        total += std::max(0.0, squared_norm(a.row(l)) - projected);
    }
    return total;
}

void check_prefix(const RealMatrix& a, std::size_t k, const Subset& prefix) {
    if (prefix.size() >= k + 1) throw Error(ErrorKind::DomainError, "prefix longer than k");
    for (std::size_t p = 0; p < prefix.size(); ++p) {
        if (prefix[p] >= a.rows()) throw Error(ErrorKind::DomainError, "prefix index out of range");
        for (std::size_t q = 0; q < p; ++q)
            if (prefix[p] == prefix[q])
                throw Error(ErrorKind::InfeasiblePrefix, "prefix repeats a row");
    }
}

} // namespace

double binomial(std::size_t m, std::size_t k) noexcept {
    if (k > m) return 0.0;
    k = std::min(k, m - k);
    double c = 1.0;
    for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(m - k + j) / static_cast<double>(j);
    return std::round(c);
}

void for_each_subset(std::size_t m, std::size_t k, const std::function<void(const Subset&)>& visit) {
    if (k > m) return;
    Subset s(k);
    std::iota(s.begin(), s.end(), 0);
    while (true) {
        visit(s);
        std::size_t pos = k;
        while (pos > 0 && s[pos - 1] == m - k + pos - 1) --pos;
        if (pos == 0) return;
        ++s[pos - 1];
        for (std::size_t j = pos; j < k; ++j) s[j] = s[j - 1] + 1;
    }
}

double determinant(const RealMatrix& m) {
    const auto f = lu_factor(m);
    if (f.singular) return 0.0;
    double det = f.sign;
    for (std::size_t i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
    return det;
}

std::vector<double> solve(const RealMatrix& m, std::span<const double> b) {
    const auto f = lu_factor(m);
    if (f.singular) throw Error(ErrorKind::IllConditioned, "singular system");
    const std::size_t n = m.rows();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

double subset_determinant(const RealMatrix& a, std::span<const std::size_t> subset) {
    if (subset.empty()) return 1.0;
    const RealMatrix as = a.select_rows(subset);
    RealMatrix g(subset.size(), subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = 0; j < subset.size(); ++j) g(i, j) = dot(as.row(i), as.row(j));
    return std::max(0.0, determinant(g));
}

double volume_threshold(const RealMatrix& a, std::size_t k) {
    return 1e-12 * std::pow(a.frobenius_norm_sq(), static_cast<double>(k));
}

double SubsetDistribution::probability(const Subset& sorted_subset) const {
    const auto it = std::ranges::lower_bound(subsets, sorted_subset);
    if (it == subsets.end() || *it != sorted_subset) return 0.0;
    return probabilities[static_cast<std::size_t>(it - subsets.begin())];
}

SubsetDistribution brute_force_distribution(const RealMatrix& a, std::size_t k) {
    if (k == 0) throw Error(ErrorKind::DomainError, "k must be at least 1");
    require_enumerable(a.rows(), k);
    const double floor = volume_threshold(a, k);
    SubsetDistribution dist;
    dist.k = k;
    for_each_subset(a.rows(), k, [&](const Subset& s) {
        double det = subset_determinant(a, s);
        if (det <= floor) det = 0.0;
        dist.subsets.push_back(s);
        dist.probabilities.push_back(det);
        dist.normalizer += det;
    });
    if (!(dist.normalizer > 0.0)) throw Error(ErrorKind::RankError, "every k-subset has volume zero");
    for (double& p : dist.probabilities) p /= dist.normalizer;
    return dist;
}

std::vector<double> exact_marginals(const RealMatrix& a, std::size_t k, const Subset& prefix) {
    check_prefix(a, k, prefix);
    if (prefix.size() >= k) throw Error(ErrorKind::DomainError, "prefix must be shorter than k");
    const double floor = volume_threshold(a, k);
    const std::size_t remaining = k - prefix.size();  // k - t + 1

    // Every completing k-subset U contributes (k-t+1)! ordered tails, (k-t)! of
    // which start with a given i in U \ prefix.
    std::vector<double> numer(a.rows(), 0.0);
    double denom = 0.0;
    for_each_completion(a.rows(), k, prefix, [&](const Subset& u) {
        double det = subset_determinant(a, u);
        if (det <= floor) return;
        denom += det;
        for (std::size_t i : u)
            if (!contains(prefix, i)) numer[i] += det;
    });
    if (!(denom > 0.0)) throw Error(ErrorKind::InfeasiblePrefix, "prefix has probability zero");
    for (double& x : numer) x /= static_cast<double>(remaining) * denom;
    return numer;
}

double exact_marginal(const RealMatrix& a, std::size_t k, const Subset& prefix, std::size_t i) {
    return exact_marginals(a, k, prefix).at(i);
}

double conditional_expected_residual(const RealMatrix& a, std::size_t k, const Subset& prefix) {
    check_prefix(a, k, prefix);
    const double floor = volume_threshold(a, k);
    double weighted = 0.0;
    double denom = 0.0;
    for_each_completion(a.rows(), k, prefix, [&](const Subset& u) {
        const double det = subset_determinant(a, u);
        if (det <= floor) return;
        denom += det;
        weighted += det * residual_by_normal_equations(a, u);
    });
    if (!(denom > 0.0)) throw Error(ErrorKind::InfeasiblePrefix, "prefix has probability zero");
    return weighted / denom;
}

double expected_residual(const RealMatrix& a, std::size_t k) {
    require_enumerable(a.rows(), k);
    return conditional_expected_residual(a, k, {});
}

Subset greedy_conditional_selection(const RealMatrix& a, std::size_t k) {
    Subset prefix;
    for (std::size_t t = 1; t <= k; ++t) {
        std::size_t best = a.rows();
        double best_value = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (contains(prefix, i)) continue;
            Subset candidate = prefix;
            candidate.push_back(i);
            double value;
            try {
                value = conditional_expected_residual(a, k, candidate);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::InfeasiblePrefix) continue;
                throw;
            }
            if (best == a.rows() || value < best_value) {
                best = i;
                best_value = value;
            }
        }
        if (best == a.rows()) throw Error(ErrorKind::Degenerate, "no feasible continuation");
        prefix.push_back(best);
    }
    return prefix;
}

namespace {

double hadamard_bound(const RealMatrix& a, const Subset& rows) {
    double h = 1.0;
    for (std::size_t i : rows) h *= squared_norm(a.row(i));
    return h;
}

LemmaCheck compare(double lhs, double rhs, double floor) {
    LemmaCheck c;
    c.lhs = lhs;
    c.rhs = rhs;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), floor});
    c.residual = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
    c.pass = c.residual <= 1e-8;
    return c;
}

} // namespace

LemmaCheck verify_det_division(const RealMatrix& a, const Subset& s, const Subset& t) {
    for (std::size_t i : s)
        if (contains(t, i)) throw Error(ErrorKind::DomainError, "S and T must be disjoint");
    Subset both = s;
    both.insert(both.end(), t.begin(), t.end());
    const double lhs = subset_determinant(a, both);
    const RealMatrix b = s.empty() ? a : a - project_onto_subset(a, s);
    const double rhs = subset_determinant(a, s) * subset_determinant(b, t);
    return compare(lhs, rhs, 1e-6 * hadamard_bound(a, both));
}

LemmaCheck verify_matrix_det_lemma(const RealMatrix& m, std::span<const double> u,
                                   std::span<const double> v) {
    if (m.rows() != m.cols() || u.size() != m.rows() || v.size() != m.rows()) {
        throw Error(ErrorKind::DomainError, "shape mismatch");
    }
    const auto svd = thin_svd(m, 0.0);
    if (svd.rank() < m.rows() ||
        svd.singular_values.front() > 1e12 * svd.singular_values.back()) {
        throw Error(ErrorKind::IllConditioned, "condition number exceeds 1e12");
    }
    RealMatrix updated = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) updated(i, j) += u[i] * v[j];
    const double lhs = determinant(updated);
    const double det_m = determinant(m);
    const auto minv_u = solve(m, u);
    const double factor = 1.0 + dot(v, minv_u);
    const double rhs = factor * det_m;
    const double floor = 1e-12 * std::abs(det_m) * std::max(1.0, std::abs(factor - 1.0));
    return compare(lhs, rhs, floor);
}

RealMatrix lower_bound_matrix(std::size_t n, double eps) {
    if (n < 2 || !(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorKind::DomainError, "need n >= 2 and 0 < eps < 1");
    }
    RealMatrix a(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        a(i, i + 1) = eps;
    }
    return a;
}

RealMatrix lower_bound_block_matrix(std::size_t n, double eps, std::size_t copies) {
    if (copies == 0) throw Error(ErrorKind::DomainError, "need at least one block");
    const RealMatrix block = lower_bound_matrix(n, eps);
    RealMatrix a(n * copies, (n + 1) * copies);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= n; ++j) a(c * n + i, c * (n + 1) + j) = block(i, j);
    return a;
}

CharPolyCoeffs faddeev_leverrier(const RealMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::DomainError, "matrix must be square");
    const std::size_t n = m.rows();
    if (n > 12) throw Error(ErrorKind::DomainError, "Faddeev-LeVerrier oracle limited to n <= 12");
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    RealMatrix mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        RealMatrix next = m * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        const RealMatrix prod = m * next;
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += prod(i, i);
        c[n - k] = -trace / static_cast<double>(k);
        mk = std::move(next);
    }
    return CharPolyCoeffs(std::move(c));
}

double total_variation(const SubsetDistribution& exact, const std::map<Subset, std::size_t>& counts,
                       std::size_t trials) {
    if (trials == 0) throw Error(ErrorKind::DomainError, "no trials");
    double l1 = 0.0;
    for (std::size_t s = 0; s < exact.subsets.size(); ++s) {
        const auto it = counts.find(exact.subsets[s]);
        const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
        l1 += std::abs(freq - exact.probabilities[s]);
    }
    for (const auto& [subset, count] : counts) {
        if (exact.probability(subset) == 0.0 &&
            !std::ranges::binary_search(exact.subsets, subset)) {
            l1 += static_cast<double>(count) / static_cast<double>(trials);
        }
    }
    return 0.5 * l1;
}

} // namespace volsel::oracle
