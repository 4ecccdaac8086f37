#include "volsel/error.hpp"
#include "volsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volsel {

namespace {

constexpr int kMaxSweeps = 100;

} // namespace

SVDFactors thin_svd(const RealMatrix& a, double delta_zero) {
    // Rows of `w` are the columns of the tall orientation.
    const bool transposed = a.rows() < a.cols();
    RealMatrix w = transposed ? a : a.transpose();
    const std::size_t n = w.rows();  // columns of the tall matrix
    const std::size_t m = w.cols();  // rows of the tall matrix
    RealMatrix vt = RealMatrix::identity(n);

    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = std::max(1e-15, static_cast<double>(m) * eps);
    const double negligible = eps * eps * a.frobenius_norm_sq();
    int sweep = 0;
    bool rotated = true;
    while (rotated) {
        if (++sweep > kMaxSweeps) {
            throw Error(ErrorKind::ConvergenceFailure, "one-sided Jacobi exceeded 100 sweeps");
        }
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto wp = w.row(p);
                auto wq = w.row(q);
                const double alpha = squared_norm(wp);
                const double beta = squared_norm(wq);
                const double gamma = dot(wp, wq);
                if (alpha <= negligible || beta <= negligible) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t j = 0; j < m; ++j) {
                    const double x = wp[j];
                    const double y = wq[j];
                    wp[j] = c * x - s * y;
                    wq[j] = s * x + c * y;
                }
                auto vp = vt.row(p);
                auto vq = vt.row(q);
                for (std::size_t j = 0; j < n; ++j) {
                    const double x = vp[j];
                    const double y = vq[j];
                    vp[j] = c * x - s * y;
                    vq[j] = s * x + c * y;
                }
            }
        }
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(squared_norm(w.row(j)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    const double drop = std::sqrt(delta_zero);
    SVDFactors out;
    out.rows = a.rows();
    out.cols = a.cols();
    for (std::size_t idx : order) {
        const double s = sigma[idx];
        if (s <= drop || s == 0.0) break;
        std::vector<double> u(w.row(idx).begin(), w.row(idx).end());
        for (auto& x : u) x /= s;
        std::vector<double> v(vt.row(idx).begin(), vt.row(idx).end());
        out.singular_values.push_back(s);
        if (transposed) {
            out.left.push_back(std::move(v));
            out.right.push_back(std::move(u));
        } else {
            out.left.push_back(std::move(u));
            out.right.push_back(std::move(v));
        }
    }
    return out;
}

SVDFactors thin_svd(const RealMatrix& a) { return thin_svd(a, zero_row_threshold(a)); }

} // namespace volsel
