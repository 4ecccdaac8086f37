#include "volsel/error.hpp"
#include "volsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volsel {

namespace {

constexpr int kMaxSweeps = 100;
constexpr int kMaxQlIterations = 60;

double off_diagonal_norm(const RealMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigen(const GramMatrix& g) {
    const std::size_t n = g.dim();
    RealMatrix a = g.matrix();
    RealMatrix v = RealMatrix::identity(n);
    const double tol = 1e-14 * std::sqrt(a.frobenius_norm_sq());

    int sweep = 0;
    while (off_diagonal_norm(a) > tol) {
        if (++sweep > kMaxSweeps) {
            throw Error(ErrorKind::ConvergenceFailure, "Jacobi eigensolver exceeded 100 sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - s * arq;
                    a(r, q) = a(q, r) = s * arp + c * arq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SymmetricEigen out{std::vector<double>(n), RealMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, order[j]);
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(const GramMatrix& g) {
    const std::size_t n = g.dim();
    RealMatrix a = g.matrix();
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);  // e[i] couples i and i+1

    // Householder reduction to tridiagonal form, trailing block updated in place.
    std::vector<double> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        double xnorm_sq = 0.0;
        for (std::size_t r = 0; r < len; ++r) xnorm_sq += a(k + 1 + r, k) * a(k + 1 + r, k);
        d[k] = a(k, k);
        if (xnorm_sq == 0.0) {
            e[k] = 0.0;
            continue;
        }
        const double x0 = a(k + 1, k);
        const double alpha = -std::copysign(std::sqrt(xnorm_sq), x0);
        for (std::size_t r = 0; r < len; ++r) v[r] = a(k + 1 + r, k);
        v[0] -= alpha;
        const double vnorm = std::sqrt(squared_norm(std::span<const double>(v.data(), len)));
        for (std::size_t r = 0; r < len; ++r) v[r] /= vnorm;
        e[k] = alpha;

        // p = S v, K = v^T p, w = 2p - 2K v, S <- S - v w^T - w v^T
        double kdot = 0.0;
        for (std::size_t r = 0; r < len; ++r) {
            double s = 0.0;
            const auto row = a.row(k + 1 + r);
            for (std::size_t c = 0; c < len; ++c) s += row[k + 1 + c] * v[c];
            w[r] = s;
            kdot += v[r] * s;
        }
        for (std::size_t r = 0; r < len; ++r) w[r] = 2.0 * w[r] - 2.0 * kdot * v[r];
        for (std::size_t r = 0; r < len; ++r) {
            auto row = a.row(k + 1 + r);
            for (std::size_t c = 0; c < len; ++c) row[k + 1 + c] -= v[r] * w[c] + w[r] * v[c];
        }
    }
    if (n >= 2) {
        d[n - 2] = a(n - 2, n - 2);
        e[n - 2] = a(n - 1, n - 2);
    }
    d[n - 1] = a(n - 1, n - 1);
    e[n - 1] = 0.0;

    double tnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) tnorm = std::max(tnorm, std::abs(d[i]) + std::abs(e[i]));
    const double global_tol = std::numeric_limits<double>::epsilon() * tnorm;

    // Implicit QL with Wilkinson-type shifts.
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd ||
                    std::abs(e[m]) <= global_tol) {
                    break;
                }
            }
            if (m != l) {
                if (iter++ == kMaxQlIterations) {
                    throw Error(ErrorKind::ConvergenceFailure, "tridiagonal QL did not converge");
                }
                double gq = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(gq, 1.0);
                gq = d[m] - d[l] + e[l] / (gq + std::copysign(r, gq));
                double s = 1.0, c = 1.0, p = 0.0;
                bool deflated = false;
                for (std::size_t i = m; i-- > l;) {
                    const double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, gq);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = gq / r;
                    gq = d[i + 1] - p;
                    r = (d[i] - gq) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = gq + p;
                    gq = c * r - b;
                }
                if (deflated) continue;
                d[l] -= p;
                e[l] = gq;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::ranges::sort(d, std::greater<>());
    return d;
}

} // namespace volsel
