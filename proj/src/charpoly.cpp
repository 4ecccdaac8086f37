#include "volsel/charpoly.hpp"

#include "volsel/error.hpp"
#include "volsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace volsel {

CharPolyCoeffs::CharPolyCoeffs(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty() || coeffs_.back() != 1.0) {
        throw Error(ErrorKind::DomainError, "characteristic polynomial must be monic");
    }
}

double CharPolyCoeffs::abs_coeff(std::size_t j) const { return std::abs(coeffs_.at(j)); }

std::vector<double> elementary_symmetric(std::span<const double> lambdas) {
    std::vector<double> e(lambdas.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        for (std::size_t k = l + 1; k >= 1; --k) e[k] += lambdas[l] * e[k - 1];
    }
    return e;
}

CharPolyCoeffs charpoly_from_eigenvalues(std::span<const double> lambdas, double scale) {
    double mass = 0.0;
    for (double v : lambdas) mass += std::abs(v);
    mass = std::max(mass, scale);
    std::vector<double> clipped(lambdas.begin(), lambdas.end());
    for (double& v : clipped) {
        if (v < -1e-9 * mass) {
            throw Error(ErrorKind::DomainError, "eigenvalue " + std::to_string(v) +
                                                    " is negative beyond tolerance");
        }
        if (v < 0.0) v = 0.0;
    }
    const auto e = elementary_symmetric(clipped);
    const std::size_t n = clipped.size();
    std::vector<double> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[n - k] = (k % 2 == 0) ? e[k] : -e[k];
    return CharPolyCoeffs(std::move(c));
}

CharPolyCoeffs charpoly_direct(const GramMatrix& m, double scale) {
    const auto lambdas = symmetric_eigenvalues(m);
    return charpoly_from_eigenvalues(lambdas, scale);
}

double subset_det_sum(const RealMatrix& a, std::size_t k) {
    if (k == 0 || k > a.cols()) {
        throw Error(ErrorKind::DomainError, "k = " + std::to_string(k) + " must lie in [1, " +
                                                std::to_string(a.cols()) + "]");
    }
    const auto cp = charpoly_direct(gram(a));
    return cp.abs_coeff(a.cols() - k);
}

} // namespace volsel
