#include "tripower/sympow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "tripower/common.hpp"

namespace tripower::sympow {

SatakeLocal SatakeLocal::from_lambda(std::int64_t p, double lambda_p) {
    if (lambda_p < -2.0 || lambda_p > 2.0)
        throw std::invalid_argument("SatakeLocal: lambda_p outside [-2, 2]");
    return SatakeLocal{p, lambda_p, std::acos(std::clamp(lambda_p / 2.0, -1.0, 1.0))};
}

double sym_lambda_p(int m, const SatakeLocal& s) {
    if (m < 0) throw std::invalid_argument("sym_lambda_p: m must be >= 0");
    if (m == 0) return 1.0;
    double prev = 1.0, cur = s.lambda_p;
    for (int k = 1; k < m; ++k) {
        const double next = s.lambda_p * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

dirichlet::LocalFactor sym_local_factor(int m, const SatakeLocal& s, int degree) {
    if (m < 0 || degree < 0) throw std::invalid_argument("sym_local_factor: bad arguments");
    const std::size_t n = static_cast<std::size_t>(degree) + 1;

    // Multiply the geometric series of each root alpha^{m-j} beta^j; the
    // conjugate-paired roots leave only rounding debris in the imaginary part.
    std::vector<std::complex<double>> acc(n, 0.0);
    acc[0] = 1.0;
    for (int j = 0; j <= m; ++j) {
        const std::complex<double> root = std::polar(1.0, s.theta * (m - 2 * j));
        // acc *= 1/(1 - root x): ascending in-place pass gives
        // new[k] = acc[k] + root * new[k-1]
        for (std::size_t k = 1; k < n; ++k) acc[k] += root * acc[k - 1];
    }

    dirichlet::LocalFactor out{s.p, std::vector<double>(n, 0.0)};
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(acc[k].imag()) > 1e-9 * (1.0 + std::fabs(acc[k].real())))
            throw std::runtime_error("sym_local_factor: imaginary residue above tolerance");
        out.coeffs[k] = acc[k].real();
    }
    out.coeffs[0] = 1.0;
    return out;
}

std::int64_t chebyshev_A(int ell, int j) {
    if (ell < 0 || j < 0 || j > ell) throw std::invalid_argument("chebyshev_A: need 0 <= j <= ell");
    if ((ell - j) % 2 != 0) return 0;
    const int half = (ell - j) / 2;
    return binomial(ell, half) - binomial(ell, half - 1);
}

double power_decomposition(int r, const SatakeLocal& s) {
    if (r < 1) throw std::invalid_argument("power_decomposition: r must be >= 1");
    double acc = 0.0;
    for (int n = 0; n <= r / 2; ++n) {
        const double coeff = static_cast<double>(binomial(r, n) - binomial(r, n - 1));
        acc += coeff * sym_lambda_p(r - 2 * n, s);
    }
    return acc;
}

}  // namespace tripower::sympow
