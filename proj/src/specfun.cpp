#include "noma/specfun.hpp"

#include <boost/multiprecision/float128.hpp>

#include <array>
#include <cmath>
#include <string>

namespace noma::specfun {

namespace {

constexpr int kFactorialTableSize = 171;

const std::array<double, kFactorialTableSize>& ln_factorial_table()
{
    static const std::array<double, kFactorialTableSize> table = [] {
        std::array<double, kFactorialTableSize> t{};
        double f = 1.0;
        t[0] = 0.0;
        for (int n = 1; n < kFactorialTableSize; ++n) {
            f *= n;
            t[n] = std::log(f);
        }
        return t;
    }();
    return table;
}

} // namespace

double regularized_lower_gamma(int shape, double x)
{
    if (shape < 1) {
        throw std::invalid_argument("regularized_lower_gamma: shape must be a positive integer, got " +
                                    std::to_string(shape));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        if (x == std::numeric_limits<double>::infinity()) {
            return 1.0;
        }
        throw std::invalid_argument("regularized_lower_gamma: x must be finite and non-negative");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x < shape + 1.0) {
        // e^{-x} sum_{k>=shape} x^k/k!, all terms positive
        double term = std::exp(shape * std::log(x) - x - ln_factorial(shape));
        double sum = term;
        for (int k = shape + 1; k < shape + 10000; ++k) {
            term *= x / k;
            sum += term;
            if (term < 1e-17 * sum) {
                break;
            }
        }
        return std::min(sum, 1.0);
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < shape; ++k) {
        term *= x / k;
        sum += term;
    }
    const double q = std::exp(-x) * sum;
    return q >= 1.0 ? 0.0 : 1.0 - q;
}

double ln_factorial(int n)
{
    if (n < 0) {
        throw std::invalid_argument("ln_factorial: n must be non-negative");
    }
    if (n < kFactorialTableSize) {
        return ln_factorial_table()[n];
    }
    return std::lgamma(n + 1.0);
}

std::uint64_t binomial(int n, int k)
{
    if (n < 0 || k < 0 || k > n) {
        throw std::invalid_argument("binomial: require 0 <= k <= n, got n=" + std::to_string(n) +
                                    ", k=" + std::to_string(k));
    }
    if (k > n - k) {
        k = n - k;
    }
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i is exact at every step (it is C(n-k+i, i))
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw std::range_error("binomial: C(" + std::to_string(n) + "," + std::to_string(k) +
                                   ") exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

CoeffTable multinomial_coeffs(int power, int base_terms, double scale)
{
    if (power < 1 || base_terms < 1 || !(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("multinomial_coeffs: require power >= 1, base_terms >= 1, scale > 0");
    }
    CoeffTable table;
    table.power = power;
    table.base_terms = base_terms;
    table.scale = scale;
    // the recursion mixes signs; quad precision absorbs the cancellation
    const auto wide = series_power_coeffs<boost::multiprecision::float128>(power, base_terms, scale);
    table.coeffs.reserve(wide.size());
    for (std::size_t i = 0; i < wide.size(); ++i) {
        table.coeffs.push_back(static_cast<double>(wide[i]));
        if (!std::isfinite(table.coeffs[i])) {
            throw std::range_error("multinomial_coeffs: coefficient " + std::to_string(i) +
                                   " overflows double");
        }
    }
    return table;
}

double bessel_k(int order, double x)
{
    return bessel_k<double>(order, x);
}

} // namespace noma::specfun
