#include "noma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "noma/specfun.hpp"

namespace noma {

HopStats make_hop_stats(double d, double alpha, double epsilon, int m, int n_t, int n_r)
{
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw std::invalid_argument("make_hop_stats: distance must be positive");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("make_hop_stats: path-loss exponent must be positive");
    }
    if (!(epsilon >= 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("make_hop_stats: relative estimation error must be in [0, 1), got " +
                                    std::to_string(epsilon));
    }
    if (m < 1 || n_t < 1 || n_r < 1) {
        throw std::invalid_argument("make_hop_stats: m, n_t and n_r must be positive integers");
    }
    HopStats s;
    s.m = m;
    s.n_t = n_t;
    s.n_r = n_r;
    s.epsilon = epsilon;
    s.omega = std::pow(d, -alpha);
    s.omega_hat = (1.0 - epsilon) * s.omega;
    s.sigma_e2 = epsilon * s.omega;
    return s;
}

double cdf_first_hop(const HopStats& stats, double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    const double f = specfun::regularized_lower_gamma(stats.shape(), stats.rate() * x);
    return std::pow(f, stats.n_r);
}

double cdf_unordered(const HopStats& stats, double x)
{
    return cdf_first_hop(stats, x);
}

double pdf_unordered(const HopStats& stats, double x)
{
    if (x < 0.0) {
        return 0.0;
    }
    const int q = stats.shape();
    const double c = stats.rate();
    if (x == 0.0) {
        return (q == 1 && stats.n_r == 1) ? c : 0.0;
    }
    const double log_gamma_pdf = q * std::log(c) + (q - 1) * std::log(x) - c * x - specfun::ln_factorial(q - 1);
    double pdf = stats.n_r * std::exp(log_gamma_pdf);
    if (stats.n_r > 1) {
        pdf *= std::pow(specfun::regularized_lower_gamma(q, c * x), stats.n_r - 1);
    }
    return pdf;
}

double order_coefficient(int l, int L)
{
    if (L < 1 || l < 1 || l > L) {
        throw std::invalid_argument("order statistic index l=" + std::to_string(l) + " outside 1.." +
                                    std::to_string(L));
    }
    return static_cast<double>(l) * static_cast<double>(specfun::binomial(L, l));
}

double cdf_ordered(const HopStats& stats, int l, int L, double x)
{
    const double q_l = order_coefficient(l, L);
    const double f = cdf_unordered(stats, x);
    double sum = 0.0;
    for (int t = 0; t <= L - l; ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        sum += sign / (l + t) * static_cast<double>(specfun::binomial(L - l, t)) * std::pow(f, l + t);
    }
    return std::clamp(q_l * sum, 0.0, 1.0);
}

double pdf_ordered(const HopStats& stats, int l, int L, double x)
{
    const double q_l = order_coefficient(l, L);
    const double f = cdf_unordered(stats, x);
    const double g = pdf_unordered(stats, x);
    double sum = 0.0;
    for (int t = 0; t <= L - l; ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        sum += sign * static_cast<double>(specfun::binomial(L - l, t)) * std::pow(f, l + t - 1);
    }
    return std::max(0.0, q_l * g * sum);
}

void sample_channel_matrix(Rng& rng, const HopStats& stats, ComplexChannelMatrix& out)
{
    out.n_t = stats.n_t;
    out.n_r = stats.n_r;
    out.entries.resize(static_cast<std::size_t>(stats.n_t) * stats.n_r);
    out.column_norm2.assign(static_cast<std::size_t>(stats.n_r), 0.0);
    const double scale = stats.omega_hat / stats.m;
    for (int rx = 0; rx < stats.n_r; ++rx) {
        double norm2 = 0.0;
        for (int tx = 0; tx < stats.n_t; ++tx) {
            const double power = scale * rng.gamma_integer(stats.m);
            const double phase = 2.0 * std::numbers::pi * rng.uniform();
            const auto h = std::polar(std::sqrt(power), phase);
            out.entries[rx * stats.n_t + tx] = h;
            norm2 += std::norm(h);
        }
        out.column_norm2[rx] = norm2;
    }
}

ComplexChannelMatrix sample_channel_matrix(Rng& rng, const HopStats& stats)
{
    ComplexChannelMatrix m;
    sample_channel_matrix(rng, stats, m);
    return m;
}

AntennaSelection select_receive_antenna(const ComplexChannelMatrix& matrix)
{
    if (matrix.n_r < 1 || matrix.n_t < 1) {
        throw std::invalid_argument("select_receive_antenna: empty matrix");
    }
    int best = 0;
    for (int rx = 1; rx < matrix.n_r; ++rx) {
        if (matrix.column_norm2[rx] > matrix.column_norm2[best]) {
            best = rx;
        }
    }
    AntennaSelection sel;
    sel.index = best + 1;
    sel.gain = matrix.column_norm2[best];
    sel.vector.assign(matrix.entries.begin() + best * matrix.n_t,
                      matrix.entries.begin() + (best + 1) * matrix.n_t);
    return sel;
}

} // namespace noma
