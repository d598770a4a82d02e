#pragma once

#include <complex>
#include <vector>

#include "noma/rng.hpp"

namespace noma {

/// Statistics of one hop of the dual-hop link.
///
/// omega is the mean squared gain per antenna element of the true channel,
/// omega_hat that of the estimated channel and sigma_e2 the per-element
/// estimation error variance, so omega_hat + sigma_e2 == omega.
struct HopStats {
    int m = 1;    ///< Nakagami parameter
    int n_t = 1;  ///< transmit antennas
    int n_r = 1;  ///< receive antennas
    double omega = 1.0;
    double omega_hat = 1.0;
    double sigma_e2 = 0.0;
    double epsilon = 0.0;

    /// Gamma shape of the per-antenna MRT gain, m * n_t.
    int shape() const noexcept { return m * n_t; }
    /// Gamma rate m / omega_hat.
    double rate() const noexcept { return m / omega_hat; }
};

HopStats make_hop_stats(double d, double alpha, double epsilon, int m, int n_t, int n_r);

/// Estimated channel coefficients, n_t rows by n_r columns, column-major.
struct ComplexChannelMatrix {
    int n_t = 0;
    int n_r = 0;
    std::vector<std::complex<double>> entries;
    std::vector<double> column_norm2;

    const std::complex<double>& at(int tx, int rx) const { return entries[rx * n_t + tx]; }
};

// Order statistics of the selected-antenna gains.

/// CDF of the relay's selected-antenna gain (max over n_r columns).
double cdf_first_hop(const HopStats& stats, double x);
/// PDF/CDF of one user's selected-antenna gain before user ordering.
double pdf_unordered(const HopStats& stats, double x);
double cdf_unordered(const HopStats& stats, double x);
/// PDF/CDF of the l-th smallest of L i.i.d. user gains, 1 <= l <= L.
double pdf_ordered(const HopStats& stats, int l, int L, double x);
double cdf_ordered(const HopStats& stats, int l, int L, double x);

/// Q_l = L! / ((L-l)! (l-1)!).
double order_coefficient(int l, int L);

ComplexChannelMatrix sample_channel_matrix(Rng& rng, const HopStats& stats);
/// In-place variant; reuses the storage of `out`.
void sample_channel_matrix(Rng& rng, const HopStats& stats, ComplexChannelMatrix& out);

struct AntennaSelection {
    int index = 1;  ///< 1-based receive antenna index
    double gain = 0.0;
    std::vector<std::complex<double>> vector;
};

/// Receive antenna with the largest column norm; ties go to the lowest index.
AntennaSelection select_receive_antenna(const ComplexChannelMatrix& matrix);

} // namespace noma
