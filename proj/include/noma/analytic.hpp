#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noma/channel.hpp"

namespace noma {

/// One NOMA downlink experiment: L users behind a dual-hop AF relay.
///
/// alloc holds a_1 >= ... >= a_L summing to one; thresholds holds the
/// per-user SINR targets. Users are indexed 1..L from the weakest channel.
struct SystemScenario {
    int users = 3;
    HopStats hop1;
    HopStats hop2;
    std::vector<double> alloc;
    std::vector<double> thresholds;
};

/// Throws std::invalid_argument describing the first broken invariant.
void validate_scenario(const SystemScenario& scenario);

/// Per-SNR decoding machinery for every user.
struct DecodeTargets {
    double snr = 1.0;
    std::vector<double> sigma;      ///< Sigma_j = sum_{i>j} a_i
    std::vector<double> zeta;       ///< SNR-free threshold, +inf when infeasible
    std::vector<double> mu;         ///< zeta / snr, +inf when infeasible
    std::vector<bool> feasible;
    double alpha1 = 1.0;            ///< snr * sigma_e,l^2 + 1
    double alpha2 = 1.0;            ///< snr * sigma_e,sr^2 + 1
    double alpha3 = 1.0;

    bool is_feasible(int user) const { return feasible.at(static_cast<std::size_t>(user - 1)); }
    double mu_of(int user) const { return mu.at(static_cast<std::size_t>(user - 1)); }
    double zeta_of(int user) const { return zeta.at(static_cast<std::size_t>(user - 1)); }
};

DecodeTargets decode_targets(const SystemScenario& scenario, double snr);

/// Outage probability of user l from the single-integral representation,
/// evaluated by adaptive Gauss-Kronrod quadrature.
double op_quadrature(const SystemScenario& scenario, double snr, int user);

struct ClosedFormOptions {
    /// Relative perturbation applied to the series prefactor. Only used to
    /// check that validation notices a corrupted closed form.
    double prefactor_perturbation = 0.0;
    /// Cross-check against quadrature and fall back when they disagree.
    bool cross_check = true;
    /// Precomputed quadrature value to cross-check against.
    std::optional<double> reference;
};

struct ClosedFormResult {
    double value = 1.0;       ///< reported probability
    double series = 1.0;      ///< raw series value, clamped to [0, 1]
    double quadrature = -1.0; ///< cross-check value, -1 when not computed
    bool fallback = false;
    std::string warning;
};

/// Closed-form outage probability: the finite multinomial/Bessel series,
/// summed in 113-bit floating point with compensated summation.
ClosedFormResult op_closed_form(const SystemScenario& scenario, double snr, int user,
                                const ClosedFormOptions& opts = {});

/// Just the series value (unclamped), without the quadrature cross-check.
double op_closed_form_series(const SystemScenario& scenario, double snr, int user,
                             double prefactor_perturbation = 0.0);

struct ProbabilityBounds {
    double lower = 0.0;
    double upper = 0.0;
};

ProbabilityBounds op_bounds(const SystemScenario& scenario, double snr, int user);

/// SNR-independent limits of the bounds under channel estimation error.
ProbabilityBounds error_floor(const SystemScenario& scenario, int user);

struct DiversityGain {
    int diversity = 1;
    double array_gain = 0.0;  ///< chi^{1/tau}
    double chi = 0.0;         ///< asymptotic coefficient, OP ~ chi * mu^tau
};

/// High-SNR behaviour with perfect CSI; throws std::logic_error if either
/// hop has a nonzero estimation error.
DiversityGain diversity_array_gain(const SystemScenario& scenario, int user);
double op_asymptotic(const SystemScenario& scenario, double snr, int user);

/// Rate-matched OMA threshold: prod(1 + t_i) - 1.
double oma_threshold(const std::vector<double>& thresholds);

/// The single-user interference-free scenario each OMA slot sees.
SystemScenario oma_scenario(const SystemScenario& scenario);

/// OMA outage per user (users are not ranked in OMA, so every user shares it).
double op_oma(const SystemScenario& scenario, double snr);

struct OutageReport {
    int user = 1;
    double op_closed = 1.0;
    double op_quadrature = 1.0;
    double op_lower_bound = 1.0;
    double op_upper_bound = 1.0;
    std::optional<double> op_asymptotic;
    double ef_lower = 0.0;
    double ef_upper = 0.0;
    std::vector<std::string> warnings;
};

OutageReport analyze(const SystemScenario& scenario, double snr, int user);

} // namespace noma
