#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "noma/analytic.hpp"
#include "noma/channel.hpp"
#include "noma/rng.hpp"

namespace noma {

/// One Monte Carlo draw of the dual-hop link.
struct TrialOutcome {
    double phi_sr = 0.0;            ///< relay's selected-antenna gain
    std::vector<double> phi;        ///< users' selected gains, ascending
    double w_tilde = 1.0;           ///< ||(1/L) sum_i w_i||^2
    std::vector<bool> outage_exact; ///< by ordered user
    std::vector<bool> outage_upper; ///< by ordered user
    std::vector<bool> outage_oma;   ///< by user identity (OMA does not rank users)
};

/// SINR of the user with gain phi_l when decoding user j's message.
/// With w_tilde == 1 this is the upper-bound SINR.
double exact_sinr(const SystemScenario& scenario, const DecodeTargets& targets, int j, double phi_sr,
                  double phi_l, double w_tilde);
double upper_sinr(const SystemScenario& scenario, const DecodeTargets& targets, int j, double phi_sr,
                  double phi_l);
/// Interference-free SNR of one OMA slot (full power, upper-bound form).
double oma_snr(const DecodeTargets& targets, double phi_sr, double phi_l);

/// Reusable per-lane trial engine; run() allocates nothing after the first call.
class TrialRunner {
  public:
    TrialRunner(const SystemScenario& scenario, double snr);

    const TrialOutcome& run(Rng& rng);

  private:
    const SystemScenario& scenario_;
    DecodeTargets targets_;
    double oma_threshold_;
    ComplexChannelMatrix relay_;
    std::vector<ComplexChannelMatrix> users_;
    std::vector<double> gains_;
    std::vector<int> columns_;
    std::vector<int> order_;
    std::vector<std::complex<double>> beam_;
    TrialOutcome out_;
};

TrialOutcome run_trial(Rng& rng, const SystemScenario& scenario, double snr);

struct OutageEstimate {
    double p_hat = 0.0;
    std::uint64_t outages = 0;
    std::uint64_t trials = 0;
    double ci_halfwidth = 0.0;  ///< 3 * sqrt(p (1 - p) / n)
    std::uint64_t seed = 0;
    int batches = 1;
};

struct UserEstimates {
    OutageEstimate exact;
    OutageEstimate upper;
    OutageEstimate oma;
};

/// Monte Carlo outage estimates for every user.
///
/// Trials are split into `lanes` batches; batch b draws from
/// Rng::for_stream(seed, b). Counts depend only on (seed, trials, lanes).
std::vector<UserEstimates> estimate_op(const SystemScenario& scenario, double snr, std::uint64_t trials,
                                       std::uint64_t seed, int lanes = 1);

/// Three-sigma half-width of a binomial proportion.
double ci_halfwidth(double p, std::uint64_t n);

/// True when `outages` out of `trials` is consistent with probability p at
/// the three-sigma level (0.135% per tail), using exact binomial tails so
/// that small counts are judged correctly.
bool consistent_at_three_sigma(std::uint64_t outages, std::uint64_t trials, double p);

} // namespace noma
