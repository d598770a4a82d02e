#include "noma/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

namespace noma {

double exact_sinr(const SystemScenario& s, const DecodeTargets& t, int j, double phi_sr, double phi_l,
                  double w_tilde)
{
    const double g = t.snr;
    const double se_l = s.hop2.sigma_e2;
    const double se_sr = s.hop1.sigma_e2;
    const double a1 = g * se_l * w_tilde + 1.0;
    const double a2 = g * se_sr + 1.0;
    const double a3 = g * g * se_l * se_sr * w_tilde + g * se_l * w_tilde + g * se_sr + 1.0;
    const double signal = g * g * phi_sr * phi_l * w_tilde;
    const auto idx = static_cast<std::size_t>(j - 1);
    return s.alloc[idx] * signal / (signal * t.sigma[idx] + g * phi_sr * a1 + g * phi_l * a2 + a3);
}

double upper_sinr(const SystemScenario& s, const DecodeTargets& t, int j, double phi_sr, double phi_l)
{
    return exact_sinr(s, t, j, phi_sr, phi_l, 1.0);
}

double oma_snr(const DecodeTargets& t, double phi_sr, double phi_l)
{
    const double g = t.snr;
    return g * g * phi_sr * phi_l / (g * phi_sr * t.alpha1 + g * phi_l * t.alpha2 + t.alpha3);
}

TrialRunner::TrialRunner(const SystemScenario& scenario, double snr)
    : scenario_(scenario),
      targets_(decode_targets(scenario, snr)),
      oma_threshold_(oma_threshold(scenario.thresholds))
{
    const auto L = static_cast<std::size_t>(scenario.users);
    users_.resize(L);
    gains_.resize(L);
    columns_.resize(L);
    order_.resize(L);
    beam_.resize(static_cast<std::size_t>(scenario.hop2.n_t));
    out_.phi.resize(L);
    out_.outage_exact.resize(L);
    out_.outage_upper.resize(L);
    out_.outage_oma.resize(L);
}

const TrialOutcome& TrialRunner::run(Rng& rng)
{
    const int L = scenario_.users;
    const int nt2 = scenario_.hop2.n_t;

    sample_channel_matrix(rng, scenario_.hop1, relay_);
    out_.phi_sr = *std::max_element(relay_.column_norm2.begin(), relay_.column_norm2.end());

    std::fill(beam_.begin(), beam_.end(), std::complex<double>(0.0, 0.0));
    for (int u = 0; u < L; ++u) {
        auto& m = users_[u];
        sample_channel_matrix(rng, scenario_.hop2, m);
        int best = 0;
        for (int rx = 1; rx < m.n_r; ++rx) {
            if (m.column_norm2[rx] > m.column_norm2[best]) {
                best = rx;
            }
        }
        columns_[u] = best;
        gains_[u] = m.column_norm2[best];
        // unit MRT weight; its conjugation does not change the norm of the sum
        const double inv = 1.0 / std::sqrt(gains_[u]);
        for (int i = 0; i < nt2; ++i) {
            beam_[i] += m.at(i, best) * inv;
        }
    }
    double w = 0.0;
    for (const auto& c : beam_) {
        w += std::norm(c);
    }
    out_.w_tilde = std::min(1.0, w / (static_cast<double>(L) * L));

    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
        return gains_[a] < gains_[b] || (gains_[a] == gains_[b] && a < b);
    });

    for (int l = 1; l <= L; ++l) {
        const double phi_l = gains_[order_[l - 1]];
        out_.phi[l - 1] = phi_l;
        bool fail_exact = false;
        bool fail_upper = false;
        for (int j = 1; j <= l; ++j) {
            const double th = scenario_.thresholds[j - 1];
            fail_exact = fail_exact || exact_sinr(scenario_, targets_, j, out_.phi_sr, phi_l, out_.w_tilde) < th;
            fail_upper = fail_upper || upper_sinr(scenario_, targets_, j, out_.phi_sr, phi_l) < th;
        }
        out_.outage_exact[l - 1] = fail_exact;
        out_.outage_upper[l - 1] = fail_upper;
        out_.outage_oma[l - 1] = oma_snr(targets_, out_.phi_sr, gains_[l - 1]) < oma_threshold_;
    }
    return out_;
}

TrialOutcome run_trial(Rng& rng, const SystemScenario& scenario, double snr)
{
    TrialRunner runner(scenario, snr);
    return runner.run(rng);
}

double ci_halfwidth(double p, std::uint64_t n)
{
    if (n == 0) {
        return 0.0;
    }
    return 3.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

bool consistent_at_three_sigma(std::uint64_t outages, std::uint64_t trials, double p)
{
    if (trials == 0 || outages > trials || !(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("consistent_at_three_sigma: need outages <= trials, trials >= 1, p in [0, 1]");
    }
    if (p == 0.0) {
        return outages == 0;
    }
    if (p == 1.0) {
        return outages == trials;
    }
    constexpr double tail = 0.00134989803163;  // upper tail of N(0,1) beyond 3
    const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), p);
    const double k = static_cast<double>(outages);
    const double below = boost::math::cdf(dist, k);
    const double above = outages == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, k - 1.0));
    return below >= tail && above >= tail;
}

std::vector<UserEstimates> estimate_op(const SystemScenario& scenario, double snr, std::uint64_t trials,
                                       std::uint64_t seed, int lanes)
{
    if (trials < 1) {
        throw std::invalid_argument("estimate_op: trials must be >= 1");
    }
    if (lanes < 1) {
        throw std::invalid_argument("estimate_op: lanes must be >= 1");
    }
    validate_scenario(scenario);
    const auto L = static_cast<std::size_t>(scenario.users);
    if (trials > std::numeric_limits<std::uint64_t>::max() / L) {
        throw std::range_error("estimate_op: trials * users overflows the outage counters");
    }

    struct Counts {
        std::vector<std::uint64_t> exact, upper, oma;
    };
    std::vector<Counts> per_batch(static_cast<std::size_t>(lanes));
    const std::uint64_t base = trials / static_cast<std::uint64_t>(lanes);
    const std::uint64_t extra = trials % static_cast<std::uint64_t>(lanes);

    auto run_batch = [&](int b) {
        Counts c{std::vector<std::uint64_t>(L), std::vector<std::uint64_t>(L), std::vector<std::uint64_t>(L)};
        const std::uint64_t n = base + (static_cast<std::uint64_t>(b) < extra ? 1 : 0);
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(b));
        TrialRunner runner(scenario, snr);
        for (std::uint64_t i = 0; i < n; ++i) {
            const TrialOutcome& o = runner.run(rng);
            for (std::size_t l = 0; l < L; ++l) {
                c.exact[l] += o.outage_exact[l];
                c.upper[l] += o.outage_upper[l];
                c.oma[l] += o.outage_oma[l];
            }
        }
        per_batch[static_cast<std::size_t>(b)] = std::move(c);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(lanes)));
    if (workers <= 1) {
        for (int b = 0; b < lanes; ++b) {
            run_batch(b);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int b = next++; b < lanes; b = next++) {
                    run_batch(b);
                }
            });
        }
    }

    auto finish = [&](std::uint64_t count) {
        OutageEstimate e;
        e.outages = count;
        e.trials = trials;
        e.p_hat = static_cast<double>(count) / static_cast<double>(trials);
        e.ci_halfwidth = ci_halfwidth(e.p_hat, trials);
        e.seed = seed;
        e.batches = lanes;
        return e;
    };
    std::vector<UserEstimates> out(L);
    for (std::size_t l = 0; l < L; ++l) {
        std::uint64_t ce = 0, cu = 0, co = 0;
        for (const auto& c : per_batch) {
            ce += c.exact[l];
            cu += c.upper[l];
            co += c.oma[l];
        }
        out[l] = {finish(ce), finish(cu), finish(co)};
    }
    return out;
}

} // namespace noma
