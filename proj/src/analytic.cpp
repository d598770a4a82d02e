#include "noma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/float128.hpp>

#include "noma/quadrature.hpp"
#include "noma/specfun.hpp"

namespace noma {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Neumaier compensated summation.
template <class Real>
class CompensatedSum {
  public:
    explicit CompensatedSum(const Real& init = Real(0)) : sum_(init) {}
    void add(const Real& x)
    {
        using std::abs;
        const Real t = sum_ + x;
        if (abs(sum_) >= abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

  private:
    Real sum_;
    Real comp_ = Real(0);
};

void check_user(const SystemScenario& s, int user)
{
    if (user < 1 || user > s.users) {
        throw std::invalid_argument("user index " + std::to_string(user) + " outside 1.." +
                                    std::to_string(s.users));
    }
}

void check_snr(double snr)
{
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw std::invalid_argument("snr must be positive and finite (linear scale)");
    }
}

double sign_of(int n)
{
    return (n % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

void validate_scenario(const SystemScenario& s)
{
    if (s.users < 1) {
        throw std::invalid_argument("scenario: users must be >= 1");
    }
    const auto n = static_cast<std::size_t>(s.users);
    if (s.alloc.size() != n) {
        throw std::invalid_argument("scenario: alloc must have one entry per user");
    }
    if (s.thresholds.size() != n) {
        throw std::invalid_argument("scenario: thresholds must have one entry per user");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.alloc[i] > 0.0)) {
            throw std::invalid_argument("scenario: alloc[" + std::to_string(i) + "] must be positive");
        }
        if (i > 0 && s.alloc[i] > s.alloc[i - 1]) {
            throw std::invalid_argument("scenario: alloc must be non-increasing (a_1 >= a_2 >= ...)");
        }
        if (!(s.thresholds[i] > 0.0) || !std::isfinite(s.thresholds[i])) {
            throw std::invalid_argument("scenario: thresholds[" + std::to_string(i) + "] must be positive");
        }
        total += s.alloc[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "scenario: alloc must sum to 1, got " << total;
        throw std::invalid_argument(msg.str());
    }
    for (const HopStats* h : {&s.hop1, &s.hop2}) {
        if (h->m < 1 || h->n_t < 1 || h->n_r < 1 || !(h->omega_hat > 0.0) || h->sigma_e2 < 0.0) {
            throw std::invalid_argument("scenario: invalid hop statistics");
        }
    }
}

DecodeTargets decode_targets(const SystemScenario& s, double snr)
{
    check_snr(snr);
    const auto n = static_cast<std::size_t>(s.users);
    DecodeTargets t;
    t.snr = snr;
    t.sigma.assign(n, 0.0);
    for (std::size_t j = n - 1; j-- > 0;) {
        t.sigma[j] = t.sigma[j + 1] + s.alloc[j + 1];
    }
    t.zeta.assign(n, kInfinity);
    t.mu.assign(n, kInfinity);
    t.feasible.assign(n, false);
    double running = 0.0;
    bool ok = true;
    for (std::size_t l = 0; l < n; ++l) {
        const double den = s.alloc[l] - s.thresholds[l] * t.sigma[l];
        if (!(den > 0.0)) {
            ok = false;
        }
        if (!ok) {
            continue;
        }
        running = std::max(running, s.thresholds[l] / den);
        t.zeta[l] = running;
        t.mu[l] = running / snr;
        t.feasible[l] = true;
    }
    const double se_l = s.hop2.sigma_e2;
    const double se_sr = s.hop1.sigma_e2;
    t.alpha1 = snr * se_l + 1.0;
    t.alpha2 = snr * se_sr + 1.0;
    t.alpha3 = snr * snr * se_l * se_sr + snr * se_l + snr * se_sr + 1.0;
    return t;
}

double op_quadrature(const SystemScenario& s, double snr, int user)
{
    check_user(s, user);
    const DecodeTargets t = decode_targets(s, snr);
    if (!t.is_feasible(user)) {
        return 1.0;
    }
    const int L = s.users;
    const double mu = t.mu_of(user);
    const double x0 = mu * t.alpha1;
    const double mu_a2 = mu * t.alpha2;
    const double b = mu * (snr * mu * t.alpha1 * t.alpha2 + t.alpha3) / snr;

    const double head = cdf_ordered(s.hop2, user, L, x0);

    auto integrand = [&](double y) {
        if (y <= 0.0) {
            return pdf_ordered(s.hop2, user, L, x0);
        }
        return pdf_ordered(s.hop2, user, L, x0 + y) * cdf_first_hop(s.hop1, mu_a2 + b / y);
    };

    const double c1 = s.hop1.rate();
    const double c2 = s.hop2.rate();
    // below y_lo the relay CDF is 1 to working precision and the user density is flat
    const double y_lo = 1e-3 * std::min({c1 * b / s.hop1.shape(), x0, 1.0 / c2});
    const double degree = static_cast<double>(s.hop2.shape()) * s.hop2.n_r * L;
    const double y_hi = std::max((degree + 120.0) / c2 - x0, 100.0 * y_lo);

    QuadratureOptions opts;
    opts.abs_tol = 1e-10;
    opts.rel_tol = 1e-10;
    const QuadratureResult near = integrate(integrand, 0.0, y_lo, opts);

    auto log_integrand = [&](double u) {
        const double y = std::exp(u);
        return integrand(y) * y;
    };
    const double u_lo = std::log(y_lo);
    const double u_hi = std::log(y_hi);
    const int pieces = std::max(4, static_cast<int>(std::ceil((u_hi - u_lo) / 0.5)));
    std::vector<double> breaks;
    for (int i = 0; i <= pieces; ++i) {
        breaks.push_back(u_lo + (u_hi - u_lo) * i / pieces);
    }
    opts.max_intervals = 10000;
    const QuadratureResult body = integrate(log_integrand, breaks, opts);

    return std::clamp(head + near.value + body.value, 0.0, 1.0);
}

double op_closed_form_series(const SystemScenario& s, double snr, int user, double prefactor_perturbation)
{
    check_user(s, user);
    const DecodeTargets t = decode_targets(s, snr);
    if (!t.is_feasible(user)) {
        return 1.0;
    }
    using std::exp;
    using std::sqrt;

    const int L = s.users;
    const int l = user;
    const int q1 = s.hop1.shape();
    const int q2 = s.hop2.shape();
    const int nr1 = s.hop1.n_r;
    const int nr2 = s.hop2.n_r;

    const Quad g = snr;
    const Quad mu = t.mu_of(user);
    const Quad a1 = t.alpha1;
    const Quad a2 = t.alpha2;
    const Quad a3 = t.alpha3;
    const Quad c1 = s.hop1.rate();
    const Quad c2 = s.hop2.rate();
    const Quad mu_a1 = mu * a1;
    const Quad mu_a2 = mu * a2;
    const Quad b = mu * (g * mu * a1 * a2 + a3) / g;

    const int r_max = nr2 * L - 1;
    const int k_max = nr1 * (q1 - 1);
    const int s_max = r_max * (q2 - 1);
    const int n_max = q2 + s_max - 1;

    std::vector<std::vector<Quad>> theta1(static_cast<std::size_t>(nr1) + 1);
    for (int p = 1; p <= nr1; ++p) {
        theta1[p] = specfun::series_power_coeffs<Quad>(p, q1, c1);
    }
    std::vector<std::vector<Quad>> theta2(static_cast<std::size_t>(r_max) + 1);
    for (int r = 0; r <= r_max; ++r) {
        theta2[r] = specfun::series_power_coeffs<Quad>(r, q2, c2);
    }

    const int pow_len = std::max(k_max, n_max) + 1;
    std::vector<Quad> pow_a1(pow_len), pow_a2(pow_len), pow_b(pow_len);
    pow_a1[0] = pow_a2[0] = pow_b[0] = Quad(1);
    for (int i = 1; i < pow_len; ++i) {
        pow_a1[i] = pow_a1[i - 1] * mu_a1;
        pow_a2[i] = pow_a2[i - 1] * mu_a2;
        pow_b[i] = pow_b[i - 1] * b;
    }
    auto binom = [](int n, int k) { return Quad(specfun::binomial(n, k)); };

    // N_r2 c2^{q2} / Gamma(q2) * Q_l; the Bessel factor 2 lives in J
    Quad prefactor = Quad(nr2);
    for (int i = 0; i < q2; ++i) {
        prefactor *= c2;
    }
    for (int i = 2; i < q2; ++i) {
        prefactor /= Quad(i);
    }
    prefactor *= Quad(order_coefficient(l, L));
    prefactor *= Quad(1.0 + prefactor_perturbation);

    CompensatedSum<Quad> outer;
    for (int p = 1; p <= nr1; ++p) {
        const int kp = p * (q1 - 1);
        const auto& th1 = theta1[p];
        const Quad q3 = Quad(p) * c1 * b;

        // U[k1] = sum_{k>=k1} theta1_k C(k, k1) (mu a2)^{k-k1}
        std::vector<Quad> u(static_cast<std::size_t>(kp) + 1);
        for (int k1 = 0; k1 <= kp; ++k1) {
            Quad acc(0);
            for (int k = k1; k <= kp; ++k) {
                acc += th1[k] * binom(k, k1) * pow_a2[k - k1];
            }
            u[k1] = acc;
        }

        // G(p, r) collects every positive-term inner sum for this (p, r)
        std::vector<Quad> group(static_cast<std::size_t>(r_max) + 1);
        for (int r = 0; r <= r_max; ++r) {
            const Quad beta = c2 * Quad(r + 1);
            const int sr = r * (q2 - 1);
            const int nr = q2 + sr - 1;
            const int j_min = std::min(0, 1 - kp);
            const int j_max = nr + 1;
            const int order_max = std::max(-j_min, j_max);
            const Quad z = 2 * sqrt(beta * q3);
            const std::vector<Quad> kseq = specfun::bessel_k_sequence<Quad>(order_max, z);
            const Quad rt = sqrt(q3 / beta);
            // J[j - j_min] = 2 (q3/beta)^{j/2} K_j(z)
            std::vector<Quad> jv(static_cast<std::size_t>(j_max - j_min) + 1);
            {
                Quad rt_pow(1);
                for (int j = 0; j <= j_max; ++j) {
                    jv[j - j_min] = 2 * rt_pow * kseq[j];
                    rt_pow *= rt;
                }
                Quad rt_neg(1);
                for (int j = -1; j >= j_min; --j) {
                    rt_neg /= rt;
                    jv[j - j_min] = 2 * rt_neg * kseq[-j];
                }
            }
            CompensatedSum<Quad> gsum;
            for (int si = 0; si <= sr; ++si) {
                const int n = q2 + si - 1;
                Quad inner(0);
                for (int k1 = 0; k1 <= kp; ++k1) {
                    Quad tk(0);
                    for (int k2 = 0; k2 <= n; ++k2) {
                        tk += binom(n, k2) * pow_a1[n - k2] * jv[k2 - k1 + 1 - j_min];
                    }
                    inner += pow_b[k1] * u[k1] * tk;
                }
                gsum.add(theta2[r][si] * inner);
            }
            group[r] = gsum.value() * exp(-beta * mu_a1);
        }

        CompensatedSum<Quad> over_t;
        for (int tt = 0; tt <= L - l; ++tt) {
            const int n_pow = nr2 * (l + tt) - 1;
            CompensatedSum<Quad> over_r;
            for (int r = 0; r <= n_pow; ++r) {
                over_r.add(Quad(sign_of(r)) * binom(n_pow, r) * group[r]);
            }
            over_t.add(Quad(sign_of(tt)) * binom(L - l, tt) * over_r.value());
        }
        const Quad term = Quad(sign_of(p)) * binom(nr1, p) * exp(-Quad(p) * c1 * mu_a2) * over_t.value();
        outer.add(prefactor * term);
    }
    CompensatedSum<Quad> total(Quad(1));
    total.add(outer.value());
    return static_cast<double>(total.value());
}

ClosedFormResult op_closed_form(const SystemScenario& s, double snr, int user, const ClosedFormOptions& opts)
{
    ClosedFormResult res;
    const double raw = op_closed_form_series(s, snr, user, opts.prefactor_perturbation);
    res.series = std::clamp(raw, 0.0, 1.0);
    res.value = res.series;
    if (raw < -1e-9 || raw > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "closed form clamped from " << raw;
        res.warning = msg.str();
    }
    if (!opts.cross_check) {
        return res;
    }
    const double quad = opts.reference ? *opts.reference : op_quadrature(s, snr, user);
    res.quadrature = quad;
    const double diff = std::abs(res.series - quad);
    const bool bad = quad >= 1e-12 ? diff > 1e-6 * quad : diff > 1e-18;
    if (bad) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "closed form unstable (series " << res.series << " vs quadrature " << quad
            << "); reporting quadrature";
        res.warning = res.warning.empty() ? msg.str() : res.warning + "; " + msg.str();
        res.fallback = true;
        res.value = quad;
    }
    return res;
}

ProbabilityBounds op_bounds(const SystemScenario& s, double snr, int user)
{
    check_user(s, user);
    const DecodeTargets t = decode_targets(s, snr);
    if (!t.is_feasible(user)) {
        return {1.0, 1.0};
    }
    const double mu = t.mu_of(user);
    auto combine = [&](double scale) {
        const double fsr = cdf_first_hop(s.hop1, scale * t.alpha2 * mu);
        const double fl = cdf_ordered(s.hop2, user, s.users, scale * t.alpha1 * mu);
        return fsr + fl - fsr * fl;
    };
    return {combine(1.0), combine(2.0)};
}

ProbabilityBounds error_floor(const SystemScenario& s, int user)
{
    check_user(s, user);
    if (s.hop1.sigma_e2 == 0.0 && s.hop2.sigma_e2 == 0.0) {
        return {0.0, 0.0};
    }
    const DecodeTargets t = decode_targets(s, 1.0);
    if (!t.is_feasible(user)) {
        return {1.0, 1.0};
    }
    const double zeta = t.zeta_of(user);
    auto combine = [&](double scale) {
        const double fsr = cdf_first_hop(s.hop1, scale * s.hop1.sigma_e2 * zeta);
        const double fl = cdf_ordered(s.hop2, user, s.users, scale * s.hop2.sigma_e2 * zeta);
        return fsr + fl - fsr * fl;
    };
    return {combine(1.0), combine(2.0)};
}

DiversityGain diversity_array_gain(const SystemScenario& s, int user)
{
    check_user(s, user);
    if (s.hop1.epsilon != 0.0 || s.hop2.epsilon != 0.0) {
        throw std::logic_error(
            "asymptotic diversity/array gain requires perfect CSI (epsilon = 0); use error_floor instead");
    }
    const int tau1 = s.hop1.m * s.hop1.n_t * s.hop1.n_r;
    const int tau2 = user * s.hop2.m * s.hop2.n_t * s.hop2.n_r;
    const double log_a1 = tau1 * std::log(s.hop1.m / s.hop1.omega) -
                          s.hop1.n_r * specfun::ln_factorial(s.hop1.shape());
    const double log_a2 = std::log(order_coefficient(user, s.users) / user) +
                          tau2 * std::log(s.hop2.m / s.hop2.omega) -
                          user * s.hop2.n_r * specfun::ln_factorial(s.hop2.shape());
    DiversityGain out;
    out.diversity = std::min(tau1, tau2);
    if (tau1 == tau2) {
        out.chi = std::exp(log_a1) + std::exp(log_a2);
    } else if (tau1 < tau2) {
        out.chi = std::exp(log_a1);
    } else {
        out.chi = std::exp(log_a2);
    }
    out.array_gain = std::pow(out.chi, 1.0 / out.diversity);
    return out;
}

double op_asymptotic(const SystemScenario& s, double snr, int user)
{
    const DiversityGain dg = diversity_array_gain(s, user);
    const DecodeTargets t = decode_targets(s, snr);
    if (!t.is_feasible(user)) {
        return 1.0;
    }
    return dg.chi * std::pow(t.mu_of(user), dg.diversity);
}

double oma_threshold(const std::vector<double>& thresholds)
{
    if (thresholds.empty()) {
        throw std::invalid_argument("oma_threshold: need at least one threshold");
    }
    double prod = 1.0;
    for (double t : thresholds) {
        prod *= 1.0 + t;
    }
    return prod - 1.0;
}

SystemScenario oma_scenario(const SystemScenario& s)
{
    SystemScenario o;
    o.users = 1;
    o.hop1 = s.hop1;
    o.hop2 = s.hop2;
    o.alloc = {1.0};
    o.thresholds = {oma_threshold(s.thresholds)};
    return o;
}

double op_oma(const SystemScenario& s, double snr)
{
    return op_quadrature(oma_scenario(s), snr, 1);
}

OutageReport analyze(const SystemScenario& s, double snr, int user)
{
    OutageReport r;
    r.user = user;
    r.op_quadrature = op_quadrature(s, snr, user);
    ClosedFormOptions opts;
    opts.reference = r.op_quadrature;
    const ClosedFormResult cf = op_closed_form(s, snr, user, opts);
    r.op_closed = cf.value;
    if (!cf.warning.empty()) {
        r.warnings.push_back(cf.warning);
    }
    const ProbabilityBounds b = op_bounds(s, snr, user);
    r.op_lower_bound = b.lower;
    r.op_upper_bound = b.upper;
    const ProbabilityBounds ef = error_floor(s, user);
    r.ef_lower = ef.lower;
    r.ef_upper = ef.upper;
    if (s.hop1.epsilon == 0.0 && s.hop2.epsilon == 0.0) {
        r.op_asymptotic = op_asymptotic(s, snr, user);
    }
    return r;
}

} // namespace noma
