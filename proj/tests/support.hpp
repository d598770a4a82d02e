#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "noma/analytic.hpp"

namespace testing {

struct Antennas {
    int nt1, nr1, nt2, nr2;
};

// the default three-user scenario with d1 = d2 = 0.5 and alpha = 4
inline noma::SystemScenario scenario(Antennas n, int m1, int m2, double eps, double d1 = 0.5)
{
    noma::SystemScenario s;
    s.users = 3;
    s.alloc = {3.0 / 6, 2.0 / 6, 1.0 / 6};
    s.thresholds = {0.9, 1.5, 2.0};
    s.hop1 = noma::make_hop_stats(d1, 4.0, eps, m1, n.nt1, n.nr1);
    s.hop2 = noma::make_hop_stats(1.0 - d1, 4.0, eps, m2, n.nt2, n.nr2);
    return s;
}

// Independent reference laws built on boost::math::gamma_p.
struct Law {
    int shape;
    int branches;
    double rate;

    explicit Law(const noma::HopStats& h) : shape(h.m * h.n_t), branches(h.n_r), rate(h.m / h.omega_hat) {}

    double cdf(double x) const
    {
        return x <= 0 ? 0.0 : std::pow(boost::math::gamma_p(shape, rate * x), branches);
    }
    double pdf(double x) const
    {
        if (x <= 0) {
            return 0.0;
        }
        const double g = boost::math::gamma_p(shape, rate * x);
        return branches * std::pow(g, branches - 1) * rate * boost::math::gamma_p_derivative(shape, rate * x);
    }
    double ordered_cdf(int l, int L, double x) const
    {
        // P(at least l of L below x)
        const double f = cdf(x);
        double acc = 0.0;
        for (int k = l; k <= L; ++k) {
            acc += boost::math::binomial_coefficient<double>(L, k) * std::pow(f, k) * std::pow(1 - f, L - k);
        }
        return acc;
    }
    double ordered_pdf(int l, int L, double x) const
    {
        const double f = cdf(x);
        const double q = boost::math::factorial<double>(L) /
                         (boost::math::factorial<double>(L - l) * boost::math::factorial<double>(l - 1));
        return q * pdf(x) * std::pow(f, l - 1) * std::pow(1 - f, L - l);
    }
};

// Outage of user l from the end-to-end upper-bound SINR, integrated with boost's exp_sinh.
inline double reference_op(const noma::SystemScenario& s, double snr, int l)
{
    const noma::DecodeTargets t = noma::decode_targets(s, snr);
    if (!t.is_feasible(l)) {
        return 1.0;
    }
    const Law relay(s.hop1);
    const Law user(s.hop2);
    const double mu = t.mu_of(l);
    const double x0 = mu * t.alpha1;
    const double b = mu * (snr * mu * t.alpha1 * t.alpha2 + t.alpha3) / snr;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double body = integrator.integrate(
        [&](double y) {
            if (!(y > 0) || !std::isfinite(y)) {
                return 0.0;
            }
            return user.ordered_pdf(l, s.users, x0 + y) * relay.cdf(mu * t.alpha2 + b / y);
        },
        1e-12);
    return user.ordered_cdf(l, s.users, x0) + body;
}

} // namespace testing
