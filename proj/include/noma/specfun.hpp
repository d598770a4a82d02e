#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace noma::specfun {

/// Regularized lower incomplete gamma P(shape, x) for integer shape.
///
/// Uses the finite series 1 - e^{-x} sum_{k<shape} x^k/k! when x is large
/// and the equivalent tail series e^{-x} sum_{k>=shape} x^k/k! when x is
/// small, so tiny probabilities keep full relative accuracy.
double regularized_lower_gamma(int shape, double x);

double ln_factorial(int n);

/// Exact binomial coefficient. Throws std::invalid_argument for k > n and
/// std::range_error if the result does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

/// Coefficients of [sum_{k<base_terms} (scale x)^k / k!]^power.
struct CoeffTable {
    int power = 1;
    int base_terms = 1;
    double scale = 1.0;
    std::vector<double> coeffs;
};

CoeffTable multinomial_coeffs(int power, int base_terms, double scale);

/// Series-power recursion used by multinomial_coeffs, generic over the
/// arithmetic type. power == 0 yields the single coefficient 1.
template <class Real>
std::vector<Real> series_power_coeffs(int power, int base_terms, const Real& scale)
{
    if (power < 0 || base_terms < 1) {
        throw std::invalid_argument("series_power_coeffs: power >= 0 and base_terms >= 1 required");
    }
    const int top = base_terms - 1;
    std::vector<Real> w(static_cast<std::size_t>(top) + 1);
    w[0] = Real(1);
    for (int b = 1; b <= top; ++b) {
        w[b] = w[b - 1] * scale / Real(b);
    }
    const int len = power * top + 1;
    std::vector<Real> coeffs(static_cast<std::size_t>(len));
    coeffs[0] = Real(1);
    for (int x = 1; x < len; ++x) {
        Real acc(0);
        const int bmax = x < top ? x : top;
        for (int b = 1; b <= bmax; ++b) {
            acc += Real(b * (power + 1) - x) * w[b] * coeffs[x - b];
        }
        coeffs[x] = acc / (Real(x) * w[0]);
    }
    return coeffs;
}

namespace detail {

// K0 and K1 from their ascending series; accurate for x <= 2.
template <class Real>
void bessel_k01_series(const Real& x, Real& k0, Real& k1)
{
    using std::abs;
    using std::log;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real euler = boost::math::constants::euler<Real>();
    const Real y = x * x / 4;
    const Real lx = log(x / 2);

    Real t0(1);      // y^k / (k!)^2
    Real t1(1);      // y^k / (k! (k+1)!)
    Real psi_k = -euler;           // psi(k+1)
    Real psi_k1 = Real(1) - euler; // psi(k+2)
    Real i0 = t0, s0 = psi_k * t0;
    Real i1 = t1, s1 = (psi_k + psi_k1) * t1;
    for (int k = 1; k < 10000; ++k) {
        t0 *= y / (Real(k) * Real(k));
        t1 *= y / (Real(k) * Real(k + 1));
        psi_k = psi_k1;
        psi_k1 += Real(1) / Real(k + 1);
        i0 += t0;
        s0 += psi_k * t0;
        i1 += t1;
        s1 += (psi_k + psi_k1) * t1;
        if (t0 < eps * abs(s0) && t1 < eps * abs(s1) && t0 < eps * i0) {
            break;
        }
    }
    k0 = -lx * i0 + s0;
    k1 = Real(1) / x + lx * (x / 2) * i1 - (x / 4) * s1;
}

// Steed's continued fraction (Thompson-Barnett CF2) for order zero, x > 2.
template <class Real>
void bessel_k01_cf2(const Real& x, Real& k0, Real& k1)
{
    using std::abs;
    using std::exp;
    using std::sqrt;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real pi = boost::math::constants::pi<Real>();

    Real b = 2 * (Real(1) + x);
    Real d = Real(1) / b;
    Real h = d;
    Real delh = d;
    Real q1(0);
    Real q2(1);
    const Real a1(0.25);
    Real q = a1;
    Real c = a1;
    Real a = -a1;
    Real s = Real(1) + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= Real(2 * (i - 1));
        c = -a * c / Real(i);
        const Real qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2;
        d = Real(1) / (b + a * d);
        delh = (b * d - Real(1)) * delh;
        h += delh;
        const Real dels = q * delh;
        s += dels;
        if (abs(dels / s) < eps) {
            break;
        }
    }
    h = a1 * h;
    k0 = sqrt(pi / (2 * x)) * exp(-x) / s;
    k1 = k0 * (x + Real(0.5) - h) / x;
}

} // namespace detail

/// K_0(x) .. K_{max_order}(x) by upward recurrence from orders 0 and 1.
template <class Real>
std::vector<Real> bessel_k_sequence(int max_order, const Real& x)
{
    if (!(x > Real(0))) {
        throw std::domain_error("bessel_k: argument must be positive");
    }
    if (max_order < 0) {
        throw std::invalid_argument("bessel_k_sequence: max_order must be non-negative");
    }
    Real k0, k1;
    if (x <= Real(2)) {
        detail::bessel_k01_series(x, k0, k1);
    } else {
        detail::bessel_k01_cf2(x, k0, k1);
    }
    std::vector<Real> out(static_cast<std::size_t>(max_order) + 1);
    out[0] = k0;
    if (max_order >= 1) {
        out[1] = k1;
    }
    const Real two_over_x = Real(2) / x;
    for (int n = 1; n < max_order; ++n) {
        out[n + 1] = out[n - 1] + Real(n) * two_over_x * out[n];
    }
    return out;
}

/// Modified Bessel function of the second kind for integer order.
/// Overflow for very high order and tiny x returns +infinity.
template <class Real>
Real bessel_k(int order, const Real& x)
{
    const int n = order < 0 ? -order : order;
    return bessel_k_sequence<Real>(n, x)[n];
}

double bessel_k(int order, double x);

} // namespace noma::specfun
