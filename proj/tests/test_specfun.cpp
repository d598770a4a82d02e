#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "noma/specfun.hpp"

using namespace noma::specfun;

namespace {

// [sum_{k<q} (c x)^k / k!]^p by repeated convolution
std::vector<double> convolution_power(int p, int q, double c)
{
    std::vector<double> base(static_cast<std::size_t>(q));
    double term = 1.0;
    for (int k = 0; k < q; ++k) {
        base[k] = term;
        term *= c / (k + 1);
    }
    std::vector<double> acc{1.0};
    for (int i = 0; i < p; ++i) {
        std::vector<double> next(acc.size() + base.size() - 1, 0.0);
        for (std::size_t a = 0; a < acc.size(); ++a) {
            for (std::size_t b = 0; b < base.size(); ++b) {
                next[a + b] += acc[a] * base[b];
            }
        }
        acc = next;
    }
    return acc;
}

double bessel_integral(int n, double x)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double t) {
        const double e = -x * std::cosh(t) + n * t;
        // cosh(n t) e^{-x cosh t} without overflow
        return 0.5 * (std::exp(e) + std::exp(-x * std::cosh(t) - n * t));
    };
    return integrator.integrate(f, 1e-14);
}

} // namespace

TEST_CASE("regularized_lower_gamma examples")
{
    CHECK(regularized_lower_gamma(1, 0.0) == 0.0);
    CHECK(regularized_lower_gamma(1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    // oracle: integral of t e^{-t} over [0, 1]
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double t) { return t * std::exp(-t); }, 0.0, 1.0);
    CHECK(regularized_lower_gamma(2, 1.0) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(regularized_lower_gamma(2, 1.0) == doctest::Approx(0.264241117657115).epsilon(1e-13));
}

TEST_CASE("regularized_lower_gamma rejects bad input")
{
    CHECK_THROWS_AS(regularized_lower_gamma(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_lower_gamma(2, -1.0), std::invalid_argument);
}

TEST_CASE("regularized_lower_gamma is monotone and tends to one")
{
    for (int shape = 1; shape <= 8; ++shape) {
        double prev = 0.0;
        for (double x = 0.0; x <= 40.0; x += 0.05) {
            const double v = regularized_lower_gamma(shape, x);
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
        CHECK(regularized_lower_gamma(shape, 1e3 * shape) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("regularized_lower_gamma keeps relative accuracy for tiny values")
{
    // leading term x^a / a! dominates for x -> 0
    CHECK(regularized_lower_gamma(4, 1e-6) == doctest::Approx(std::pow(1e-6, 4) / 24.0).epsilon(1e-5));
}

TEST_CASE("bessel_k examples")
{
    CHECK(bessel_k(-2, 3.7) == bessel_k(2, 3.7));
    CHECK(bessel_k(0, 1.0) == doctest::Approx(bessel_integral(0, 1.0)).epsilon(1e-10));
    CHECK(bessel_k(1, 1.0) == doctest::Approx(bessel_integral(1, 1.0)).epsilon(1e-10));
    CHECK(bessel_k(0, 1.0) == doctest::Approx(0.421024438240708).epsilon(1e-12));
    CHECK(bessel_k(1, 1.0) == doctest::Approx(0.601907230197235).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_k(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(1, -1.0), std::domain_error);
}

TEST_CASE("bessel_k matches the integral representation")
{
    for (int n = 0; n <= 10; ++n) {
        for (double x : {0.01, 0.1, 1.0, 5.0, 20.0}) {
            CAPTURE(n);
            CAPTURE(x);
            CHECK(bessel_k(n, x) == doctest::Approx(bessel_integral(n, x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("bessel_k relative accuracy over [1e-6, 50]")
{
    for (int n : {0, 1, 2, 5, 13, 40}) {
        for (double x : {1e-6, 1e-3, 0.5, 1.99, 2.01, 7.5, 30.0, 50.0}) {
            const double ref = std::cyl_bessel_k(static_cast<double>(n), x);
            if (!std::isfinite(ref)) {
                continue;
            }
            CAPTURE(n);
            CAPTURE(x);
            CHECK(bessel_k(n, x) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("multinomial_coeffs examples")
{
    for (int p = 1; p <= 4; ++p) {
        for (int q = 1; q <= 4; ++q) {
            const CoeffTable t = multinomial_coeffs(p, q, 0.7);
            CHECK(t.coeffs.at(0) == 1.0);
            CHECK(t.coeffs.size() == static_cast<std::size_t>(p * (q - 1) + 1));
            if (q >= 2) {
                CHECK(t.coeffs[1] == doctest::Approx(p * 0.7).epsilon(1e-14));
            }
        }
    }
    const CoeffTable sq = multinomial_coeffs(2, 2, 1.0);
    REQUIRE(sq.coeffs.size() == 3);
    CHECK(sq.coeffs[0] == 1.0);
    CHECK(sq.coeffs[1] == doctest::Approx(2.0));
    CHECK(sq.coeffs[2] == doctest::Approx(1.0));
}

TEST_CASE("multinomial_coeffs agrees with the convolution oracle")
{
    for (int p = 1; p <= 6; ++p) {
        for (int q = 1; q <= 8; ++q) {
            for (double c : {0.25, 1.0, 4.0}) {
                const CoeffTable t = multinomial_coeffs(p, q, c);
                const std::vector<double> oracle = convolution_power(p, q, c);
                REQUIRE(t.coeffs.size() == oracle.size());
                for (std::size_t x = 0; x < oracle.size(); ++x) {
                    CHECK(t.coeffs[x] >= 0.0);
                    CHECK(t.coeffs[x] == doctest::Approx(oracle[x]).epsilon(1e-12));
                }
                // the generating polynomial at t = 0.5
                double poly = 0.0;
                for (std::size_t x = 0; x < t.coeffs.size(); ++x) {
                    poly += t.coeffs[x] * std::pow(0.5, static_cast<double>(x));
                }
                double series = 0.0;
                double term = 1.0;
                for (int k = 0; k < q; ++k) {
                    series += term;
                    term *= c * 0.5 / (k + 1);
                }
                CHECK(poly == doctest::Approx(std::pow(series, p)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("multinomial_coeffs validates input")
{
    CHECK_THROWS_AS(multinomial_coeffs(0, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(multinomial_coeffs(1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(multinomial_coeffs(1, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(multinomial_coeffs(200, 60, 1e3), std::range_error);
}

TEST_CASE("binomial and ln_factorial")
{
    CHECK(binomial(7, 0) == 1u);
    CHECK(binomial(5, 2) == 10u);
    CHECK(binomial(64, 32) == 1832624140942590534ULL);
    CHECK_THROWS_AS(binomial(2, 3), std::invalid_argument);
    CHECK(ln_factorial(10) == doctest::Approx(std::log(3628800.0)).epsilon(1e-12));
    CHECK(ln_factorial(0) == 0.0);
    CHECK(ln_factorial(200) == doctest::Approx(std::lgamma(201.0)).epsilon(1e-12));
}
