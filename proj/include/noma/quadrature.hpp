#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma {

/// Raised when a numerical procedure cannot meet its accuracy target.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved)
    {
    }
    double achieved_tolerance() const noexcept { return achieved_; }

  private:
    double achieved_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_intervals = 10000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over the pieces
/// [breaks[i], breaks[i+1]]. Converges when the summed error estimate is
/// below min(abs_tol, rel_tol * |value|), with an absolute floor of 1e-300.
/// Throws NumericalError when the interval budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                           const QuadratureOptions& opts = {});

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integral over [a, inf) using x = a + s * t / (1 - t).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                                       const QuadratureOptions& opts = {});

} // namespace noma
