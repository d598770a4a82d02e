#include "noma/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace noma {

namespace {

// Kronrod 15-point abscissae and weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_k = fc * kWgk[7];
    double result_g = fc * kWg[3];
    double result_abs = std::abs(result_k);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        result_k += kWgk[j] * (f1[j] + f2[j]);
        result_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) {
            result_g += kWg[j / 2] * (f1[j] + f2[j]);
        }
    }
    const double mean = 0.5 * result_k;
    double result_asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    result_k *= half;
    result_g *= half;
    result_abs *= std::abs(half);
    result_asc *= std::abs(half);

    double err = std::abs(result_k - result_g);
    if (result_asc != 0.0 && err != 0.0) {
        err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    }
    const double round_off = 50.0 * std::numeric_limits<double>::epsilon() * result_abs;
    if (result_abs > std::numeric_limits<double>::min() / round_off) {
        err = std::max(err, round_off);
    }
    return {a, b, result_k, err};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                           const QuadratureOptions& opts)
{
    if (breaks.size() < 2) {
        throw std::invalid_argument("integrate: need at least two break points");
    }
    std::priority_queue<Segment> queue;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] == breaks[i]) {
            continue;
        }
        Segment s = gauss_kronrod(f, breaks[i], breaks[i + 1]);
        total += s.value;
        total_err += s.error;
        queue.push(s);
    }
    int intervals = static_cast<int>(queue.size());
    auto target = [&] { return std::max(1e-300, std::min(opts.abs_tol, opts.rel_tol * std::abs(total))); };

    while (total_err > target() && !queue.empty()) {
        if (intervals >= opts.max_intervals) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge within " << opts.max_intervals
                << " intervals; achieved error " << total_err << " on value " << total;
            throw NumericalError(msg.str(), total_err);
        }
        const Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval at machine resolution; accept it as is
            total_err -= worst.error;
            continue;
        }
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    // re-sum to shed drift from incremental updates
    double sum = 0.0;
    double err = 0.0;
    while (!queue.empty()) {
        sum += queue.top().value;
        err += queue.top().error;
        queue.pop();
    }
    return {sum, std::max(err, 0.0), intervals};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts)
{
    return integrate(f, std::vector<double>{a, b}, opts);
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                                       const QuadratureOptions& opts)
{
    auto mapped = [&](double t) {
        if (t >= 1.0) {
            return 0.0;
        }
        const double u = 1.0 - t;
        return f(a + scale * t / u) * scale / (u * u);
    };
    std::vector<double> breaks;
    for (int i = 0; i <= 16; ++i) {
        breaks.push_back(i / 16.0);
    }
    return integrate(mapped, breaks, opts);
}

} // namespace noma
