#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "noma/cli.hpp"
#include "noma/simulator.hpp"

namespace noma::cli {

std::vector<FigureSeries> validation_configs()
{
    // union of the series behind fig2..fig7, deduplicated
    std::vector<FigureSeries> out;
    std::set<std::tuple<int, int, int, int, int, int, double>> seen;
    for (const std::string& id : preset_ids()) {
        const FigurePreset p = figure_preset(id);
        for (const FigureSeries& s : p.series) {
            const auto& a = s.scenario.hop1;
            const auto& b = s.scenario.hop2;
            const auto key = std::make_tuple(a.m, b.m, a.nt, a.nr, b.nt, b.nr, a.epsilon);
            if (seen.insert(key).second) {
                char label[96];
                std::snprintf(label, sizeof label, "N=(%d,%d;%d,%d) m=(%d,%d) eps=%g", a.nt, a.nr, b.nt, b.nr, a.m,
                              b.m, a.epsilon);
                out.push_back({label, s.scenario});
            }
        }
    }
    return out;
}

namespace {

struct Tally {
    int points = 0;
    int failures = 0;
    double worst = 0.0;
    std::vector<std::string> offenders;

    void fail(const std::string& where)
    {
        ++failures;
        if (offenders.size() < 20) {
            offenders.push_back(where);
        }
    }
};

std::string where(const std::string& config, double snr_db, int user)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s snr=%gdB user=%d", config.c_str(), snr_db, user);
    return buf;
}

void print(std::ostream& out, const char* name, const Tally& t, const std::string& detail)
{
    out << (t.failures == 0 ? "PASS " : "FAIL ") << name << ": " << t.points << " points, " << detail << "\n";
    for (const std::string& o : t.offenders) {
        out << "    offending: " << o << "\n";
    }
    if (t.failures > static_cast<int>(t.offenders.size())) {
        out << "    ... and " << (t.failures - static_cast<int>(t.offenders.size())) << " more\n";
    }
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

} // namespace

int run_validation(const ValidationOptions& opts, std::ostream& report)
{
    const std::vector<FigureSeries> configs = validation_configs();
    const std::vector<double> analytic_snr = {0, 10, 20, 30, 40};
    const std::vector<double> mc_snr = {0, 10, 20, 30};

    Tally closed;
    Tally sandwich;
    for (const FigureSeries& c : configs) {
        const SystemScenario s = c.scenario.build();
        for (double db : analytic_snr) {
            const double snr = std::pow(10.0, db / 10.0);
            for (int l = 1; l <= s.users; ++l) {
                const double q = op_quadrature(s, snr, l);
                const double cf = op_closed_form_series(s, snr, l, opts.closed_perturbation);
                if (q >= 1e-12) {
                    ++closed.points;
                    const double rel = std::abs(cf - q) / q;
                    closed.worst = std::max(closed.worst, rel);
                    if (!(rel <= 1e-6)) {
                        closed.fail(where(c.label, db, l) + " rel=" + sci(rel));
                    }
                }
                const ProbabilityBounds b = op_bounds(s, snr, l);
                ++sandwich.points;
                if (!(b.lower <= q + 1e-9 && q <= b.upper + 1e-9)) {
                    sandwich.fail(where(c.label, db, l));
                }
            }
        }
    }
    report << "configurations: " << configs.size() << "\n";
    print(report, "closed form vs quadrature", closed, "max relative error " + sci(closed.worst) + " (limit 1e-06)");
    print(report, "bound sandwich", sandwich, "lower <= quadrature <= upper");
    bool ok = closed.failures == 0 && sandwich.failures == 0;

    if (opts.trials == 0) {
        report << "SKIP Monte Carlo: trials = 0\n";
    } else {
        Tally coverage;
        Tally exact_floor;
        double worst_z = 0.0;
        double worst_gap = 0.0;
        int gap_points = 0;
        std::uint64_t point = 0;
        for (const FigureSeries& c : configs) {
            const SystemScenario s = c.scenario.build();
            for (double db : mc_snr) {
                const double snr = std::pow(10.0, db / 10.0);
                // separate streams per point keep the comparisons independent
                const std::uint64_t seed = splitmix64(opts.seed ^ splitmix64(~point++));
                const auto est = estimate_op(s, snr, opts.trials, seed, opts.lanes);
                const double n = static_cast<double>(opts.trials);
                for (int l = 1; l <= s.users; ++l) {
                    const double p = std::clamp(op_closed_form_series(s, snr, l, opts.closed_perturbation), 0.0, 1.0);
                    // binomial spread under the analytic value; 0.5/n keeps p = 0 points testable
                    const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.5 / n) / n);
                    const UserEstimates& e = est[static_cast<std::size_t>(l - 1)];
                    ++coverage.points;
                    const double z = (e.upper.p_hat - p) / sigma;
                    worst_z = std::max(worst_z, std::abs(z));
                    if (!consistent_at_three_sigma(e.upper.outages, e.upper.trials, p)) {
                        coverage.fail(where(c.label, db, l) + " z=" + sci(z));
                    }
                    ++exact_floor.points;
                    if (e.exact.p_hat < p && !consistent_at_three_sigma(e.exact.outages, e.exact.trials, p)) {
                        exact_floor.fail(where(c.label, db, l));
                    }
                    if (p >= 1e-4) {
                        ++gap_points;
                        worst_gap = std::max(worst_gap, std::abs(e.exact.p_hat - p) / p);
                    }
                }
            }
        }
        char detail[160];
        std::snprintf(detail, sizeof detail, "%d/%d consistent at 3 sigma (exact binomial tails), max |z| %.2f, trials %llu, seed %llu",
                      coverage.points - coverage.failures, coverage.points, worst_z,
                      static_cast<unsigned long long>(opts.trials), static_cast<unsigned long long>(opts.seed));
        print(report, "Monte Carlo (upper-bound SINR) vs closed form", coverage, detail);
        print(report, "exact-SINR Monte Carlo >= closed form - 3 sigma", exact_floor, "per-trial ordering");
        report << "INFO exact-SINR vs closed form: max relative gap " << sci(worst_gap) << " over " << gap_points
               << " points with OP >= 1e-4\n";
        ok = ok && coverage.failures == 0 && exact_floor.failures == 0;
    }
    report << (ok ? "validation passed" : "validation FAILED") << "\n";
    return ok ? 0 : 2;
}

} // namespace noma::cli
