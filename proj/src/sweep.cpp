#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "noma/cli.hpp"
#include "noma/simulator.hpp"

namespace noma::cli {

SystemScenario scenario_at(const SweepSpec& spec, double x)
{
    ScenarioConfig c = spec.scenario;
    switch (spec.axis) {
    case Axis::snr_db:
        break;
    case Axis::d1:
        c.hop1.d = x;
        c.hop2.d = 1.0 - x;
        break;
    case Axis::epsilon:
        c.hop1.epsilon = x;
        c.hop2.epsilon = x;
        break;
    }
    return c.build();
}

double snr_at(const SweepSpec& spec, double x)
{
    const double db = spec.axis == Axis::snr_db ? x : spec.snr_db;
    return std::pow(10.0, db / 10.0);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::string& series)
{
    validate_sweep(spec);
    std::vector<int> users = spec.users;
    if (users.empty()) {
        for (int l = 1; l <= spec.scenario.users; ++l) {
            users.push_back(l);
        }
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    const bool want_mc = spec.trials > 0 && (spec.outputs & kMonteCarloOutputs);
    const unsigned o = spec.outputs;

    std::vector<SweepRow> rows;
    for (double x : spec.points) {
        const SystemScenario s = scenario_at(spec, x);
        const double snr = snr_at(spec, x);
        std::vector<UserEstimates> mc;
        if (want_mc) {
            mc = estimate_op(s, snr, spec.trials, spec.seed, spec.lanes);
        }
        std::optional<double> oma;
        if (o & out_oma) {
            oma = op_oma(s, snr);
        }
        const bool perfect = s.hop1.epsilon == 0.0 && s.hop2.epsilon == 0.0;
        for (int l : users) {
            SweepRow r;
            r.series = series;
            r.axis_value = x;
            r.user = l;
            r.trials = want_mc ? spec.trials : 0;
            r.seed = spec.seed;
            std::vector<std::string> warnings;

            std::optional<double> quad;
            if (o & (out_quadrature | out_closed)) {
                quad = op_quadrature(s, snr, l);
            }
            if (o & out_quadrature) {
                r.op_quadrature = quad;
            }
            if (o & out_closed) {
                ClosedFormOptions co;
                co.reference = quad;
                const ClosedFormResult cf = op_closed_form(s, snr, l, co);
                r.op_closed = cf.value;
                if (!cf.warning.empty()) {
                    warnings.push_back(cf.warning);
                }
            }
            if (o & out_bounds) {
                const ProbabilityBounds b = op_bounds(s, snr, l);
                r.op_lower = b.lower;
                r.op_upper = b.upper;
            }
            if (o & out_floor) {
                const ProbabilityBounds f = error_floor(s, l);
                r.ef_lower = f.lower;
                r.ef_upper = f.upper;
            }
            if ((o & out_asymptotic) && perfect) {
                r.op_asymptotic = op_asymptotic(s, snr, l);
            }
            if (want_mc) {
                const UserEstimates& e = mc[static_cast<std::size_t>(l - 1)];
                if (o & out_mc_exact) {
                    r.op_mc_exact = e.exact.p_hat;
                }
                if (o & out_mc_upper) {
                    r.op_mc_upper = e.upper.p_hat;
                    r.ci_halfwidth = e.upper.ci_halfwidth;
                }
            }
            r.op_oma = oma;
            for (std::size_t i = 0; i < warnings.size(); ++i) {
                r.warnings += (i ? "; " : "") + warnings[i];
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(const std::optional<double>& x)
{
    return x ? fmt(*x) : std::string();
}

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

} // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_series)
{
    if (with_series) {
        out << "series,";
    }
    out << "axis_value,user,op_closed,op_quadrature,op_lower,op_upper,ef_lower,ef_upper,op_asymptotic,"
           "op_mc_exact,op_mc_upper,op_oma,ci_halfwidth,trials,seed,warnings\n";
    for (const SweepRow& r : rows) {
        if (with_series) {
            out << quote(r.series) << ',';
        }
        out << fmt(r.axis_value) << ',' << r.user << ',' << fmt(r.op_closed) << ',' << fmt(r.op_quadrature) << ','
            << fmt(r.op_lower) << ',' << fmt(r.op_upper) << ',' << fmt(r.ef_lower) << ',' << fmt(r.ef_upper) << ','
            << fmt(r.op_asymptotic) << ',' << fmt(r.op_mc_exact) << ',' << fmt(r.op_mc_upper) << ','
            << fmt(r.op_oma) << ',' << fmt(r.ci_halfwidth) << ',' << r.trials << ',' << r.seed << ','
            << quote(r.warnings) << '\n';
    }
}

} // namespace noma::cli
