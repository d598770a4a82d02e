#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "noma/cli.hpp"

namespace noma::cli {

namespace {

ScenarioConfig make_config(int m1, int m2, int nt1, int nr1, int nt2, int nr2, double eps)
{
    ScenarioConfig c;
    c.hop1 = {m1, nt1, nr1, 0.5, eps};
    c.hop2 = {m2, nt2, nr2, 0.5, eps};
    return c;
}

std::string antenna_label(int nt1, int nr1, int nt2, int nr2)
{
    std::ostringstream s;
    s << "N=(" << nt1 << "," << nr1 << ";" << nt2 << "," << nr2 << ")";
    return s.str();
}

std::string eps_label(double eps)
{
    std::ostringstream s;
    s << "eps=" << eps;
    return s.str();
}

std::string m_label(int m1, int m2)
{
    return "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ")";
}

constexpr int kAntennas[3][4] = {{1, 1, 1, 1}, {1, 2, 1, 2}, {2, 2, 2, 2}};

} // namespace

const std::vector<std::string>& preset_ids()
{
    static const std::vector<std::string> ids = {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
    return ids;
}

FigurePreset figure_preset(const std::string& id)
{
    FigurePreset p;
    p.id = id;
    if (id == "fig2") {
        p.title = "OP vs SNR, m=(1,1), eps=0.005, antenna configurations";
        p.points = parse_range("0:2.5:40");
        p.outputs = out_closed | out_quadrature | out_bounds | out_floor | out_mc_exact | out_mc_upper;
        for (const auto& a : kAntennas) {
            p.series.push_back({antenna_label(a[0], a[1], a[2], a[3]), make_config(1, 1, a[0], a[1], a[2], a[3], 0.005)});
        }
    } else if (id == "fig3") {
        p.title = "OP vs SNR, N=(1,2;1,2), eps=0.005, Nakagami parameters";
        p.points = parse_range("0:2.5:40");
        p.outputs = out_closed | out_quadrature | out_mc_exact | out_mc_upper;
        for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
            p.series.push_back({m_label(m1, m2), make_config(m1, m2, 1, 2, 1, 2, 0.005)});
        }
    } else if (id == "fig4") {
        p.title = "OP vs SNR, N=(2,2;2,2), m=(1,1), relative CEE";
        p.points = parse_range("0:2.5:40");
        p.outputs = out_closed | out_quadrature | out_floor | out_mc_upper;
        for (double eps : {0.0, 0.005, 0.05}) {
            p.series.push_back({eps_label(eps), make_config(1, 1, 2, 2, 2, 2, eps)});
        }
    } else if (id == "fig5") {
        p.title = "OP vs SNR, m=(1,1), antenna configurations and relative CEE";
        p.points = parse_range("0:2.5:60");
        p.outputs = out_closed | out_quadrature | out_floor | out_mc_upper;
        for (int a : {0, 2}) {
            const auto& n = kAntennas[a];
            for (double eps : {0.005, 0.05}) {
                p.series.push_back({antenna_label(n[0], n[1], n[2], n[3]) + " " + eps_label(eps),
                                    make_config(1, 1, n[0], n[1], n[2], n[3], eps)});
            }
        }
    } else if (id == "fig6") {
        p.title = "OP vs d1 at SNR=10 dB, N=(2,2;2,2), eps=0.005, NOMA and OMA";
        p.axis = Axis::d1;
        p.points = parse_range("0.05:0.05:0.95");
        p.snr_db = 10.0;
        p.outputs = out_closed | out_quadrature | out_oma | out_mc_upper;
        for (auto [m1, m2] : {std::pair{1, 1}, {2, 1}}) {
            p.series.push_back({m_label(m1, m2), make_config(m1, m2, 2, 2, 2, 2, 0.005)});
        }
    } else if (id == "fig7") {
        p.title = "OP vs SNR, m=(1,1), eps=0, antenna configurations";
        p.points = parse_range("0:2.5:50");
        p.outputs = out_closed | out_quadrature | out_floor | out_asymptotic | out_mc_upper;
        for (const auto& a : kAntennas) {
            p.series.push_back({antenna_label(a[0], a[1], a[2], a[3]), make_config(1, 1, a[0], a[1], a[2], a[3], 0.0)});
        }
    } else {
        throw ConfigError("figure", "unknown preset '" + id + "' (expected fig2..fig7)");
    }
    return p;
}

std::vector<SweepRow> run_figure(const FigurePreset& preset, std::uint64_t trials, std::uint64_t seed, int lanes)
{
    std::vector<SweepRow> rows;
    for (const FigureSeries& s : preset.series) {
        SweepSpec spec;
        spec.axis = preset.axis;
        spec.points = preset.points;
        spec.scenario = s.scenario;
        spec.trials = trials;
        spec.seed = seed;
        spec.lanes = lanes;
        spec.snr_db = preset.snr_db;
        spec.outputs = trials > 0 ? preset.outputs : (preset.outputs & ~kMonteCarloOutputs);
        auto part = run_sweep(spec, s.label);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

namespace {

struct Curve {
    std::string label;
    std::string color;
    std::string dash;    // stroke-dasharray, empty for solid
    bool markers = false;
    std::vector<std::pair<double, double>> pts;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

void write_svg(std::ostream& out, const FigurePreset& preset, const std::vector<SweepRow>& rows)
{
    struct Method {
        const char* name;
        std::optional<double> SweepRow::*field;
        const char* dash;
        bool markers;
    };
    const Method methods[] = {
        {"closed", &SweepRow::op_closed, "", false},
        {"MC upper", &SweepRow::op_mc_upper, "", true},
        {"MC exact", &SweepRow::op_mc_exact, "2,3", true},
        {"lower bound", &SweepRow::op_lower, "6,4", false},
        {"upper bound", &SweepRow::op_upper, "6,4", false},
        {"EF lower", &SweepRow::ef_lower, "1,3", false},
        {"asymptotic", &SweepRow::op_asymptotic, "8,3,2,3", false},
        {"OMA", &SweepRow::op_oma, "12,4", false},
    };

    // one curve per (series, user, method), in first-seen order
    std::vector<Curve> curves;
    std::map<std::string, std::size_t> index;
    std::map<std::string, std::size_t> colors;
    for (const SweepRow& r : rows) {
        const std::string key_color = r.series + "/U" + std::to_string(r.user);
        if (!colors.count(key_color)) {
            const std::size_t n = colors.size();
            colors[key_color] = n;
        }
        for (const Method& m : methods) {
            const std::optional<double>& v = r.*(m.field);
            if (!v) {
                continue;
            }
            if (m.field == &SweepRow::op_oma && r.user != 1) {
                continue;  // OMA is user independent
            }
            std::string label = (r.series.empty() ? "" : r.series + " ") + "U" + std::to_string(r.user) + " " + m.name;
            if (m.field == &SweepRow::op_oma) {
                label = (r.series.empty() ? "" : r.series + " ") + m.name;
            }
            auto it = index.find(label);
            if (it == index.end()) {
                Curve c;
                c.label = label;
                c.color = kPalette[colors[key_color] % std::size(kPalette)];
                c.dash = m.dash;
                c.markers = m.markers;
                index[label] = curves.size();
                curves.push_back(c);
                it = index.find(label);
            }
            curves[it->second].pts.emplace_back(r.axis_value, *v);
        }
    }

    double x_min = preset.points.empty() ? 0.0 : preset.points.front();
    double x_max = preset.points.empty() ? 1.0 : preset.points.back();
    if (x_max <= x_min) {
        x_max = x_min + 1.0;
    }
    double y_min = 1.0;
    for (const Curve& c : curves) {
        for (const auto& p : c.pts) {
            if (p.second > 0.0) {
                y_min = std::min(y_min, p.second);
            }
        }
    }
    const int dec_lo = std::max(-20, static_cast<int>(std::floor(std::log10(y_min))));
    const int dec_hi = 0;
    const int decades = std::max(1, dec_hi - dec_lo);

    const double left = 80, top = 50, plot_w = 620, plot_h = 440;
    const double legend_x = left + plot_w + 30;
    const double width = legend_x + 330;
    const double height = std::max(top + plot_h + 70, top + 18.0 * static_cast<double>(curves.size()) + 20);
    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) {
        const double ly = std::log10(std::max(y, std::pow(10.0, dec_lo)));
        return top + (dec_hi - ly) / decades * plot_h;
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(preset.id + ": " + preset.title) << "</text>\n";

    // grid and ticks
    const int ydiv = decades > 12 ? 2 : 1;
    for (int d = dec_lo; d <= dec_hi; ++d) {
        const double y = sy(std::pow(10.0, d));
        out << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
            << num(y) << "\" stroke=\"#dddddd\"/>\n";
        if ((d - dec_lo) % ydiv == 0) {
            out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
                << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
        }
    }
    const int xticks = 8;
    for (int i = 0; i <= xticks; ++i) {
        const double xv = x_min + (x_max - x_min) * i / xticks;
        const double x = sx(xv);
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\""
            << num(top + plot_h) << "\" stroke=\"#eeeeee\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", std::round(xv * 1000.0) / 1000.0);
        out << "<text x=\"" << num(x) << "\" y=\"" << num(top + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
    }
    out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\""
        << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const std::string xlabel = preset.axis == Axis::snr_db ? "SNR (dB)"
                               : preset.axis == Axis::d1   ? "normalized distance d1 (d2 = 1 - d1)"
                                                           : "relative CEE epsilon";
    out << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(top + plot_h + 42)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel) << "</text>\n";
    out << "<text x=\"20\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << num(top + plot_h / 2) << ")\">Outage probability</text>\n";

    // curves; non-positive values break the line
    for (const Curve& c : curves) {
        const std::string dash = c.dash.empty() ? "" : " stroke-dasharray=\"" + c.dash + "\"";
        if (c.markers) {
            for (const auto& p : c.pts) {
                if (p.second > 0.0) {
                    out << "<circle cx=\"" << num(sx(p.first)) << "\" cy=\"" << num(sy(p.second))
                        << "\" r=\"3\" fill=\"none\" stroke=\"" << c.color << "\"/>\n";
                }
            }
            continue;
        }
        std::string path;
        bool pen = false;
        for (const auto& p : c.pts) {
            if (!(p.second > 0.0)) {
                pen = false;
                continue;
            }
            path += (pen ? " L" : (path.empty() ? "M" : " M")) + num(sx(p.first)) + " " + num(sy(p.second));
            pen = true;
        }
        if (!path.empty()) {
            out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\""
                << dash << "/>\n";
        }
    }

    // legend
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const Curve& c = curves[i];
        const double y = top + 18.0 * static_cast<double>(i) + 6;
        if (c.markers) {
            out << "<circle cx=\"" << num(legend_x + 12) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"none\" stroke=\""
                << c.color << "\"/>\n";
        } else {
            const std::string dash = c.dash.empty() ? "" : " stroke-dasharray=\"" + c.dash + "\"";
            out << "<line x1=\"" << num(legend_x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(legend_x + 24)
                << "\" y2=\"" << num(y) << "\" stroke=\"" << c.color << "\" stroke-width=\"1.5\"" << dash << "/>\n";
        }
        out << "<text x=\"" << num(legend_x + 30) << "\" y=\"" << num(y + 4) << "\" font-size=\"11\">"
            << escape(c.label) << "</text>\n";
    }
    out << "</svg>\n";
}

FigureFiles emit_figure(const FigurePreset& preset, const std::filesystem::path& out_dir, std::uint64_t trials,
                        std::uint64_t seed, int lanes)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw ConfigError("out", "cannot create output directory '" + out_dir.string() + "'");
    }
    const std::vector<SweepRow> rows = run_figure(preset, trials, seed, lanes);
    FigureFiles files{out_dir / (preset.id + ".csv"), out_dir / (preset.id + ".svg")};
    {
        std::ofstream csv(files.csv, std::ios::binary);
        write_csv(csv, rows, true);
        if (!csv) {
            throw ConfigError("out", "cannot write '" + files.csv.string() + "'");
        }
    }
    {
        std::ofstream svg(files.svg, std::ios::binary);
        write_svg(svg, preset, rows);
        if (!svg) {
            throw ConfigError("out", "cannot write '" + files.svg.string() + "'");
        }
    }
    return files;
}

} // namespace noma::cli
