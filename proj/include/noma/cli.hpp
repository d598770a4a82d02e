#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "noma/analytic.hpp"

namespace noma::cli {

/// Bad configuration; `field` is a dotted JSON path such as "hop1.m".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct HopConfig {
    int m = 1;
    int nt = 1;
    int nr = 1;
    double d = 0.5;
    double epsilon = 0.005;
};

/// Raw, user-facing scenario parameters; build() derives the statistics.
struct ScenarioConfig {
    int users = 3;
    std::vector<double> alloc{3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0};
    std::vector<double> thresholds{0.9, 1.5, 2.0};
    double path_loss_alpha = 4.0;
    HopConfig hop1;
    HopConfig hop2;

    SystemScenario build() const;
};

enum class Axis { snr_db, d1, epsilon };

std::string axis_name(Axis axis);
Axis parse_axis(const std::string& text);

enum Output : unsigned {
    out_closed = 1u << 0,
    out_quadrature = 1u << 1,
    out_bounds = 1u << 2,
    out_floor = 1u << 3,
    out_asymptotic = 1u << 4,
    out_mc_exact = 1u << 5,
    out_mc_upper = 1u << 6,
    out_oma = 1u << 7,
};
constexpr unsigned kAnalyticOutputs = out_closed | out_quadrature | out_bounds | out_floor | out_asymptotic | out_oma;
constexpr unsigned kMonteCarloOutputs = out_mc_exact | out_mc_upper;

/// Comma-separated output names, e.g. "closed,bounds,mc_upper". "all" selects everything.
unsigned parse_outputs(const std::string& text);
std::string outputs_to_string(unsigned outputs);

struct SweepSpec {
    Axis axis = Axis::snr_db;
    std::vector<double> points;
    ScenarioConfig scenario;
    std::uint64_t trials = 0;  ///< 0 disables Monte Carlo
    std::uint64_t seed = 1;
    int lanes = 1;
    unsigned outputs = kAnalyticOutputs;
    double snr_db = 10.0;      ///< fixed SNR when the axis is not snr_db
    std::vector<int> users;    ///< empty means every user
};

/// Throws ConfigError when points are not strictly increasing or fall outside the axis domain.
void validate_sweep(const SweepSpec& spec);

/// "start:step:stop" (inclusive) or a comma list "0,10,20".
std::vector<double> parse_range(const std::string& text);

/// Parses a configuration document. Unknown keys are errors.
SweepSpec parse_config(const nlohmann::json& doc);
SweepSpec load_config(const std::filesystem::path& path);

struct SweepRow {
    std::string series;
    double axis_value = 0.0;
    int user = 1;
    std::optional<double> op_closed;
    std::optional<double> op_quadrature;
    std::optional<double> op_lower;
    std::optional<double> op_upper;
    std::optional<double> ef_lower;
    std::optional<double> ef_upper;
    std::optional<double> op_asymptotic;
    std::optional<double> op_mc_exact;
    std::optional<double> op_mc_upper;
    std::optional<double> op_oma;
    std::optional<double> ci_halfwidth;  ///< of op_mc_upper
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string warnings;
};

/// The scenario at one axis point.
SystemScenario scenario_at(const SweepSpec& spec, double axis_value);
/// Linear SNR at one axis point.
double snr_at(const SweepSpec& spec, double axis_value);

/// Rows sorted by (axis_value, user).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::string& series = {});

/// CSV with header; a leading `series` column when with_series is set.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_series = false);

struct FigureSeries {
    std::string label;
    ScenarioConfig scenario;
};

struct FigurePreset {
    std::string id;
    std::string title;
    Axis axis = Axis::snr_db;
    std::vector<double> points;
    double snr_db = 10.0;
    unsigned outputs = 0;
    std::vector<FigureSeries> series;
};

const std::vector<std::string>& preset_ids();
/// Throws ConfigError for an unknown id.
FigurePreset figure_preset(const std::string& id);

struct FigureFiles {
    std::filesystem::path csv;
    std::filesystem::path svg;
};

/// Runs every series of the preset and writes <id>.csv and <id>.svg into out_dir.
std::vector<SweepRow> run_figure(const FigurePreset& preset, std::uint64_t trials, std::uint64_t seed, int lanes);
FigureFiles emit_figure(const FigurePreset& preset, const std::filesystem::path& out_dir, std::uint64_t trials,
                        std::uint64_t seed, int lanes);

/// Log-y line plot of the rows; one curve per (series, user, method).
void write_svg(std::ostream& out, const FigurePreset& preset, const std::vector<SweepRow>& rows);

struct ValidationOptions {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    int lanes = 1;
    double closed_perturbation = 0.0;
};

/// Three-way comparison over the preset configurations. Returns 0 when
/// every threshold holds and 2 otherwise.
int run_validation(const ValidationOptions& opts, std::ostream& report);

/// The distinct scenario configurations behind the figure presets.
std::vector<FigureSeries> validation_configs();

} // namespace noma::cli
