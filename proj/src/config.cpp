#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "noma/cli.hpp"

namespace noma::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed)
{
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || item.key() == a;
        }
        if (!ok) {
            throw ConfigError(join(path, item.key()), "unknown key");
        }
    }
}

double get_real(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(path, "expected a finite number");
    }
    return x;
}

std::int64_t get_integer(const json& v, const std::string& path)
{
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) {
            return static_cast<std::int64_t>(x);
        }
        std::ostringstream msg;
        msg << "expected an integer, got " << v.dump();
        throw ConfigError(path, msg.str());
    }
    throw ConfigError(path, "expected an integer");
}

int get_positive_int(const json& v, const std::string& path)
{
    const std::int64_t n = get_integer(v, path);
    if (n < 1 || n > std::numeric_limits<int>::max()) {
        throw ConfigError(path, "must be a positive integer, got " + v.dump());
    }
    return static_cast<int>(n);
}

std::uint64_t get_u64(const json& v, const std::string& path)
{
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    const std::int64_t n = get_integer(v, path);
    if (n < 0) {
        throw ConfigError(path, "must be non-negative");
    }
    return static_cast<std::uint64_t>(n);
}

std::vector<double> get_real_array(const json& v, const std::string& path)
{
    if (!v.is_array()) {
        throw ConfigError(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_real(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

HopConfig parse_hop(const json& v, const std::string& path)
{
    if (!v.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    reject_unknown(v, path, {"m", "nt", "nr", "d", "epsilon"});
    HopConfig h;
    if (v.contains("m")) {
        h.m = get_positive_int(v["m"], path + ".m");
    }
    if (v.contains("nt")) {
        h.nt = get_positive_int(v["nt"], path + ".nt");
    }
    if (v.contains("nr")) {
        h.nr = get_positive_int(v["nr"], path + ".nr");
    }
    if (v.contains("d")) {
        h.d = get_real(v["d"], path + ".d");
    }
    if (v.contains("epsilon")) {
        h.epsilon = get_real(v["epsilon"], path + ".epsilon");
    }
    return h;
}

void check_hop(const HopConfig& h, const std::string& path)
{
    if (h.m < 1) {
        throw ConfigError(path + ".m", "must be a positive integer");
    }
    if (h.nt < 1) {
        throw ConfigError(path + ".nt", "must be a positive integer");
    }
    if (h.nr < 1) {
        throw ConfigError(path + ".nr", "must be a positive integer");
    }
    if (!(h.d > 0.0) || !std::isfinite(h.d)) {
        throw ConfigError(path + ".d", "must be positive");
    }
    if (!(h.epsilon >= 0.0 && h.epsilon < 1.0)) {
        throw ConfigError(path + ".epsilon", "must lie in [0, 1)");
    }
}

void check_scenario(const ScenarioConfig& s)
{
    if (s.users < 1) {
        throw ConfigError("users", "must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(s.users);
    if (s.alloc.size() != n) {
        throw ConfigError("alloc", "expected " + std::to_string(n) + " entries, got " +
                                       std::to_string(s.alloc.size()));
    }
    if (s.thresholds.size() != n) {
        throw ConfigError("thresholds", "expected " + std::to_string(n) + " entries, got " +
                                            std::to_string(s.thresholds.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string at = "[" + std::to_string(i) + "]";
        if (!(s.alloc[i] > 0.0)) {
            throw ConfigError("alloc" + at, "must be positive");
        }
        if (i > 0 && s.alloc[i] > s.alloc[i - 1]) {
            throw ConfigError("alloc" + at, "allocation must be non-increasing");
        }
        if (!(s.thresholds[i] > 0.0)) {
            throw ConfigError("thresholds" + at, "must be positive");
        }
        total += s.alloc[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "must sum to 1, got " << total;
        throw ConfigError("alloc", msg.str());
    }
    if (!(s.path_loss_alpha > 0.0)) {
        throw ConfigError("path_loss_alpha", "must be positive");
    }
    check_hop(s.hop1, "hop1");
    check_hop(s.hop2, "hop2");
}

} // namespace

SystemScenario ScenarioConfig::build() const
{
    check_scenario(*this);
    SystemScenario s;
    s.users = users;
    s.hop1 = make_hop_stats(hop1.d, path_loss_alpha, hop1.epsilon, hop1.m, hop1.nt, hop1.nr);
    s.hop2 = make_hop_stats(hop2.d, path_loss_alpha, hop2.epsilon, hop2.m, hop2.nt, hop2.nr);
    s.alloc = alloc;
    s.thresholds = thresholds;
    validate_scenario(s);
    return s;
}

std::string axis_name(Axis axis)
{
    switch (axis) {
    case Axis::snr_db:
        return "snr_db";
    case Axis::d1:
        return "d1";
    case Axis::epsilon:
        return "epsilon";
    }
    return "snr_db";
}

Axis parse_axis(const std::string& text)
{
    if (text == "snr_db") {
        return Axis::snr_db;
    }
    if (text == "d1") {
        return Axis::d1;
    }
    if (text == "epsilon") {
        return Axis::epsilon;
    }
    throw ConfigError("sweep.axis", "expected one of snr_db, d1, epsilon; got '" + text + "'");
}

namespace {
const std::vector<std::pair<std::string, unsigned>>& output_names()
{
    static const std::vector<std::pair<std::string, unsigned>> names = {
        {"closed", out_closed},         {"quadrature", out_quadrature}, {"bounds", out_bounds},
        {"floor", out_floor},           {"asymptotic", out_asymptotic}, {"mc_exact", out_mc_exact},
        {"mc_upper", out_mc_upper},     {"oma", out_oma},
    };
    return names;
}

unsigned output_bit(const std::string& name, const std::string& path)
{
    if (name == "all") {
        return kAnalyticOutputs | kMonteCarloOutputs;
    }
    for (const auto& [n, bit] : output_names()) {
        if (n == name) {
            return bit;
        }
    }
    throw ConfigError(path, "unknown output '" + name + "'");
}
} // namespace

unsigned parse_outputs(const std::string& text)
{
    unsigned bits = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            bits |= output_bit(item, "outputs");
        }
    }
    if (bits == 0) {
        throw ConfigError("outputs", "no outputs selected");
    }
    return bits;
}

std::string outputs_to_string(unsigned outputs)
{
    std::string s;
    for (const auto& [n, bit] : output_names()) {
        if (outputs & bit) {
            s += s.empty() ? n : "," + n;
        }
    }
    return s;
}

std::vector<double> parse_range(const std::string& text)
{
    auto number = [&](const std::string& part) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size() || !std::isfinite(x)) {
            throw ConfigError("", "cannot parse '" + part + "' in '" + text + "'");
        }
        return x;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) {
            parts.push_back(number(item));
        }
        if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
            throw ConfigError("", "range must be start:step:stop with step > 0 and stop >= start, got '" + text + "'");
        }
        const auto count = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
        if (count > 100000) {
            throw ConfigError("", "range '" + text + "' has too many points");
        }
        for (long i = 0; i <= count; ++i) {
            out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(number(item));
    }
    if (out.empty()) {
        throw ConfigError("", "empty list");
    }
    return out;
}

void validate_sweep(const SweepSpec& spec)
{
    if (spec.points.empty()) {
        throw ConfigError("sweep.points", "at least one point is required");
    }
    for (std::size_t i = 1; i < spec.points.size(); ++i) {
        if (!(spec.points[i] > spec.points[i - 1])) {
            throw ConfigError("sweep.points", "points must be strictly increasing");
        }
    }
    for (double p : spec.points) {
        if (spec.axis == Axis::d1 && !(p > 0.0 && p < 1.0)) {
            throw ConfigError("sweep.points", "d1 points must lie in (0, 1)");
        }
        if (spec.axis == Axis::epsilon && !(p >= 0.0 && p < 1.0)) {
            throw ConfigError("sweep.points", "epsilon points must lie in [0, 1)");
        }
        if (!std::isfinite(p)) {
            throw ConfigError("sweep.points", "points must be finite");
        }
    }
    if (spec.lanes < 1) {
        throw ConfigError("sweep.lanes", "must be a positive integer");
    }
    for (int u : spec.users) {
        if (u < 1 || u > spec.scenario.users) {
            throw ConfigError("sweep.users", "user " + std::to_string(u) + " outside 1.." +
                                                 std::to_string(spec.scenario.users));
        }
    }
    spec.scenario.build();
}

SweepSpec parse_config(const json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("", "configuration must be a JSON object");
    }
    reject_unknown(doc, "", {"users", "alloc", "thresholds", "hop1", "hop2", "path_loss_alpha", "sweep"});
    SweepSpec spec;
    ScenarioConfig& s = spec.scenario;
    if (doc.contains("alloc")) {
        s.alloc = get_real_array(doc["alloc"], "alloc");
        s.users = static_cast<int>(s.alloc.size());
    }
    if (doc.contains("thresholds")) {
        s.thresholds = get_real_array(doc["thresholds"], "thresholds");
    }
    if (doc.contains("users")) {
        s.users = get_positive_int(doc["users"], "users");
        if (!doc.contains("alloc") && s.users != 3) {
            throw ConfigError("alloc", "required when users != 3");
        }
    }
    if (doc.contains("path_loss_alpha")) {
        s.path_loss_alpha = get_real(doc["path_loss_alpha"], "path_loss_alpha");
    }
    if (doc.contains("hop1")) {
        s.hop1 = parse_hop(doc["hop1"], "hop1");
    }
    if (doc.contains("hop2")) {
        s.hop2 = parse_hop(doc["hop2"], "hop2");
    }
    check_scenario(s);

    spec.points = parse_range("0:5:40");
    if (!doc.contains("sweep")) {
        validate_sweep(spec);
        return spec;
    }
    {
        const json& w = doc["sweep"];
        if (!w.is_object()) {
            throw ConfigError("sweep", "expected an object");
        }
        reject_unknown(w, "sweep", {"axis", "points", "snr_db", "trials", "seed", "lanes", "outputs", "users"});
        if (w.contains("axis")) {
            if (!w["axis"].is_string()) {
                throw ConfigError("sweep.axis", "expected a string");
            }
            spec.axis = parse_axis(w["axis"].get<std::string>());
            if (spec.axis == Axis::d1) {
                spec.points = parse_range("0.05:0.05:0.95");
            } else if (spec.axis == Axis::epsilon) {
                spec.points = {0.0, 0.005, 0.05};
            }
        }
        if (w.contains("points")) {
            if (w["points"].is_string()) {
                try {
                    spec.points = parse_range(w["points"].get<std::string>());
                } catch (const ConfigError& e) {
                    throw ConfigError("sweep.points", e.what());
                }
            } else {
                spec.points = get_real_array(w["points"], "sweep.points");
            }
        }
        if (w.contains("snr_db")) {
            spec.snr_db = get_real(w["snr_db"], "sweep.snr_db");
        }
        if (w.contains("trials")) {
            spec.trials = get_u64(w["trials"], "sweep.trials");
        }
        if (w.contains("seed")) {
            spec.seed = get_u64(w["seed"], "sweep.seed");
        }
        if (w.contains("lanes")) {
            spec.lanes = get_positive_int(w["lanes"], "sweep.lanes");
        }
        if (w.contains("outputs")) {
            const json& o = w["outputs"];
            if (o.is_string()) {
                spec.outputs = parse_outputs(o.get<std::string>());
            } else if (o.is_array()) {
                spec.outputs = 0;
                for (std::size_t i = 0; i < o.size(); ++i) {
                    const std::string path = "sweep.outputs[" + std::to_string(i) + "]";
                    if (!o[i].is_string()) {
                        throw ConfigError(path, "expected a string");
                    }
                    spec.outputs |= output_bit(o[i].get<std::string>(), path);
                }
            } else {
                throw ConfigError("sweep.outputs", "expected a string or an array of strings");
            }
        }
        if (w.contains("users")) {
            const json& u = w["users"];
            if (u.is_string() && u.get<std::string>() == "all") {
                spec.users.clear();
            } else if (u.is_array()) {
                for (std::size_t i = 0; i < u.size(); ++i) {
                    spec.users.push_back(get_positive_int(u[i], "sweep.users[" + std::to_string(i) + "]"));
                }
            } else {
                throw ConfigError("sweep.users", "expected \"all\" or an array of user indices");
            }
        }
    }
    if (spec.trials > 0 && !doc["sweep"].contains("outputs")) {
        spec.outputs |= kMonteCarloOutputs;
    }
    validate_sweep(spec);
    return spec;
}

SweepSpec load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "invalid JSON in '" + path.string() + "': " + e.what());
    }
    return parse_config(doc);
}

} // namespace noma::cli
