// config.cpp — key/value parsing and validation

#include "kerr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "kerr/errors.hpp"

namespace kerr {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v)
{
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

std::vector<std::string> split_list(const std::string& v)
{
    std::string body = trim(v);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(unquote(item));
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigInvalid("field '" + key + "': expected a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigInvalid("field '" + key + "': expected an integer, got '" + v + "'");
    }
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "protocol.detuning", "protocol.kerr", "protocol.period", "protocol.kappa",
        "protocol.eps0", "protocol.eps1", "protocol.eps2",
        "quantum.cutoff", "quantum.cutoffs", "quantum.dt",
        "sweep.axis", "sweep.values", "sweep.start", "sweep.stop", "sweep.step",
        "classical.transient_periods", "classical.recorded_periods", "classical.steps_per_half",
        "classical.initial_conditions", "classical.section_phase", "classical.csv_samples_per_orbit",
        "grid.points", "grid.overlap_radius_cells", "grid.bandwidth_cells",
        "run.seed", "run.workers", "run.out"};
    return keys;
}

std::string format_number(double x)
{
    std::ostringstream os;
    os.precision(15);
    os << x;
    return os.str();
}

} // namespace

KeyValues parse_key_values(const std::string& text, const std::string& source)
{
    KeyValues out;
    std::stringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigInvalid(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigInvalid(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigInvalid(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigInvalid(where + ": missing key");
        if (value.empty()) throw ConfigInvalid(where + ": missing value for '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!known_keys().contains(full)) throw ConfigInvalid(where + ": unknown field '" + full + "'");
        if (out.contains(full)) throw ConfigInvalid(where + ": duplicate field '" + full + "'");
        out[full] = unquote(value);
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        // Sidecar written by a previous run: replay its resolved configuration.
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigInvalid(path.string() + ": " + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object()) {
            throw ConfigInvalid(path.string() + ": sidecar has no 'config' object");
        }
        KeyValues out;
        for (const auto& [k, v] : j["config"].items()) {
            if (!known_keys().contains(k)) throw ConfigInvalid(path.string() + ": unknown field '" + k + "'");
            out[k] = v.get<std::string>();
        }
        return out;
    }
    return parse_key_values(buf.str(), path.string());
}

DriveProtocol RunConfig::protocol() const
{
    DriveProtocol p;
    p.detuning = detuning;
    p.kerr = kerr;
    p.period = period;
    p.kappa = kappa;
    p.eps1 = eps1;
    p.eps2 = eps2;
    return p;
}

DriveProtocol RunConfig::protocol_at(double value) const
{
    DriveProtocol p = protocol();
    if (sweep_axis == "eps0") {
        p.eps1 = cplx(-value, 0.0);
        p.eps2 = cplx(value, 0.0);
    } else {
        p.kerr = value;
    }
    return p;
}

RunConfig resolve_config(const KeyValues& file_values, const KeyValues& overrides)
{
    KeyValues kv = file_values;
    for (const auto& [k, v] : overrides) {
        if (!known_keys().contains(k)) throw ConfigInvalid("override: unknown field '" + k + "'");
        kv[k] = v;
    }
    // eps0 and explicit eps1/eps2 are alternatives; an eps0 override wins.
    if (overrides.contains("protocol.eps0")) {
        kv.erase("protocol.eps1");
        kv.erase("protocol.eps2");
    }

    RunConfig c;
    auto require = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ConfigInvalid("missing required field '" + key + "'");
        return to_double(key, it->second);
    };
    c.detuning = require("protocol.detuning");
    c.kerr = require("protocol.kerr");
    c.period = require("protocol.period");
    c.kappa = require("protocol.kappa");
    if (!(c.period > 0.0)) throw ConfigInvalid("field 'protocol.period': must be > 0");
    if (!(c.kappa >= 0.0)) throw ConfigInvalid("field 'protocol.kappa': must be >= 0");

    const bool has_eps0 = kv.contains("protocol.eps0");
    const bool has_pair = kv.contains("protocol.eps1") || kv.contains("protocol.eps2");
    if (has_eps0 && has_pair) {
        throw ConfigInvalid("fields 'protocol.eps0' and 'protocol.eps1/eps2' are mutually exclusive");
    }
    if (has_eps0) {
        c.eps0 = require("protocol.eps0");
        c.eps1 = cplx(-*c.eps0, 0.0);
        c.eps2 = cplx(*c.eps0, 0.0);
    } else if (kv.contains("protocol.eps1") && kv.contains("protocol.eps2")) {
        c.eps1 = cplx(require("protocol.eps1"), 0.0);
        c.eps2 = cplx(require("protocol.eps2"), 0.0);
    } else {
        throw ConfigInvalid("missing drive: give 'protocol.eps0' or both 'protocol.eps1' and 'protocol.eps2'");
    }

    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            kv[key] = fallback;
            return fallback;
        }
        return it->second;
    };

    if (kv.contains("quantum.cutoffs") && kv.contains("quantum.cutoff") && !overrides.contains("quantum.cutoff")) {
        throw ConfigInvalid("fields 'quantum.cutoff' and 'quantum.cutoffs' are mutually exclusive");
    }
    if (overrides.contains("quantum.cutoff")) kv.erase("quantum.cutoffs");
    c.cutoffs.clear();
    if (kv.contains("quantum.cutoffs")) {
        for (const auto& s : split_list(kv["quantum.cutoffs"])) c.cutoffs.push_back(static_cast<int>(to_int("quantum.cutoffs", s)));
    } else {
        c.cutoffs.push_back(static_cast<int>(to_int("quantum.cutoff", get("quantum.cutoff", "40"))));
    }
    if (c.cutoffs.empty()) throw ConfigInvalid("field 'quantum.cutoffs': empty list");
    for (int d : c.cutoffs) {
        if (d < 2) throw ConfigInvalid("field 'quantum.cutoffs': cutoff must be >= 2");
    }
    c.dt = to_double("quantum.dt", get("quantum.dt", "0"));
    if (c.dt < 0.0) throw ConfigInvalid("field 'quantum.dt': must be >= 0");

    c.sweep_axis = get("sweep.axis", "eps0");
    if (c.sweep_axis != "eps0" && c.sweep_axis != "kerr") {
        throw ConfigInvalid("field 'sweep.axis': expected 'eps0' or 'kerr', got '" + c.sweep_axis + "'");
    }
    if (kv.contains("sweep.values")) {
        for (const auto& s : split_list(kv["sweep.values"])) c.sweep_values.push_back(to_double("sweep.values", s));
    } else if (kv.contains("sweep.start") || kv.contains("sweep.stop") || kv.contains("sweep.step")) {
        const double start = require("sweep.start");
        const double stop = require("sweep.stop");
        const double step = require("sweep.step");
        if (!(step > 0.0)) throw ConfigInvalid("field 'sweep.step': must be > 0");
        if (stop < start) throw ConfigInvalid("field 'sweep.stop': range [start, stop] is empty");
        const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= n; ++i) {
            c.sweep_values.push_back(std::round((start + i * step) * 1e12) / 1e12);
        }
    } else if (c.sweep_axis == "eps0" && c.eps0) {
        c.sweep_values.push_back(*c.eps0);
    } else if (c.sweep_axis == "kerr") {
        c.sweep_values.push_back(c.kerr);
    }
    if (c.sweep_values.empty()) throw ConfigInvalid("field 'sweep.values': sweep range is empty");
    for (std::size_t i = 1; i < c.sweep_values.size(); ++i) {
        if (!(c.sweep_values[i] > c.sweep_values[i - 1])) {
            throw ConfigInvalid("field 'sweep.values': values must be strictly increasing");
        }
    }
    if (c.sweep_axis == "kerr") {
        for (double u : c.sweep_values) {
            if (!(u > 0.0)) throw ConfigInvalid("field 'sweep.values': U sweep values must be > 0");
        }
        if (!c.eps0) throw ConfigInvalid("U sweeps need the 'protocol.eps0' shorthand");
    }

    c.orbit.transient_periods = static_cast<int>(to_int("classical.transient_periods", get("classical.transient_periods", "500")));
    c.orbit.recorded_periods = static_cast<int>(to_int("classical.recorded_periods", get("classical.recorded_periods", "2000")));
    c.orbit.steps_per_half = static_cast<int>(to_int("classical.steps_per_half", get("classical.steps_per_half", "100")));
    c.orbit.section_phase = to_double("classical.section_phase", get("classical.section_phase", "0"));
    c.initial_conditions = static_cast<int>(to_int("classical.initial_conditions", get("classical.initial_conditions", "8")));
    c.csv_samples_per_orbit = static_cast<int>(to_int("classical.csv_samples_per_orbit", get("classical.csv_samples_per_orbit", "200")));
    if (c.orbit.transient_periods < 0) throw ConfigInvalid("field 'classical.transient_periods': must be >= 0");
    if (c.orbit.recorded_periods < 1) throw ConfigInvalid("field 'classical.recorded_periods': must be >= 1");
    if (c.orbit.steps_per_half < 50) throw ConfigInvalid("field 'classical.steps_per_half': must be >= 50");
    if (!(c.orbit.section_phase >= 0.0 && c.orbit.section_phase < 1.0)) {
        throw ConfigInvalid("field 'classical.section_phase': must lie in [0, 1)");
    }
    if (c.initial_conditions < 1) throw ConfigInvalid("field 'classical.initial_conditions': must be >= 1");
    if (c.csv_samples_per_orbit < 1) throw ConfigInvalid("field 'classical.csv_samples_per_orbit': must be >= 1");

    c.grid_points = static_cast<int>(to_int("grid.points", get("grid.points", "201")));
    c.overlap_radius_cells = to_double("grid.overlap_radius_cells", get("grid.overlap_radius_cells", "3"));
    c.bandwidth_cells = to_double("grid.bandwidth_cells", get("grid.bandwidth_cells", "2"));
    if (c.grid_points < 16) throw ConfigInvalid("field 'grid.points': must be >= 16");
    if (!(c.overlap_radius_cells > 0.0)) throw ConfigInvalid("field 'grid.overlap_radius_cells': must be > 0");
    if (!(c.bandwidth_cells > 0.0)) throw ConfigInvalid("field 'grid.bandwidth_cells': must be > 0");

    const long long seed = to_int("run.seed", get("run.seed", "0"));
    if (seed < 0) throw ConfigInvalid("field 'run.seed': must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.workers = static_cast<int>(to_int("run.workers", get("run.workers", "1")));
    if (c.workers < 1) throw ConfigInvalid("field 'run.workers': must be >= 1");
    c.out_dir = get("run.out", "out");

    // Normalize numbers so the sidecar replays exactly.
    for (const char* key : {"protocol.detuning", "protocol.kerr", "protocol.period", "protocol.kappa"}) {
        kv[key] = format_number(to_double(key, kv[key]));
    }
    c.resolved = std::move(kv);
    return c;
}

} // namespace kerr
