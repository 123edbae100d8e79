// config.hpp — run configuration for the command-line front end
//
// File format: `key = value` lines, optional `[section]` headers (keys become
// `section.key`), `#` comments, double-quoted strings and `[a, b, ...]` lists.
// A JSON sidecar written by a previous run is accepted as well.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerr/classical.hpp"
#include "kerr/fock.hpp"

namespace kerr {

using KeyValues = std::map<std::string, std::string>;

// Throws ConfigInvalid naming the offending line.
KeyValues parse_key_values(const std::string& text, const std::string& source = "<config>");
KeyValues load_key_values(const std::filesystem::path& path);

struct RunConfig {
    // Physical parameters; all required.
    double detuning = 0.0;
    double kerr = 0.0;
    double period = 0.0;
    double kappa = 0.0;
    cplx eps1{};
    cplx eps2{};
    std::optional<double> eps0;   // set when the eps2 = -eps1 = eps0 shorthand is used

    std::vector<int> cutoffs{40};
    std::string sweep_axis = "eps0";  // or "kerr"
    std::vector<double> sweep_values;

    classical::OrbitSettings orbit;
    int initial_conditions = 8;
    int csv_samples_per_orbit = 200;

    int grid_points = 201;
    double overlap_radius_cells = 3.0;
    double bandwidth_cells = 2.0;

    double dt = 0.0;              // 0 selects T/200
    std::uint64_t seed = 0;
    int workers = 1;
    std::filesystem::path out_dir = "out";

    KeyValues resolved;           // every key, including defaults, as written to sidecars

    DriveProtocol protocol() const;
    DriveProtocol protocol_at(double sweep_value) const;  // applies the sweep axis
};

// Merges overrides over the file values, fills numerical defaults and
// validates. Throws ConfigInvalid.
RunConfig resolve_config(const KeyValues& file_values, const KeyValues& overrides);

} // namespace kerr
