// commands.hpp — the operations behind each CLI subcommand
//
// Every command writes its data files under config.out_dir, each paired with a
// JSON sidecar (<stem>.json) holding the resolved configuration.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kerr/classical.hpp"
#include "kerr/config.hpp"
#include "kerr/diagnostics.hpp"
#include "kerr/floquet.hpp"
#include "kerr/phase_space.hpp"

namespace kerr {

// One quasi-steady-state evaluation: propagator, spectrum, steady state,
// observables and gaps. Library errors are captured in `status`/`detail`.
struct QuantumPoint {
    double eps0 = 0.0;
    double kerr = 0.0;
    int cutoff = 0;
    std::string status = "ok";        // "ok" or the error kind
    std::string detail;
    std::optional<SteadyObservables> observables;
    std::optional<GapReport> gap;
    bool positivity_warning = false;
    bool ok() const { return status == "ok"; }
};

// with_spectrum = false skips the eigendecomposition and only finds the fixed
// point of U(T); the gap fields stay empty.
QuantumPoint evaluate_quantum_point(const DriveProtocol& protocol, int cutoff, bool with_spectrum = true);

// Steady state of the protocol at the given cutoff (fixed point of U(T)).
SteadyState quasi_steady_state(const DriveProtocol& protocol, int cutoff);

struct CommandOutput {
    std::vector<std::filesystem::path> files;
    int exit_code = 0;
};

// Header and row formatting of the quantum sweep CSV.
std::string quantum_csv_header();
std::string quantum_csv_row(const QuantumPoint& point);

struct BifurcationRun {
    classical::BifurcationDiagram diagram;
    CommandOutput output;
};
BifurcationRun cmd_classical_bifurcation(const RunConfig& config);

struct QuantumSweepRun {
    std::vector<QuantumPoint> points;  // freshly computed rows, in sweep order
    std::size_t resumed = 0;           // rows skipped because the CSV already had them
    CommandOutput output;
};
// Rejects kappa = 0 with ConfigInvalid. Appends to an existing CSV with the
// same header, skipping completed (eps0, U, D) rows.
QuantumSweepRun cmd_quantum_sweep(const RunConfig& config);

struct WignerRun {
    double eps0 = 0.0;
    int cutoff = 0;
    SteadyObservables observables;
    WignerMap map;
    std::vector<cplx> orbit_samples;              // union over initial conditions
    std::vector<classical::Classification> orbit_classes;
    double overlap = 0.0;
    double overlap_radius = 0.0;
    double bhattacharyya = 0.0;
    double bandwidth = 0.0;
    CommandOutput output;
};
// Uses config.eps0 (or the first sweep value) and the first cutoff.
WignerRun cmd_wigner_map(const RunConfig& config);

struct ConvergenceRun {
    std::vector<std::pair<std::string, ConvergenceReport>> reports;  // Na, variance, Sv
    CommandOutput output;
};
ConvergenceRun cmd_convergence(const RunConfig& config);

struct OracleResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    bool flip_hamiltonian_sign = false;  // mutation check: the spectrum oracle must fail
};

struct VerifyRun {
    std::vector<OracleResult> results;
    bool all_passed = false;
    CommandOutput output;
};
// Runs the built-in oracle suite at small cutoffs. Failures are report
// content; exit_code is 1 when any oracle fails.
VerifyRun cmd_verify(const RunConfig& config, const VerifyOptions& options = {});
std::vector<OracleResult> run_oracles(const VerifyOptions& options = {});

} // namespace kerr
