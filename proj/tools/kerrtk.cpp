// kerrtk.cpp — command-line front end
//
//   kerrtk classical-bifurcation --config run.cfg --out out/
//   kerrtk quantum-sweep        --config run.cfg --workers 4
//   kerrtk wigner-map           --config run.cfg --eps0 1.2 --cutoff 60
//   kerrtk convergence          --config run.cfg
//   kerrtk verify               [--config run.cfg] [--out dir]
//
// Exit status: 0 on success, 1 when verify reports a failing oracle, 2 on
// configuration errors, 3 on any other error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "kerr/commands.hpp"
#include "kerr/errors.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<int> workers;
    std::optional<long long> seed;
    std::optional<double> eps0;
    std::optional<int> cutoff;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "Configuration file (key = value, or a JSON sidecar)");
    app->add_option("--out", c.out, "Output directory");
    app->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "Seed for the initial-condition ensemble")->check(CLI::NonNegativeNumber);
    app->add_option("--eps0", c.eps0, "Drive amplitude (eps2 = -eps1 = eps0)");
    app->add_option("--cutoff", c.cutoff, "Fock-space cutoff D")->check(CLI::Range(2, 1000));
}

std::string text(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

kerr::RunConfig load(const Common& c, bool config_required)
{
    kerr::KeyValues overrides;
    if (!c.out.empty()) overrides["run.out"] = c.out;
    if (c.workers) overrides["run.workers"] = std::to_string(*c.workers);
    if (c.seed) overrides["run.seed"] = std::to_string(*c.seed);
    if (c.eps0) overrides["protocol.eps0"] = text(*c.eps0);
    if (c.cutoff) overrides["quantum.cutoff"] = std::to_string(*c.cutoff);
    if (c.config.empty()) {
        if (config_required) throw kerr::ConfigInvalid("--config is required for this command");
        kerr::RunConfig rc;
        rc.out_dir = c.out.empty() ? "out" : c.out;
        rc.resolved = overrides;
        return rc;
    }
    return kerr::resolve_config(kerr::load_key_values(c.config), overrides);
}

void report(const kerr::CommandOutput& out)
{
    for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet Kerr oscillator toolkit: classical bifurcations and quantum steady states"};
    app.set_version_flag("--version", std::string(KERRTK_VERSION));
    app.require_subcommand(1);

    Common common;
    bool flip = false;
    auto* bif = app.add_subcommand("classical-bifurcation", "Mean-field stroboscopic bifurcation diagram");
    auto* sweep = app.add_subcommand("quantum-sweep", "Quasi-steady-state observables and gaps over a sweep");
    auto* wig = app.add_subcommand("wigner-map", "Wigner map of the steady state with classical overlap");
    auto* ver = app.add_subcommand("verify", "Run the built-in oracle suite");
    auto* conv = app.add_subcommand("convergence", "Cutoff convergence of Na, variance and entropy");
    for (auto* sub : {bif, sweep, wig, ver, conv}) add_common(sub, common);
    ver->add_flag("--mutate-flip-hamiltonian", flip, "Flip the Hamiltonian sign (the suite must fail)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (bif->parsed()) {
            report(kerr::cmd_classical_bifurcation(load(common, true)).output);
        } else if (sweep->parsed()) {
            const auto run = kerr::cmd_quantum_sweep(load(common, true));
            if (run.resumed > 0) std::cout << "resumed: " << run.resumed << " rows already present\n";
            for (const auto& p : run.points) {
                if (!p.ok()) std::cerr << "warning: eps0=" << p.eps0 << " D=" << p.cutoff << ": " << p.detail << '\n';
            }
            report(run.output);
        } else if (wig->parsed()) {
            const auto run = kerr::cmd_wigner_map(load(common, true));
            std::cout << "overlap " << run.overlap << ", bhattacharyya " << run.bhattacharyya << ", negativity "
                      << run.map.negativity << '\n';
            report(run.output);
        } else if (conv->parsed()) {
            const auto run = kerr::cmd_convergence(load(common, true));
            for (const auto& [name, rep] : run.reports) {
                std::cout << name << ": last relative change " << rep.last_relative_change
                          << (rep.converged ? " (converged)" : " (NOT converged)") << '\n';
            }
            report(run.output);
        } else if (ver->parsed()) {
            const auto run = kerr::cmd_verify(load(common, false), {flip});
            for (const auto& r : run.results) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured=" << r.measured
                          << " tol=" << r.tolerance << "  " << r.detail << '\n';
            }
            report(run.output);
            return run.output.exit_code;
        }
    } catch (const kerr::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
