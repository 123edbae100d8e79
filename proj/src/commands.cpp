// commands.cpp — sweeps, output files and JSON sidecars

#include "kerr/commands.hpp"

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "kerr/errors.hpp"

namespace kerr {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string num(double x)
{
    if (std::isnan(x)) return "nan";
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

std::string tag(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json sidecar_base(const RunConfig& config, const std::string& command, const fs::path& data_file)
{
    json j;
    j["tool"] = "kerrtk";
    j["version"] = KERRTK_VERSION;
    j["timestamp"] = timestamp();
    j["command"] = command;
    j["data_file"] = data_file.filename().string();
    j["config"] = json::object();
    for (const auto& [k, v] : config.resolved) j["config"][k] = v;
    return j;
}

fs::path write_sidecar(const fs::path& data_file, const json& j)
{
    fs::path side = data_file;
    side.replace_extension(".json");
    std::ofstream out(side);
    if (!out) throw InvalidArgument("cannot write " + side.string());
    out << j.dump(2) << '\n';
    return side;
}

json protocol_json(const DriveProtocol& p)
{
    return json{{"detuning", p.detuning},   {"kerr", p.kerr},
                {"eps1", {p.eps1.real(), p.eps1.imag()}},
                {"eps2", {p.eps2.real(), p.eps2.imag()}},
                {"period", p.period},       {"kappa", p.kappa}};
}

double row_eps0(const DriveProtocol& p) { return std::abs(p.eps2); }

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InvalidArgument("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Runs jobs on a small pool and hands results to `sink` strictly in job order.
template <typename Result, typename Job, typename Sink>
void ordered_pool(std::size_t count, int workers, Job job, Sink sink)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) sink(i, job(i));
        return;
    }
    std::vector<std::optional<Result>> slots(count);
    std::mutex mu;
    std::condition_variable cv;
    std::size_t next = 0;
    auto work = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next >= count) return;
                i = next++;
            }
            Result r = job(i);
            {
                std::lock_guard lock(mu);
                slots[i] = std::move(r);
            }
            cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(count));
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (std::size_t i = 0; i < count; ++i) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[i].has_value(); });
        Result r = std::move(*slots[i]);
        slots[i].reset();
        lock.unlock();
        sink(i, std::move(r));
    }
    for (auto& t : pool) t.join();
}

} // namespace

SteadyState quasi_steady_state(const DriveProtocol& protocol, int cutoff)
{
    const FockSpace space(cutoff);
    return steady_state_direct(floquet_propagator(protocol, space));
}

QuantumPoint evaluate_quantum_point(const DriveProtocol& protocol, int cutoff, bool with_spectrum)
{
    QuantumPoint pt;
    pt.eps0 = row_eps0(protocol);
    pt.kerr = protocol.kerr;
    pt.cutoff = cutoff;
    try {
        const FockSpace space(cutoff);
        const Superoperator u = floquet_propagator(protocol, space);
        std::optional<SteadyState> ss;
        if (with_spectrum) {
            const FloquetSpectrum spec = effective_spectrum(u, protocol.period);
            pt.gap = gaps(spec);
            ss = steady_state(spec);
        } else {
            ss = steady_state_direct(u);
        }
        pt.positivity_warning = ss->positivity_warning;
        pt.observables = steady_observables(ss->rho);
    } catch (const Error& e) {
        pt.status = e.kind();
        pt.detail = e.what();
    } catch (const std::exception& e) {
        pt.status = "InternalError";
        pt.detail = e.what();
    }
    return pt;
}

std::string quantum_csv_header()
{
    return "eps0,U,D,Na,variance,fano,Sv,S0v,ratio,gapP,gapT,period_doubled";
}

std::string quantum_csv_row(const QuantumPoint& p)
{
    const double nan = std::nan("");
    const auto& o = p.observables;
    const auto& g = p.gap;
    std::ostringstream os;
    os << num(p.eps0) << ',' << num(p.kerr) << ',' << p.cutoff << ','
       << num(o ? o->mean_photons : nan) << ',' << num(o ? o->variance : nan) << ','
       << num(o ? o->fano : nan) << ',' << num(o ? o->entropy : nan) << ','
       << num(o ? o->thermal_entropy : nan) << ',' << num(o ? o->entropy_ratio : nan) << ','
       << num(g && g->gap_p ? *g->gap_p : nan) << ',' << num(g ? g->gap_t : nan) << ','
       << (g ? (g->period_doubled ? "true" : "false") : "nan");
    return os.str();
}

BifurcationRun cmd_classical_bifurcation(const RunConfig& config)
{
    if (config.sweep_axis != "eps0") throw ConfigInvalid("field 'sweep.axis': bifurcation sweeps run over eps0");
    if (!(config.kerr > 0.0)) throw ConfigInvalid("field 'protocol.kerr': must be > 0 for the initial-condition disk");
    ensure_dir(config.out_dir);
    BifurcationRun run;
    run.diagram = classical::bifurcation_sweep(config.protocol(), config.sweep_values, config.initial_conditions,
                                               config.seed, config.orbit, config.workers);

    const fs::path csv = config.out_dir / "bifurcation.csv";
    std::ofstream out(csv);
    if (!out) throw InvalidArgument("cannot write " + csv.string());
    out << "eps0,re_alpha,classification,lyapunov\n";
    json columns = json::array();
    const auto& d = run.diagram;
    for (std::size_t i = 0; i < d.drive_values.size(); ++i) {
        json orbits = json::array();
        for (const auto& o : d.orbits[i]) {
            const std::string cls = o.classification.name();
            const std::string lyap = o.lyapunov ? num(*o.lyapunov) : "nan";
            const std::size_t n = o.re_samples.size();
            const std::size_t keep = std::min<std::size_t>(n, static_cast<std::size_t>(config.csv_samples_per_orbit));
            for (std::size_t k = n - keep; k < n; ++k) {
                out << num(d.drive_values[i]) << ',' << num(o.re_samples[k]) << ',' << cls << ',' << lyap << '\n';
            }
            orbits.push_back({{"initial", {o.initial.real(), o.initial.imag()}},
                              {"classification", cls},
                              {"lyapunov", o.lyapunov ? json(*o.lyapunov) : json(nullptr)}});
        }
        columns.push_back({{"eps0", d.drive_values[i]},
                           {"classification", d.column_classification(i).name()},
                           {"orbits", orbits}});
    }
    out.close();
    json side = sidecar_base(config, "classical-bifurcation", csv);
    side["columns"] = columns;
    run.output.files = {csv, write_sidecar(csv, side)};
    return run;
}

QuantumSweepRun cmd_quantum_sweep(const RunConfig& config)
{
    if (!(config.kappa > 0.0)) {
        throw ConfigInvalid("field 'protocol.kappa': the dissipative Floquet method requires kappa > 0");
    }
    ensure_dir(config.out_dir);
    const fs::path csv = config.out_dir / "quantum_sweep.csv";

    struct Job {
        DriveProtocol protocol;
        int cutoff;
    };
    std::vector<Job> jobs;
    for (double v : config.sweep_values) {
        for (int d : config.cutoffs) jobs.push_back({config.protocol_at(v), d});
    }

    // Resume: completed rows are keyed by their first three columns.
    std::set<std::tuple<std::string, std::string, int>> done;
    bool append = false;
    if (fs::exists(csv)) {
        std::ifstream in(csv);
        std::string line;
        if (std::getline(in, line) && line == quantum_csv_header()) {
            append = true;
            while (std::getline(in, line)) {
                std::stringstream ss(line);
                std::vector<std::string> fields;
                std::string f;
                while (std::getline(ss, f, ',')) fields.push_back(f);
                if (fields.size() != 12) continue;
                try {
                    done.emplace(fields[0], fields[1], std::stoi(fields[2]));
                } catch (const std::exception&) {
                }
            }
        }
    }

    QuantumSweepRun run;
    std::vector<Job> todo;
    for (const auto& j : jobs) {
        if (done.contains({num(row_eps0(j.protocol)), num(j.protocol.kerr), j.cutoff})) {
            ++run.resumed;
        } else {
            todo.push_back(j);
        }
    }

    std::ofstream out(csv, append ? std::ios::app : std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + csv.string());
    if (!append) out << quantum_csv_header() << '\n' << std::flush;

    json flagged = json::array();
    ordered_pool<QuantumPoint>(
        todo.size(), config.workers,
        [&](std::size_t i) { return evaluate_quantum_point(todo[i].protocol, todo[i].cutoff, true); },
        [&](std::size_t, QuantumPoint pt) {
            out << quantum_csv_row(pt) << '\n' << std::flush;
            if (!pt.ok() || pt.positivity_warning) {
                flagged.push_back({{"eps0", pt.eps0}, {"U", pt.kerr}, {"D", pt.cutoff},
                                   {"status", pt.status}, {"detail", pt.detail},
                                   {"positivity_warning", pt.positivity_warning}});
            }
            run.points.push_back(std::move(pt));
        });
    out.close();

    json side = sidecar_base(config, "quantum-sweep", csv);
    side["flagged_rows"] = flagged;
    side["resumed_rows"] = run.resumed;
    run.output.files = {csv, write_sidecar(csv, side)};
    return run;
}

WignerRun cmd_wigner_map(const RunConfig& config)
{
    if (!(config.kappa > 0.0)) {
        throw ConfigInvalid("field 'protocol.kappa': the dissipative Floquet method requires kappa > 0");
    }
    if (!(config.kerr > 0.0)) throw ConfigInvalid("field 'protocol.kerr': must be > 0");
    ensure_dir(config.out_dir);
    WignerRun run;
    run.eps0 = config.eps0 ? *config.eps0 : config.sweep_values.front();
    run.cutoff = config.cutoffs.front();
    const DriveProtocol protocol = DriveProtocol::alternating(config.detuning, config.kerr, run.eps0,
                                                              config.period, config.kappa);

    const SteadyState ss = quasi_steady_state(protocol, run.cutoff);
    run.observables = steady_observables(ss.rho);
    const PhaseGrid grid = PhaseGrid::auto_sized(run.observables.mean_photons, config.grid_points);
    run.map = wigner(ss.rho, grid);
    run.observables.negativity = run.map.negativity;

    const double radius = classical::initial_condition_radius(run.eps0, config.kerr);
    for (int j = 0; j < config.initial_conditions; ++j) {
        const cplx start = classical::sample_initial_condition(config.seed, 0, static_cast<std::size_t>(j), radius);
        const auto orbit = classical::integrate_orbit(protocol, start, config.orbit);
        run.orbit_classes.push_back(orbit.classification);
        if (orbit.classification.kind == classical::AttractorKind::Diverged) continue;
        run.orbit_samples.insert(run.orbit_samples.end(), orbit.samples.begin(), orbit.samples.end());
    }
    run.overlap_radius = config.overlap_radius_cells * std::max(grid.dx(), grid.dp());
    run.bandwidth = config.bandwidth_cells * std::max(grid.dx(), grid.dp());
    run.overlap = attractor_overlap(run.map, run.orbit_samples, run.overlap_radius);
    run.bhattacharyya = distribution_distance(run.map, run.orbit_samples, run.bandwidth);

    const std::string stem = "eps" + tag(run.eps0) + "_D" + std::to_string(run.cutoff);
    const fs::path wcsv = config.out_dir / ("wigner_" + stem + ".csv");
    write_wigner_csv(wcsv, run.map);
    json wside = sidecar_base(config, "wigner-map", wcsv);
    wside["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"p_min", grid.p_min},
                     {"p_max", grid.p_max}, {"nx", grid.nx},       {"np", grid.np}};
    wside["D"] = run.cutoff;
    wside["protocol"] = protocol_json(protocol);
    wside["integral"] = run.map.integral;
    wside["negativity"] = run.map.negativity;
    wside["imag_residue"] = run.map.imag_residue;
    wside["boundary_ok"] = run.map.boundary_ok;
    if (!run.map.boundary_ok) wside["warning"] = "grid does not contain the state's support; integral may be off";

    const fs::path ocsv = config.out_dir / ("orbit_" + stem + ".csv");
    {
        std::ofstream out(ocsv);
        out << "x,p\n";
        for (const auto& z : run.orbit_samples) out << num(z.real()) << ',' << num(z.imag()) << '\n';
    }
    json oside = sidecar_base(config, "wigner-map", ocsv);
    json classes = json::array();
    for (const auto& c : run.orbit_classes) classes.push_back(c.name());
    oside["classifications"] = classes;
    oside["protocol"] = protocol_json(protocol);

    const fs::path report = config.out_dir / ("overlap_" + stem + ".json");
    json rep = sidecar_base(config, "wigner-map", report);
    rep["eps0"] = run.eps0;
    rep["D"] = run.cutoff;
    rep["overlap"] = run.overlap;
    rep["overlap_radius"] = run.overlap_radius;
    rep["bhattacharyya"] = run.bhattacharyya;
    rep["bandwidth"] = run.bandwidth;
    rep["orbit_samples"] = run.orbit_samples.size();
    rep["negativity"] = run.map.negativity;
    rep["Na"] = run.observables.mean_photons;
    rep["variance"] = run.observables.variance;
    rep["Sv"] = run.observables.entropy;
    rep["positivity_warning"] = ss.positivity_warning;
    {
        std::ofstream out(report);
        out << rep.dump(2) << '\n';
    }
    run.output.files = {wcsv, write_sidecar(wcsv, wside), ocsv, write_sidecar(ocsv, oside), report};
    return run;
}

ConvergenceRun cmd_convergence(const RunConfig& config)
{
    if (!(config.kappa > 0.0)) {
        throw ConfigInvalid("field 'protocol.kappa': the dissipative Floquet method requires kappa > 0");
    }
    if (config.cutoffs.size() < 3) throw ConfigInvalid("field 'quantum.cutoffs': convergence needs >= 3 cutoffs");
    ensure_dir(config.out_dir);
    const DriveProtocol protocol = config.protocol_at(config.sweep_values.front());

    std::map<int, SteadyObservables> cache;
    auto observe = [&](int d) -> const SteadyObservables& {
        auto it = cache.find(d);
        if (it == cache.end()) it = cache.emplace(d, steady_observables(quasi_steady_state(protocol, d).rho)).first;
        return it->second;
    };
    ConvergenceRun run;
    run.reports.emplace_back("Na", convergence_certify([&](int d) { return observe(d).mean_photons; }, config.cutoffs));
    run.reports.emplace_back("variance", convergence_certify([&](int d) { return observe(d).variance; }, config.cutoffs));
    run.reports.emplace_back("Sv", convergence_certify([&](int d) { return observe(d).entropy; }, config.cutoffs));

    const fs::path csv = config.out_dir / "convergence.csv";
    std::ofstream out(csv);
    out << "observable,D,value\n";
    json summary = json::array();
    for (const auto& [name, rep] : run.reports) {
        for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
            out << name << ',' << rep.cutoffs[i] << ',' << num(rep.values[i]) << '\n';
        }
        summary.push_back({{"observable", name}, {"converged", rep.converged},
                           {"last_relative_change", rep.last_relative_change}, {"errors", rep.errors}});
    }
    out.close();
    json side = sidecar_base(config, "convergence", csv);
    side["protocol"] = protocol_json(protocol);
    side["reports"] = summary;
    run.output.files = {csv, write_sidecar(csv, side)};
    return run;
}

VerifyRun cmd_verify(const RunConfig& config, const VerifyOptions& options)
{
    ensure_dir(config.out_dir);
    VerifyRun run;
    run.results = run_oracles(options);
    run.all_passed = std::all_of(run.results.begin(), run.results.end(), [](const auto& r) { return r.passed; });
    run.output.exit_code = run.all_passed ? 0 : 1;

    const fs::path report = config.out_dir / "verify.json";
    json rep = sidecar_base(config, "verify", report);
    json items = json::array();
    for (const auto& r : run.results) {
        items.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured},
                         {"tolerance", r.tolerance}, {"detail", r.detail}});
    }
    rep["oracles"] = items;
    rep["all_passed"] = run.all_passed;
    rep["mutation_flip_hamiltonian_sign"] = options.flip_hamiltonian_sign;
    std::ofstream out(report);
    out << rep.dump(2) << '\n';
    run.output.files = {report};
    return run;
}

} // namespace kerr
