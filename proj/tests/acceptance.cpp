// acceptance.cpp — end-to-end acceptance checks for the alternating-drive Kerr oscillator
//
// Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
// Steady states and spectra are cached under --cache so reruns are cheap.
//
//   acceptance [--cache DIR] [--only N[,M...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kerr/commands.hpp"
#include "kerr/errors.hpp"

using namespace kerr;
namespace fs = std::filesystem;

namespace {

constexpr double kDetuning = -1.0;
constexpr double kKerr = 0.2;
constexpr double kKappa = 0.5;
constexpr double kPeriod = 2.0;
const double pi = std::numbers::pi;

DriveProtocol protocol(double eps0, double kerr_u = kKerr)
{
    return DriveProtocol::alternating(kDetuning, kerr_u, eps0, kPeriod, kKappa);
}

std::string fmt(double x, int precision = 4)
{
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

void progress(const std::string& msg)
{
    static const auto start = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "[" << fmt(s, 6) << " s] " << msg << std::endl;
}

// Disk cache of steady states (binary) and spectral summaries (text).
class Cache {
public:
    explicit Cache(fs::path dir) : dir_(std::move(dir))
    {
        if (!dir_.empty()) fs::create_directories(dir_);
    }

    DensityMatrix steady(double eps0, double kerr_u, int cutoff)
    {
        const auto path = file(eps0, kerr_u, cutoff, "rho.bin");
        const FockSpace space(cutoff);
        if (!dir_.empty() && fs::exists(path)) {
            std::ifstream in(path, std::ios::binary);
            Matrix m(cutoff, cutoff);
            in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
            if (in) return DensityMatrix(space, m);
        }
        progress("steady state eps0=" + fmt(eps0) + " U=" + fmt(kerr_u) + " D=" + std::to_string(cutoff));
        const SteadyState ss = quasi_steady_state(protocol(eps0, kerr_u), cutoff);
        if (!dir_.empty()) {
            std::ofstream out(path, std::ios::binary);
            out.write(reinterpret_cast<const char*>(ss.rho.matrix().data()),
                      static_cast<std::streamsize>(sizeof(cplx) * ss.rho.matrix().size()));
        }
        return ss.rho;
    }

    // Gap summary: gap_t, gap_p (nan if undefined), dominant phase, period doubled.
    struct Gaps {
        double gap_t = 0.0, gap_p = 0.0, phase = 0.0;
        bool doubled = false;
    };

    Gaps spectral(double eps0, double kerr_u, int cutoff)
    {
        const auto path = file(eps0, kerr_u, cutoff, "gaps.txt");
        Gaps g;
        if (!dir_.empty() && fs::exists(path)) {
            std::ifstream in(path);
            std::string p;
            if (in >> g.gap_t >> p >> g.phase >> g.doubled) {
                g.gap_p = p == "nan" ? std::nan("") : std::stod(p);
                return g;
            }
        }
        progress("spectrum eps0=" + fmt(eps0) + " U=" + fmt(kerr_u) + " D=" + std::to_string(cutoff));
        const FockSpace space(cutoff);
        const auto spec = effective_spectrum(floquet_propagator(protocol(eps0, kerr_u), space), kPeriod);
        const GapReport r = gaps(spec);
        g = {r.gap_t, r.gap_p ? *r.gap_p : std::nan(""), r.dominant_phase, r.period_doubled};
        if (!dir_.empty()) {
            std::ofstream out(path);
            out.precision(17);
            out << g.gap_t << ' ' << (std::isnan(g.gap_p) ? std::string("nan") : fmt(g.gap_p, 17)) << ' ' << g.phase
                << ' ' << g.doubled << '\n';
            const SteadyState ss = steady_state(spec);
            const auto rho_path = file(eps0, kerr_u, cutoff, "rho.bin");
            if (!fs::exists(rho_path)) {
                std::ofstream rb(rho_path, std::ios::binary);
                rb.write(reinterpret_cast<const char*>(ss.rho.matrix().data()),
                         static_cast<std::streamsize>(sizeof(cplx) * ss.rho.matrix().size()));
            }
        }
        return g;
    }

private:
    fs::path file(double eps0, double kerr_u, int cutoff, const std::string& what) const
    {
        return dir_ / ("eps" + fmt(eps0, 6) + "_U" + fmt(kerr_u, 6) + "_D" + std::to_string(cutoff) + "_" + what);
    }

    fs::path dir_;
};

struct Verdict {
    bool passed = false;
    std::string detail;
};

void report(int id, const std::string& title, const Verdict& v)
{
    std::cout << (v.passed ? "PASS" : "FAIL") << "  criterion " << id << " (" << title << "): " << v.detail
              << std::endl;
}

std::vector<double> grid(double start, double stop, double step)
{
    std::vector<double> out;
    const long n = std::lround((stop - start) / step);
    for (long i = 0; i <= n; ++i) out.push_back(std::round((start + i * step) * 1e9) / 1e9);
    return out;
}

// Classical windows found by criterion 1, reused by the quantum criteria.
struct Windows {
    std::vector<double> fixed_point;
    std::vector<double> period_two;
    std::vector<double> chaotic;
    double first_period_two = std::nan("");
};

bool in_list(const std::vector<double>& xs, double x)
{
    return std::any_of(xs.begin(), xs.end(), [&](double v) { return std::abs(v - x) < 1e-9; });
}

// ---------------------------------------------------------------------------

Verdict phase_boundaries(Windows& w)
{
    const auto eps = grid(0.1, 3.0, 0.05);
    classical::OrbitSettings settings;  // 500 transient, 2000 recorded, 100 steps per half period
    progress("classical sweep over " + std::to_string(eps.size()) + " drive values");
    const auto d = classical::bifurcation_sweep(protocol(0.0), eps, 32, 42, settings);

    std::vector<classical::Classification> cls;
    for (std::size_t i = 0; i < eps.size(); ++i) cls.push_back(d.column_classification(i));
    using classical::AttractorKind;
    auto is_fp = [](const classical::Classification& c) { return c.kind == AttractorKind::FixedPoint; };
    auto is_p2 = [](const classical::Classification& c) { return c == classical::Classification::period_k(2); };
    auto is_ch = [](const classical::Classification& c) { return c.kind == AttractorKind::Chaotic; };

    std::ostringstream log;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (is_fp(cls[i])) w.fixed_point.push_back(eps[i]);
        if (is_p2(cls[i])) w.period_two.push_back(eps[i]);
        if (is_ch(cls[i])) w.chaotic.push_back(eps[i]);
        log << fmt(eps[i], 3) << ":" << cls[i].name() << " ";
    }
    progress("columns " + log.str());

    bool ok = true;
    std::ostringstream why;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double e = eps[i];
        if (e < 0.45 - 1e-9 && !is_fp(cls[i])) ok = false, why << " eps0=" << e << " not FixedPoint;";
        if (e >= 0.6 - 1e-9 && e <= 1.8 + 1e-9 && !is_p2(cls[i])) ok = false, why << " eps0=" << e << " not PeriodTwo;";
        if (e >= 2.2 - 1e-9) {
            const auto lam = d.column_lyapunov(i);
            if (!is_ch(cls[i]) || !lam || !(*lam > 0.0)) ok = false, why << " eps0=" << e << " not Chaotic;";
        }
    }
    // A boundary sits midway between the last column of one phase and the first of the next.
    auto boundary = [&](auto before, auto after) {
        for (std::size_t i = 1; i < eps.size(); ++i) {
            if (after(cls[i]) && before(cls[i - 1])) return 0.5 * (eps[i - 1] + eps[i]);
        }
        return std::nan("");
    };
    const double b1 = boundary(is_fp, is_p2);
    const double b2 = boundary(is_p2, is_ch);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (is_p2(cls[i])) {
            w.first_period_two = eps[i];
            break;
        }
    }
    if (!(std::abs(b1 - 0.5) <= 0.15)) ok = false, why << " first boundary " << b1 << " outside 0.5 +- 0.15;";
    if (!(std::abs(b2 - 2.0) <= 0.15)) ok = false, why << " second boundary " << b2 << " outside 2.0 +- 0.15;";
    double min_chaos_lyap = 1e300;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] >= 2.2 - 1e-9 && d.column_lyapunov(i)) min_chaos_lyap = std::min(min_chaos_lyap, *d.column_lyapunov(i));
    }
    return {ok, "FixedPoint->PeriodTwo at " + fmt(b1) + ", PeriodTwo->Chaotic at " + fmt(b2) +
                    " (targets 0.5, 2.0 +- 0.15); min Lyapunov on [2.2, 3.0] = " + fmt(min_chaos_lyap) +
                    " (32 initial conditions, majority per column)" + why.str()};
}

std::vector<double> quantum_grid() { return grid(0.1, 3.0, 0.1); }

// Windows pinned by criterion 1: FixedPoint below 0.45, PeriodTwo on [0.6, 1.8].
Verdict time_crystal(Cache& cache)
{
    double max_p2 = -1.0, min_fp = 1e300, worst_phase = 0.0;
    bool all_doubled = true;
    int n_p2 = 0, n_fp = 0;
    std::ostringstream why;
    for (double e : quantum_grid()) {
        const auto g = cache.spectral(e, kKerr, 40);
        if (e >= 0.6 - 1e-9 && e <= 1.8 + 1e-9) {
            ++n_p2;
            max_p2 = std::max(max_p2, g.gap_t);
            worst_phase = std::max(worst_phase, std::abs(std::abs(g.phase) - pi));
            if (!g.doubled) all_doubled = false, why << " eps0=" << e << " not period doubled;";
        } else if (e < 0.45 - 1e-9) {
            ++n_fp;
            min_fp = std::min(min_fp, g.gap_t);
        }
    }
    const bool ok = n_p2 > 0 && n_fp > 0 && all_doubled && max_p2 < min_fp && worst_phase <= 1e-3;
    return {ok, "D=40, " + std::to_string(n_p2) + " points on [0.6, 1.8] all doubled=" + (all_doubled ? "yes" : "no") +
                    ", max gapT there " + fmt(max_p2) + " < min gapT below 0.45 " + fmt(min_fp) +
                    ", max ||Im l T| - pi| = " + fmt(worst_phase, 3) + why.str()};
}

Verdict gap_closing(Cache& cache, const Windows& w)
{
    const double e = std::isnan(w.first_period_two) ? 0.5 : w.first_period_two;
    std::vector<double> gp;
    for (double u : {0.4, 0.2, 0.1}) gp.push_back(cache.spectral(e, u, 40).gap_p);
    const bool ok = std::isfinite(gp[0]) && std::isfinite(gp[1]) && std::isfinite(gp[2]) && gp[0] > gp[1] &&
                    gp[1] > gp[2];
    return {ok, "gapP at eps0=" + fmt(e) + ", D=40: U=0.4 -> " + fmt(gp[0]) + ", U=0.2 -> " + fmt(gp[1]) +
                    ", U=0.1 -> " + fmt(gp[2]) + " (must decrease)"};
}

Verdict critical_drive(Cache& cache)
{
    std::vector<std::pair<double, double>> full, reduced;
    for (double e : grid(2.2, 3.0, 0.2)) {
        full.push_back({e, steady_observables(cache.steady(e, kKerr, 60)).mean_photons});
    }
    for (double e : grid(2.2, 2.6, 0.1)) {
        cache.spectral(e, kKerr, 40);
        reduced.push_back({e, steady_observables(cache.steady(e, kKerr, 40)).mean_photons});
    }
    const auto f = fit_critical_drive(full, kKerr, {2.2, 3.0});
    const auto r = fit_critical_drive(reduced, kKerr, {2.2, 2.6});
    const bool ok_full = f.eps_c >= 0.17 && f.eps_c <= 0.37;
    const bool ok_reduced = r.eps_c >= 0.27 - 0.15 && r.eps_c <= 0.27 + 0.15;
    return {ok_full && ok_reduced,
            "D=60 over [2.2, 3.0]: eps_c = " + fmt(f.eps_c) + " (window [0.17, 0.37], residual " + fmt(f.residual) +
                ", free slope " + fmt(f.free_slope) + "); D=40 over [2.2, 2.6]: eps_c = " + fmt(r.eps_c) +
                " (window [0.12, 0.42])"};
}

Verdict entropy_dichotomy(Cache& cache)
{
    auto ratio = [&](double e, double u, int d) { return steady_observables(cache.steady(e, u, d)).entropy_ratio; };
    const double c04 = ratio(3.0, 0.4, 40);
    const double c02 = ratio(3.0, 0.2, 60);
    const double r04 = ratio(1.2, 0.4, 40);
    const double r02 = ratio(1.2, 0.2, 40);
    const bool ok = c02 > 0.9 && c04 > 0.9 && c02 > c04 && r04 < c04 && r02 < c02 && r02 < r04;
    return {ok, "Sv/S0v at eps0=3: U=0.4 -> " + fmt(c04) + ", U=0.2 -> " + fmt(c02) + "; at eps0=1.2: U=0.4 -> " +
                    fmt(r04) + ", U=0.2 -> " + fmt(r02)};
}

Verdict fluctuation_divergence(Cache& cache, const Windows& w)
{
    double min_chaos = 1e300, max_regular = -1.0;
    for (double e : quantum_grid()) {
        const double var = steady_observables(cache.steady(e, kKerr, 40)).variance;
        if (e >= 2.2 - 1e-9) {
            min_chaos = std::min(min_chaos, var);
        } else if (in_list(w.fixed_point, e) || in_list(w.period_two, e)) {
            max_regular = std::max(max_regular, var);
        }
    }
    for (double e : grid(2.2, 3.0, 0.2)) min_chaos = std::min(min_chaos, steady_observables(cache.steady(e, kKerr, 60)).variance);
    return {min_chaos > max_regular, "min variance on [2.2, 3.0] = " + fmt(min_chaos) +
                                         " vs max variance in regular windows = " + fmt(max_regular) + " (U=0.2)"};
}

struct Correspondence {
    double overlap = 0.0;
    double bhattacharyya = 0.0;
};

Correspondence correspondence(Cache& cache, double eps0, double kerr_u, int cutoff)
{
    const DensityMatrix rho = cache.steady(eps0, kerr_u, cutoff);
    const auto obs = steady_observables(rho);
    const PhaseGrid g = PhaseGrid::auto_sized(obs.mean_photons, 201);
    const WignerMap w = wigner(rho, g);
    std::vector<cplx> samples;
    const double radius = classical::initial_condition_radius(eps0, kerr_u);
    for (std::size_t j = 0; j < 8; ++j) {
        const auto orbit = classical::integrate_orbit(protocol(eps0, kerr_u),
                                                      classical::sample_initial_condition(42, 0, j, radius));
        if (orbit.classification.kind == classical::AttractorKind::Diverged) continue;
        samples.insert(samples.end(), orbit.samples.begin(), orbit.samples.end());
    }
    const double spacing = std::max(g.dx(), g.dp());
    return {attractor_overlap(w, samples, 3.0 * spacing), distribution_distance(w, samples, 2.0 * spacing)};
}

Verdict quantum_classical(Cache& cache)
{
    const auto c02 = correspondence(cache, 3.0, 0.2, 60);
    const auto c04 = correspondence(cache, 3.0, 0.4, 40);
    const bool ok = c02.overlap > 0.9 && c02.bhattacharyya > c04.bhattacharyya;
    return {ok, "eps0=3, D=60, U=0.2: overlap " + fmt(c02.overlap) + " (> 0.9), Bhattacharyya " +
                    fmt(c02.bhattacharyya) + " vs " + fmt(c04.bhattacharyya) + " at U=0.4 (D=40)"};
}

Verdict oracle_suite()
{
    bool ok = true;
    std::ostringstream why;
    for (const auto& r : run_oracles()) {
        if (!r.passed) ok = false, why << " " << r.name << " failed (" << r.measured << ");";
    }
    // Long-time cross-check of the spectral steady state against direct integration.
    const FockSpace space(30);
    const auto p = protocol(1.0);
    const auto ss = steady_state_direct(floquet_propagator(p, space));
    const auto run = integrate_master_equation(p, DensityMatrix::fock_state(space, 0), 200 * kPeriod, kPeriod / 400.0);
    const double dist = trace_distance(run.state.matrix(), ss.rho.matrix());
    if (!(dist < 1e-4)) ok = false, why << " RK4 vs spectral " << dist << ";";
    return {ok, "built-in oracles (damped spectrum, Wigner vacuum, RK4 order, ...) and 200-period RK4 vs "
                "spectral steady state at D=30, eps0=1: trace distance " + fmt(dist, 3) + why.str()};
}

} // namespace

int main(int argc, char** argv)
{
    fs::path cache_dir;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cache" && i + 1 < argc) {
            cache_dir = argv[++i];
        } else if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else {
            std::cerr << "usage: acceptance [--cache DIR] [--only N[,M...]]\n";
            return 2;
        }
    }
    auto wanted = [&](int id) { return only.empty() || only.contains(id); };

    Cache cache(cache_dir);
    Windows windows;
    int failures = 0;
    auto run = [&](int id, const std::string& title, const std::function<Verdict()>& f) {
        if (!wanted(id)) return;
        Verdict v;
        try {
            v = f();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        if (!v.passed) ++failures;
        report(id, title, v);
    };

    run(8, "oracle suite", oracle_suite);
    // The quantum criteria use the classical windows, so criterion 1 always runs when any of them does.
    if (wanted(1) || wanted(3) || wanted(6)) {
        Verdict v;
        try {
            v = phase_boundaries(windows);
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        if (wanted(1)) {
            if (!v.passed) ++failures;
            report(1, "phase boundaries", v);
        }
    }
    run(2, "time crystal signature", [&] { return time_crystal(cache); });
    run(3, "gap closing", [&] { return gap_closing(cache, windows); });
    run(4, "critical drive fit", [&] { return critical_drive(cache); });
    run(5, "entropy dichotomy", [&] { return entropy_dichotomy(cache); });
    run(6, "fluctuation divergence", [&] { return fluctuation_divergence(cache, windows); });
    run(7, "quantum-classical correspondence", [&] { return quantum_classical(cache); });
    return failures == 0 ? 0 : 1;
}
