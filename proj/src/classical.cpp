// classical.cpp — mean-field orbits, stroboscopic sections, Lyapunov exponents

#include "kerr/classical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "kerr/errors.hpp"

namespace kerr::classical {

std::string Classification::name() const
{
    switch (kind) {
    case AttractorKind::FixedPoint: return "FixedPoint";
    case AttractorKind::PeriodK: return period == 2 ? "PeriodTwo" : "PeriodK(" + std::to_string(period) + ")";
    case AttractorKind::Chaotic: return "Chaotic";
    case AttractorKind::Unclassified: return "Unclassified";
    case AttractorKind::Diverged: return "Diverged";
    }
    return "Unclassified";
}

cplx mean_field_rhs(cplx alpha, cplx eps, const DriveProtocol& p)
{
    const cplx i(0.0, 1.0);
    return (-0.5 * p.kappa + i * p.detuning - i * p.kerr * std::norm(alpha)) * alpha -
           i * eps * std::conj(alpha);
}

Eigen::Matrix2d mean_field_jacobian(cplx alpha, cplx eps, const DriveProtocol& p)
{
    // f depends on alpha and conj(alpha); with d alpha = dx + i dp,
    // df = (f_a + f_c) dx + i (f_a - f_c) dp.
    const cplx i(0.0, 1.0);
    const cplx f_a = -0.5 * p.kappa + i * p.detuning - 2.0 * i * p.kerr * std::norm(alpha);
    const cplx f_c = -i * p.kerr * alpha * alpha - i * eps;
    const cplx col_x = f_a + f_c;
    const cplx col_p = i * (f_a - f_c);
    Eigen::Matrix2d j;
    j << col_x.real(), col_p.real(), col_x.imag(), col_p.imag();
    return j;
}

namespace {

struct State {
    cplx alpha;
    Eigen::Vector2d tangent;
};

template <bool WithTangent>
State rk4_step(const DriveProtocol& p, cplx eps, const State& s, double h)
{
    auto f = [&](const State& x) {
        State d{mean_field_rhs(x.alpha, eps, p), Eigen::Vector2d::Zero()};
        if constexpr (WithTangent) d.tangent = mean_field_jacobian(x.alpha, eps, p) * x.tangent;
        return d;
    };
    auto axpy = [](const State& x, double a, const State& d) {
        return State{x.alpha + a * d.alpha, x.tangent + a * d.tangent};
    };
    const State k1 = f(s);
    const State k2 = f(axpy(s, 0.5 * h, k1));
    const State k3 = f(axpy(s, 0.5 * h, k2));
    const State k4 = f(axpy(s, h, k3));
    State out;
    out.alpha = s.alpha + (h / 6.0) * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
    if constexpr (WithTangent) {
        out.tangent = s.tangent + (h / 6.0) * (k1.tangent + 2.0 * k2.tangent + 2.0 * k3.tangent + k4.tangent);
    } else {
        out.tangent = s.tangent;
    }
    return out;
}

// Integrates over [t0, t1]; each constant-drive segment gets a whole number of steps.
template <bool WithTangent>
State advance(const DriveProtocol& p, State s, double t0, double t1, int steps_per_half)
{
    const double half = 0.5 * p.period;
    const double h_nominal = half / steps_per_half;
    double t = t0;
    while (t < t1 - 1e-12 * p.period) {
        const double k = std::floor(t / half + 1e-9);
        const double seg_end = std::min(t1, (k + 1.0) * half);
        const double len = seg_end - t;
        const long n = std::max(1L, static_cast<long>(std::ceil(len / h_nominal - 1e-9)));
        const double h = len / static_cast<double>(n);
        const cplx eps = p.drive_at(0.5 * (t + seg_end));
        for (long i = 0; i < n; ++i) s = rk4_step<WithTangent>(p, eps, s, h);
        t = seg_end;
    }
    return s;
}

void check_settings(const DriveProtocol& p, const OrbitSettings& s)
{
    p.validate();
    if (s.steps_per_half < 1) throw InvalidArgument("steps_per_half must be positive");
    if (s.transient_periods < 0 || s.recorded_periods < 1) {
        throw InvalidArgument("need transient >= 0 and recorded >= 1 periods");
    }
    if (!(s.section_phase >= 0.0 && s.section_phase < 1.0)) {
        throw InvalidArgument("section phase must lie in [0, 1)");
    }
}

// Runs the transient (plus the section offset). Returns false on divergence.
bool run_transient(const DriveProtocol& p, State& s, const OrbitSettings& settings)
{
    const double period = p.period;
    for (int k = 0; k < settings.transient_periods; ++k) {
        s = advance<false>(p, s, k * period, (k + 1) * period, settings.steps_per_half);
        if (!(std::abs(s.alpha) <= settings.divergence_radius)) return false;
    }
    const double t0 = settings.transient_periods * period;
    if (settings.section_phase > 0.0) {
        s = advance<false>(p, s, t0, t0 + settings.section_phase * period, settings.steps_per_half);
    }
    return std::abs(s.alpha) <= settings.divergence_radius;
}

} // namespace

cplx propagate(const DriveProtocol& p, cplx alpha, double t0, double t1, int steps_per_half)
{
    if (steps_per_half < 1) throw InvalidArgument("steps_per_half must be positive");
    return advance<false>(p, State{alpha, Eigen::Vector2d::Zero()}, t0, t1, steps_per_half).alpha;
}

double default_cluster_radius(const std::vector<cplx>& samples)
{
    double m = 1.0;
    for (const auto& z : samples) m = std::max(m, std::abs(z));
    return 1e-4 * m;
}

Classification classify(const std::vector<cplx>& samples, std::optional<double> lyapunov,
                        double period, std::optional<double> cluster_radius)
{
    if (samples.size() < 200) {
        throw InvalidArgument("classification needs at least 200 section samples");
    }
    const double delta = cluster_radius.value_or(default_cluster_radius(samples));
    constexpr std::size_t kMaxCycle = 8;

    std::vector<cplx> centers;
    std::vector<int> labels;
    labels.reserve(samples.size());
    bool too_many = false;
    for (const auto& z : samples) {
        int label = -1;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (std::abs(z - centers[c]) <= delta) {
                label = static_cast<int>(c);
                break;
            }
        }
        if (label < 0) {
            if (centers.size() == kMaxCycle) {
                too_many = true;
                break;
            }
            centers.push_back(z);
            label = static_cast<int>(centers.size() - 1);
        }
        labels.push_back(label);
    }

    if (!too_many) {
        const std::size_t k = centers.size();
        bool cyclic = true;
        for (std::size_t i = k; i < labels.size() && cyclic; ++i) cyclic = labels[i] == labels[i - k];
        if (cyclic) return k == 1 ? Classification::fixed_point() : Classification::period_k(static_cast<int>(k));
    }
    if (lyapunov && *lyapunov > 1e-3 / period) return Classification::chaotic();
    return {};
}

StroboscopicOrbit integrate_orbit(const DriveProtocol& p, cplx alpha0, const OrbitSettings& settings)
{
    check_settings(p, settings);
    StroboscopicOrbit orbit;
    orbit.protocol = p;
    orbit.initial = alpha0;
    orbit.transient_periods = settings.transient_periods;

    State s{alpha0, Eigen::Vector2d(1.0, 0.0)};
    if (!run_transient(p, s, settings)) {
        orbit.classification = {AttractorKind::Diverged, 0};
        return orbit;
    }
    const double period = p.period;
    double t = settings.transient_periods * period + settings.section_phase * period;
    double log_stretch = 0.0;
    orbit.samples.reserve(static_cast<std::size_t>(settings.recorded_periods));
    orbit.samples.push_back(s.alpha);
    for (int k = 1; k < settings.recorded_periods; ++k) {
        s = advance<true>(p, s, t, t + period, settings.steps_per_half);
        t += period;
        if (!(std::abs(s.alpha) <= settings.divergence_radius)) {
            orbit.classification = {AttractorKind::Diverged, 0};
            return orbit;
        }
        const double stretch = s.tangent.norm();
        log_stretch += std::log(stretch);
        s.tangent /= stretch;
        orbit.samples.push_back(s.alpha);
    }
    if (settings.recorded_periods > 1) {
        orbit.lyapunov = log_stretch / ((settings.recorded_periods - 1) * period);
    }
    if (orbit.samples.size() >= 200) {
        orbit.classification = classify(orbit.samples, orbit.lyapunov, period);
    }
    return orbit;
}

double lyapunov_exponent(const DriveProtocol& p, cplx alpha0, int periods, const OrbitSettings& settings)
{
    check_settings(p, settings);
    if (periods < 1) throw InvalidArgument("need at least one period for the Lyapunov average");
    State s{alpha0, Eigen::Vector2d(1.0, 0.0)};
    if (!run_transient(p, s, settings)) throw Diverged("orbit left |alpha| <= divergence radius");
    const double period = p.period;
    double t = settings.transient_periods * period + settings.section_phase * period;
    double log_stretch = 0.0;
    for (int k = 0; k < periods; ++k) {
        s = advance<true>(p, s, t, t + period, settings.steps_per_half);
        t += period;
        if (!(std::abs(s.alpha) <= settings.divergence_radius)) {
            throw Diverged("orbit left |alpha| <= divergence radius");
        }
        const double stretch = s.tangent.norm();
        log_stretch += std::log(stretch);
        s.tangent /= stretch;
    }
    return log_stretch / (periods * period);
}

Classification BifurcationDiagram::column_classification(std::size_t i) const
{
    const auto& col = orbits.at(i);
    std::map<std::string, std::pair<int, std::size_t>> counts;  // name -> (count, first index)
    for (std::size_t j = 0; j < col.size(); ++j) {
        auto [it, inserted] = counts.try_emplace(col[j].classification.name(), 0, j);
        ++it->second.first;
    }
    std::size_t best = 0;
    int best_count = -1;
    for (const auto& [name, entry] : counts) {
        if (entry.first > best_count || (entry.first == best_count && entry.second < best)) {
            best_count = entry.first;
            best = entry.second;
        }
    }
    return col.empty() ? Classification{} : col[best].classification;
}

std::optional<double> BifurcationDiagram::column_lyapunov(std::size_t i) const
{
    std::optional<double> out;
    for (const auto& o : orbits.at(i)) {
        if (o.lyapunov && (!out || *o.lyapunov > *out)) out = o.lyapunov;
    }
    return out;
}

cplx sample_initial_condition(std::uint64_t seed, std::size_t i, std::size_t j, double radius)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    return std::polar(r, phi);
}

double initial_condition_radius(double eps0, double kerr)
{
    if (!(kerr > 0.0)) throw InvalidArgument("initial-condition disk needs U > 0");
    return std::sqrt(std::max(0.0, eps0 + 1.0) / kerr);
}

BifurcationDiagram bifurcation_sweep(const DriveProtocol& templ, const std::vector<double>& eps0,
                                     int initial_conditions, std::uint64_t seed,
                                     const OrbitSettings& settings, int workers)
{
    templ.validate();
    if (initial_conditions < 1) throw InvalidArgument("need at least one initial condition");
    for (std::size_t i = 1; i < eps0.size(); ++i) {
        if (!(eps0[i] > eps0[i - 1])) throw InvalidArgument("drive values must be strictly increasing");
    }
    if (!(templ.kerr > 0.0)) throw InvalidArgument("initial-condition disk needs U > 0");

    BifurcationDiagram diagram;
    diagram.drive_values = eps0;
    diagram.orbits.assign(eps0.size(), std::vector<OrbitSummary>(static_cast<std::size_t>(initial_conditions)));

    const std::size_t total = eps0.size() * static_cast<std::size_t>(initial_conditions);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const std::size_t i = job / static_cast<std::size_t>(initial_conditions);
            const std::size_t j = job % static_cast<std::size_t>(initial_conditions);
            const cplx start =
                sample_initial_condition(seed, i, j, initial_condition_radius(eps0[i], templ.kerr));
            DriveProtocol p = DriveProtocol::alternating(templ.detuning, templ.kerr, eps0[i],
                                                         templ.period, templ.kappa);
            const auto orbit = integrate_orbit(p, start, settings);
            OrbitSummary summary;
            summary.initial = orbit.initial;
            summary.classification = orbit.classification;
            summary.lyapunov = orbit.lyapunov;
            summary.re_samples.reserve(orbit.samples.size());
            for (const auto& z : orbit.samples) summary.re_samples.push_back(z.real());
            diagram.orbits[i][j] = std::move(summary);
        }
    };
    const int n = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return diagram;
}

} // namespace kerr::classical
