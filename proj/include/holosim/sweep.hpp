// sweep.hpp — batch harness: temperature / coupling / adiabatic-time sweeps
// with deterministic CSV/JSON output.
//
// Each grid point is an independent pure computation; a worker pool consumes
// the flattened (variant, grid) task list and results are written in task
// order, so output is identical for any worker count.

#pragma once

#include "holosim/fidelity.hpp"
#include "holosim/units.hpp"
#include "holosim/version.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace holosim {

enum class SweepVariable { Temperature, K1, K3, AdiabaticTime };

inline const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::Temperature: return "T";
        case SweepVariable::K1: return "k1";
        case SweepVariable::K3: return "k3";
        default: return "t_ad";
    }
}

enum class GridSpacing { Linear, Log };

struct SweepGrid {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    GridSpacing spacing = GridSpacing::Linear;

    void validate() const {
        if (count < 2) throw std::invalid_argument("sweep grid: count must be >= 2");
        if (!(min < max)) throw std::invalid_argument("sweep grid: min must be < max");
        if (spacing == GridSpacing::Log && min <= 0.0)
            throw std::invalid_argument("sweep grid: log spacing requires min > 0");
    }

    std::vector<double> points() const {
        validate();
        std::vector<double> p(count);
        for (int i = 0; i < count; ++i) {
            const double s = static_cast<double>(i) / (count - 1);
            p[i] = spacing == GridSpacing::Linear
                       ? min + s * (max - min)
                       : min * std::pow(max / min, s);
        }
        return p;
    }
};

// A variant is a bath override applied on top of the base configuration,
// letting one invocation produce e.g. the superohmic/ohmic/mixed family of
// curves. Rows carry (k1, k3), which identifies the variant.
struct BathVariant {
    std::optional<double> k1;
    std::optional<double> k3;
    std::optional<SpectralKind> kind;
    std::optional<double> temperature;
    std::string label;
};

struct SweepConfig {
    SystemParams system;
    BathParams bath;
    SweepVariable variable = SweepVariable::Temperature;
    SweepGrid grid;
    bool fixed_alpha = false;   // hold Omega * t_ad while sweeping t_ad
    double alpha = 0.0;         // resolved at validate() from base params if 0
    int sample_count = 32;
    double eta_sq = 0.1;
    IntegratorConfig integrator;
    std::vector<BathVariant> variants;  // empty -> single base variant
    std::string preset_name;            // metadata only

    void validate() const {
        system.validate();
        bath.validate();
        grid.validate();
        if (sample_count < 1) throw std::invalid_argument("sweep: sample_count must be >= 1");
        if (fixed_alpha && variable != SweepVariable::AdiabaticTime)
            throw std::invalid_argument("sweep: fixed_alpha applies only to t_ad sweeps");
    }
};

struct SweepRecord {
    double sweep_value = 0.0;
    double temperature = 0.0;    // meV
    double t_over_omega = 0.0;
    double k1 = 0.0;
    double k3 = 0.0;             // (meV)^-2
    double t_ad_ps = 0.0;
    double alpha = 0.0;
    double gamma_plus = 0.0;     // meV, at omega = Omega^2/eps
    double gamma_minus = 0.0;
    double t_markov = 0.0;       // meV
    double tau_e = 0.0;          // hbar/meV
    double fidelity_mean = 0.0;
    double fidelity_min = 0.0;
    double fidelity_max = 0.0;
    int n_samples = 0;
    double wall_time_s = 0.0;    // not part of the CSV data section
};

namespace detail {

struct SweepTask {
    SystemParams sys;
    BathParams bath;
    double value;
};

inline BathParams apply_variant(BathParams base, const BathVariant& v) {
    if (v.k1) base.spectral.k1 = *v.k1;
    if (v.k3) base.spectral.k3 = *v.k3;
    if (v.kind) base.spectral.kind = *v.kind;
    if (v.temperature) base.temperature = *v.temperature;
    return base;
}

inline std::vector<SweepTask> make_tasks(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<BathVariant> variants = cfg.variants;
    if (variants.empty()) variants.push_back({});
    const std::vector<double> values = cfg.grid.points();
    const double alpha = cfg.alpha > 0.0 ? cfg.alpha : cfg.system.alpha();
    std::vector<SweepTask> tasks;
    tasks.reserve(variants.size() * values.size());
    for (const BathVariant& v : variants) {
        for (double value : values) {
            SweepTask t;
            t.sys = cfg.system;
            t.bath = apply_variant(cfg.bath, v);
            t.value = value;
            switch (cfg.variable) {
                case SweepVariable::Temperature: t.bath.temperature = value; break;
                case SweepVariable::K1:
                    t.bath.spectral.k1 = value;
                    break;
                case SweepVariable::K3:
                    t.bath.spectral.k3 = value;
                    break;
                case SweepVariable::AdiabaticTime:
                    t.sys.t_ad = time_from_ps(value);  // grid in ps
                    if (cfg.fixed_alpha) t.sys.omega = alpha / t.sys.t_ad;
                    break;
            }
            tasks.push_back(std::move(t));
        }
    }
    return tasks;
}

inline SweepRecord run_task(const SweepTask& task, const SweepConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord r;
    r.sweep_value = task.value;
    r.temperature = task.bath.temperature;
    r.t_over_omega = task.bath.temperature / task.sys.omega;
    r.k1 = task.bath.spectral.eff_k1();
    r.k3 = task.bath.spectral.eff_k3();
    r.t_ad_ps = time_to_ps(task.sys.t_ad);
    r.alpha = task.sys.alpha();
    const double gap = task.sys.omega * task.sys.omega / task.sys.epsilon;
    const RatePair g = rate_gamma(task.bath, gap);
    r.gamma_plus = g.plus;
    r.gamma_minus = g.minus;
    const MarkovDiagnostics md = markov_threshold(task.sys, task.bath.spectral);
    r.t_markov = md.applicable ? md.t_markov : 0.0;
    r.tau_e = task.bath.temperature > 0.0 ? memory_time(task.bath) : 0.0;
    const auto samples = sample_initial_states(cfg.sample_count, cfg.eta_sq);
    const FidelityResult f = averaged_fidelity(task.sys, task.bath, samples, cfg.integrator);
    r.fidelity_mean = f.mean;
    r.fidelity_min = f.min;
    r.fidelity_max = f.max;
    r.n_samples = static_cast<int>(samples.size());
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace detail

inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, int jobs = 1) {
    const auto tasks = detail::make_tasks(cfg);
    std::vector<SweepRecord> records(tasks.size());
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = detail::run_task(tasks[i], cfg);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) break;
                    records[i] = detail::run_task(tasks[i], cfg);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return records;
}

// Convenience entry points matching the three figure protocols.
inline std::vector<SweepRecord> sweep_temperature(const SweepConfig& cfg, int jobs = 1) {
    if (cfg.variable != SweepVariable::Temperature)
        throw std::invalid_argument("sweep_temperature: variable must be T");
    return run_sweep(cfg, jobs);
}

inline std::vector<SweepRecord> sweep_adiabatic_time(const SweepConfig& cfg, int jobs = 1) {
    if (cfg.variable != SweepVariable::AdiabaticTime)
        throw std::invalid_argument("sweep_adiabatic_time: variable must be t_ad");
    if (!cfg.fixed_alpha)
        throw std::invalid_argument("sweep_adiabatic_time: fixed_alpha flag must be set");
    return run_sweep(cfg, jobs);
}

inline std::vector<SweepRecord> sweep_coupling(const SweepConfig& cfg, int jobs = 1) {
    if (cfg.variable != SweepVariable::K1 && cfg.variable != SweepVariable::K3)
        throw std::invalid_argument("sweep_coupling: variable must be k1 or k3");
    return run_sweep(cfg, jobs);
}

// --------------------------------- output ------------------------------------

inline const char* csv_columns() {
    return "sweep_value,T_meV,T_over_Omega,k1,k3_per_meV2,t_ad_ps,alpha,gamma_plus_meV,"
           "gamma_minus_meV,T_M_meV,tau_E,fidelity_mean,fidelity_min,fidelity_max,n_samples";
}

// '#'-prefixed metadata header, then the fixed column schema. The data section
// contains no wall-clock information.
inline void write_csv(const std::vector<SweepRecord>& records, const SweepConfig& cfg,
                      const std::vector<std::string>& overrides, std::ostream& out) {
    out << "# holosim " << version_string() << "\n";
    out << "# units: energies meV, times column t_ad_ps in ps, internal time hbar/meV"
        << " (hbar = " << hbar_meV_ps << " meV*ps)\n";
    if (!cfg.preset_name.empty()) out << "# preset: " << cfg.preset_name << "\n";
    out << "# system: epsilon=" << cfg.system.epsilon << " omega=" << cfg.system.omega
        << " t_ad=" << cfg.system.t_ad << " gate=" << gate_name(cfg.system.gate) << "\n";
    out << "# bath: kind=" << spectral_kind_name(cfg.bath.spectral.kind)
        << " k1=" << cfg.bath.spectral.k1 << " k3=" << cfg.bath.spectral.k3
        << " omega_c=" << cfg.bath.spectral.omega_c << " T=" << cfg.bath.temperature << "\n";
    out << "# sweep: variable=" << sweep_variable_name(cfg.variable) << " min=" << cfg.grid.min
        << " max=" << cfg.grid.max << " count=" << cfg.grid.count << " spacing="
        << (cfg.grid.spacing == GridSpacing::Linear ? "linear" : "log")
        << " fixed_alpha=" << (cfg.fixed_alpha ? 1 : 0) << " variants=" << cfg.variants.size()
        << "\n";
    out << "# sampling: count=" << cfg.sample_count << " eta_sq=" << cfg.eta_sq << "\n";
    out << "# integrator: dt=" << cfg.integrator.dt << " order=" << cfg.integrator.order
        << " lamb_shift=" << (cfg.integrator.lamb_shift ? 1 : 0)
        << " positivity_abort=" << cfg.integrator.positivity_abort << "\n";
    for (const std::string& o : overrides) out << "# override: " << o << "\n";
    out << csv_columns() << "\n";
    std::ostringstream line;
    line << std::setprecision(17);
    for (const SweepRecord& r : records) {
        line.str("");
        line << r.sweep_value << ',' << r.temperature << ',' << r.t_over_omega << ',' << r.k1
             << ',' << r.k3 << ',' << r.t_ad_ps << ',' << r.alpha << ',' << r.gamma_plus << ','
             << r.gamma_minus << ',' << r.t_markov << ',' << r.tau_e << ',' << r.fidelity_mean
             << ',' << r.fidelity_min << ',' << r.fidelity_max << ',' << r.n_samples;
        out << line.str() << "\n";
    }
}

// JSON mirror of the CSV output.
inline void write_json(const std::vector<SweepRecord>& records, const SweepConfig& cfg,
                       const std::vector<std::string>& overrides, std::ostream& out) {
    nlohmann::json j;
    j["version"] = version_string();
    j["preset"] = cfg.preset_name;
    j["system"] = {{"epsilon", cfg.system.epsilon},
                   {"omega", cfg.system.omega},
                   {"t_ad", cfg.system.t_ad},
                   {"gate", gate_name(cfg.system.gate)}};
    j["bath"] = {{"kind", spectral_kind_name(cfg.bath.spectral.kind)},
                 {"k1", cfg.bath.spectral.k1},
                 {"k3", cfg.bath.spectral.k3},
                 {"omega_c", cfg.bath.spectral.omega_c},
                 {"temperature", cfg.bath.temperature}};
    j["sweep"] = {{"variable", sweep_variable_name(cfg.variable)},
                  {"min", cfg.grid.min},
                  {"max", cfg.grid.max},
                  {"count", cfg.grid.count},
                  {"fixed_alpha", cfg.fixed_alpha}};
    j["sampling"] = {{"count", cfg.sample_count}, {"eta_sq", cfg.eta_sq}};
    j["overrides"] = overrides;
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRecord& r : records) {
        rows.push_back({{"sweep_value", r.sweep_value},
                        {"T_meV", r.temperature},
                        {"T_over_Omega", r.t_over_omega},
                        {"k1", r.k1},
                        {"k3_per_meV2", r.k3},
                        {"t_ad_ps", r.t_ad_ps},
                        {"alpha", r.alpha},
                        {"gamma_plus_meV", r.gamma_plus},
                        {"gamma_minus_meV", r.gamma_minus},
                        {"T_M_meV", r.t_markov},
                        {"tau_E", r.tau_e},
                        {"fidelity_mean", r.fidelity_mean},
                        {"fidelity_min", r.fidelity_min},
                        {"fidelity_max", r.fidelity_max},
                        {"n_samples", r.n_samples}});
    }
    j["records"] = rows;
    out << j.dump(2) << "\n";
}

} // namespace holosim
