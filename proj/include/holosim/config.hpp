// config.hpp — JSON run configuration: parsing, unit handling, overrides,
// presets.
//
// Layout (all sections optional, unknown keys rejected):
//   {
//     "system":     {"epsilon", "omega", "t_ad", "gate"},
//     "bath":       {"kind", "k1", "k3", "omega_c", "temperature"},
//     "sweep":      {"variable", "min", "max", "count", "spacing",
//                    "fixed_alpha", "alpha", "variants": [{"k1","k3","kind"}]},
//     "integrator": {"dt", "positivity_check_every", "positivity_floor",
//                    "positivity_abort", "lamb_shift", "window_factor", "window"},
//     "sampling":   {"count", "eta_sq"},
//     "output":     {"path", "format"}
//   }
// Energies are numbers in meV or strings with a unit ("1 eV", "0.5 meV");
// times are numbers in ps or strings ("7.5 ps"). t_ad sweep grids are in ps.

#pragma once

#include "holosim/sweep.hpp"

#include "json.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "holosim/presets_data.hpp"

namespace holosim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    SweepConfig sweep;
    std::string output_path = "sweep.csv";
    std::string format = "csv";
    std::vector<std::string> overrides;  // recorded --set strings
};

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
    }
}

// "1 eV" / "25 meV" / bare number (meV)
inline double parse_energy(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::istringstream ss(v.get<std::string>());
        double x;
        std::string unit;
        ss >> x >> unit;
        if (!ss.fail()) {
            if (unit == "meV" || unit.empty()) return x;
            if (unit == "eV") return 1000.0 * x;
        }
        throw ConfigError("config: cannot parse energy '" + v.get<std::string>() + "' at " + where);
    }
    throw ConfigError("config: energy at " + where + " must be a number or string");
}

// "7.5 ps" / bare number (ps); returns internal units
inline double parse_time(const json& v, const std::string& where) {
    if (v.is_number()) return time_from_ps(v.get<double>());
    if (v.is_string()) {
        std::istringstream ss(v.get<std::string>());
        double x;
        std::string unit;
        ss >> x >> unit;
        if (!ss.fail()) {
            if (unit == "ps" || unit.empty()) return time_from_ps(x);
        }
        throw ConfigError("config: cannot parse time '" + v.get<std::string>() + "' at " + where);
    }
    throw ConfigError("config: time at " + where + " must be a number or string");
}

inline Gate parse_gate(const json& v) {
    const std::string s = v.get<std::string>();
    if (s == "gate1" || s == "1") return Gate::One;
    if (s == "gate2" || s == "2") return Gate::Two;
    throw ConfigError("config: unknown gate '" + s + "'");
}

inline SpectralKind parse_kind(const json& v) {
    const std::string s = v.get<std::string>();
    if (s == "ohmic") return SpectralKind::Ohmic;
    if (s == "superohmic") return SpectralKind::Superohmic;
    if (s == "mixed") return SpectralKind::Mixed;
    throw ConfigError("config: unknown bath kind '" + s + "'");
}

inline SweepVariable parse_variable(const json& v) {
    const std::string s = v.get<std::string>();
    if (s == "T" || s == "temperature") return SweepVariable::Temperature;
    if (s == "k1") return SweepVariable::K1;
    if (s == "k3") return SweepVariable::K3;
    if (s == "t_ad") return SweepVariable::AdiabaticTime;
    throw ConfigError("config: unknown sweep variable '" + s + "'");
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::require_keys;
    RunConfig rc;
    require_keys(j, {"system", "bath", "sweep", "integrator", "sampling", "output"}, "<root>");

    if (j.contains("system")) {
        const auto& s = j["system"];
        require_keys(s, {"epsilon", "omega", "t_ad", "gate"}, "system");
        if (s.contains("epsilon")) rc.sweep.system.epsilon = detail::parse_energy(s["epsilon"], "system.epsilon");
        if (s.contains("omega")) rc.sweep.system.omega = detail::parse_energy(s["omega"], "system.omega");
        if (s.contains("t_ad")) rc.sweep.system.t_ad = detail::parse_time(s["t_ad"], "system.t_ad");
        if (s.contains("gate")) rc.sweep.system.gate = detail::parse_gate(s["gate"]);
    }
    if (j.contains("bath")) {
        const auto& b = j["bath"];
        require_keys(b, {"kind", "k1", "k3", "omega_c", "temperature"}, "bath");
        if (b.contains("kind")) rc.sweep.bath.spectral.kind = detail::parse_kind(b["kind"]);
        if (b.contains("k1")) rc.sweep.bath.spectral.k1 = b["k1"].get<double>();
        if (b.contains("k3")) rc.sweep.bath.spectral.k3 = b["k3"].get<double>();
        if (b.contains("omega_c"))
            rc.sweep.bath.spectral.omega_c = detail::parse_energy(b["omega_c"], "bath.omega_c");
        if (b.contains("temperature"))
            rc.sweep.bath.temperature = detail::parse_energy(b["temperature"], "bath.temperature");
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        require_keys(s, {"variable", "min", "max", "count", "spacing", "fixed_alpha", "alpha",
                         "variants"},
                     "sweep");
        if (s.contains("variable")) rc.sweep.variable = detail::parse_variable(s["variable"]);
        if (s.contains("min")) rc.sweep.grid.min = s["min"].get<double>();
        if (s.contains("max")) rc.sweep.grid.max = s["max"].get<double>();
        if (s.contains("count")) rc.sweep.grid.count = s["count"].get<int>();
        if (s.contains("spacing")) {
            const std::string sp = s["spacing"].get<std::string>();
            if (sp == "linear") rc.sweep.grid.spacing = GridSpacing::Linear;
            else if (sp == "log") rc.sweep.grid.spacing = GridSpacing::Log;
            else throw ConfigError("config: unknown spacing '" + sp + "'");
        }
        if (s.contains("fixed_alpha")) rc.sweep.fixed_alpha = s["fixed_alpha"].get<bool>();
        if (s.contains("alpha")) rc.sweep.alpha = s["alpha"].get<double>();
        if (s.contains("variants")) {
            for (const auto& v : s["variants"]) {
                require_keys(v, {"k1", "k3", "kind", "label", "temperature"}, "sweep.variants[]");
                BathVariant bv;
                if (v.contains("k1")) bv.k1 = v["k1"].get<double>();
                if (v.contains("k3")) bv.k3 = v["k3"].get<double>();
                if (v.contains("kind")) bv.kind = detail::parse_kind(v["kind"]);
                if (v.contains("temperature"))
                    bv.temperature = detail::parse_energy(v["temperature"], "variants.temperature");
                if (v.contains("label")) bv.label = v["label"].get<std::string>();
                rc.sweep.variants.push_back(std::move(bv));
            }
        }
    }
    if (j.contains("integrator")) {
        const auto& s = j["integrator"];
        require_keys(s, {"dt", "positivity_check_every", "positivity_floor", "positivity_abort",
                         "lamb_shift", "window_factor", "window"},
                     "integrator");
        auto& ic = rc.sweep.integrator;
        if (s.contains("dt")) ic.dt = s["dt"].get<double>();
        if (s.contains("positivity_check_every"))
            ic.positivity_check_every = s["positivity_check_every"].get<int>();
        if (s.contains("positivity_floor")) ic.positivity_floor = s["positivity_floor"].get<double>();
        if (s.contains("positivity_abort")) ic.positivity_abort = s["positivity_abort"].get<double>();
        if (s.contains("lamb_shift")) ic.lamb_shift = s["lamb_shift"].get<bool>();
        if (s.contains("window_factor")) ic.window_factor = s["window_factor"].get<double>();
        if (s.contains("window")) ic.window = s["window"].get<double>();
    }
    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        require_keys(s, {"count", "eta_sq"}, "sampling");
        if (s.contains("count")) rc.sweep.sample_count = s["count"].get<int>();
        if (s.contains("eta_sq")) rc.sweep.eta_sq = s["eta_sq"].get<double>();
    }
    if (j.contains("output")) {
        const auto& s = j["output"];
        require_keys(s, {"path", "format"}, "output");
        if (s.contains("path")) rc.output_path = s["path"].get<std::string>();
        if (s.contains("format")) {
            rc.format = s["format"].get<std::string>();
            if (rc.format != "csv" && rc.format != "json")
                throw ConfigError("config: output.format must be csv or json");
        }
    }
    return rc;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config: parse failure in '" + path + "': " + e.what());
    }
    return j;
}

inline nlohmann::json load_preset(const std::string& name) {
    const auto& table = presets::table();
    auto it = table.find(name);
    if (it == table.end()) {
        std::string names;
        for (const auto& [k, v] : table) names += (names.empty() ? "" : ", ") + k;
        throw ConfigError("config: unknown preset '" + name + "' (available: " + names + ")");
    }
    return nlohmann::json::parse(it->second);
}

// Applies a dotted-path override "a.b.c=value"; the value is parsed as JSON
// when possible and kept as a string otherwise.
inline void apply_override(nlohmann::json& j, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects KEY=VALUE, got '" + spec + "'");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    nlohmann::json* node = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("--set: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            try {
                (*node)[key] = nlohmann::json::parse(value);
            } catch (...) {
                (*node)[key] = value;
            }
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

} // namespace holosim
