// simulate — sweep driver for the holonomic-gate simulator.
//
// Examples:
//   simulate --preset fig1
//   simulate --config run.json --set bath.k3=0.05 --jobs 4 --out out.csv

#include "holosim/config.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

int run(int argc, char** argv) {
    CLI::App app{"holonomic gate fidelity sweeps"};
    std::string config_path, preset, out_path, format;
    std::vector<std::string> overrides;
    int jobs = 1;
    bool list_presets = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--preset", preset, "built-in preset name (fig1, fig1_inset, fig2, fig3, fig3_inset)");
    app.add_option("--set", overrides, "dotted-path override KEY=VALUE (repeatable)");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "output path (overrides config)");
    app.add_option("--format", format, "csv|json (overrides config)");
    app.add_flag("--list-presets", list_presets, "list preset names and exit");
    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const auto& [name, text] : holosim::presets::table()) std::cout << name << "\n";
        return 0;
    }
    if (config_path.empty() && preset.empty()) {
        std::cerr << "error: one of --config or --preset is required\n";
        return 2;
    }

    nlohmann::json j;
    if (!preset.empty()) j = holosim::load_preset(preset);
    if (!config_path.empty()) j = holosim::load_json_file(config_path);
    for (const std::string& o : overrides) holosim::apply_override(j, o);

    holosim::RunConfig rc = holosim::parse_config(j);
    rc.overrides = overrides;
    rc.sweep.preset_name = preset;
    if (!out_path.empty()) rc.output_path = out_path;
    if (!format.empty()) {
        if (format != "csv" && format != "json") {
            std::cerr << "error: --format must be csv or json\n";
            return 2;
        }
        rc.format = format;
    }
    rc.sweep.validate();
    for (const std::string& w : rc.sweep.system.validate()) std::cerr << "warning: " << w << "\n";

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<holosim::SweepRecord> records = holosim::run_sweep(rc.sweep, jobs);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // atomic write: temp file in the target directory, then rename
    const std::filesystem::path target(rc.output_path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write '" << tmp.string() << "'\n";
            return 2;
        }
        if (rc.format == "csv")
            holosim::write_csv(records, rc.sweep, overrides, out);
        else
            holosim::write_json(records, rc.sweep, overrides, out);
    }
    std::filesystem::rename(tmp, target);

    std::cout << "# " << records.size() << " records -> " << target.string() << "  ("
              << elapsed << " s)\n";
    std::cout << "sweep_value  T/Omega    F_mean      F_min       F_max\n";
    for (const auto& r : records) {
        std::printf("%-12.5g %-10.4g %-11.8f %-11.8f %-11.8f\n", r.sweep_value, r.t_over_omega,
                    r.fidelity_mean, r.fidelity_min, r.fidelity_max);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const holosim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
