// Command-line front end: scenario subcommands around the simulation library.
// Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "spdc/scenarios.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int workers = -1;
    bool fast = false;
    int grid_n = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "configuration file (key = value)");
    cmd->add_option("--out", o.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--workers", o.workers, "worker threads (0 = library default)");
    cmd->add_flag("--fast", o.fast, "paraxial extraordinary-index mode");
    cmd->add_option("--grid", o.grid_n, "samples per axis (power of two >= 32)");
    cmd->add_option("--set", o.overrides, "extra key=value overrides")->take_all();
}

spdc::ScenarioConfig build_config(const CommonOpts& o) {
    spdc::ScenarioConfig cfg;
    if (!o.config_path.empty()) cfg = spdc::load_config_file(o.config_path);
    for (const std::string& s : o.overrides) spdc::apply_override(cfg, s);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.workers >= 0) cfg.workers = o.workers;
    if (o.fast) cfg.fidelity = spdc::KzMode::Fast;
    if (o.grid_n > 0) cfg.grid_n = o.grid_n;
    return cfg;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon double-slit complementarity simulator"};
    app.require_subcommand(1);

    CommonOpts ring_o, curves_o, cuts_o, vd_o, near_o, val_o;
    auto* c_ring = app.add_subcommand("ring", "2-D singles maps with vertical/radial cuts");
    auto* c_curves = app.add_subcommand("curves", "phase-matching loci and pump-line overlay");
    auto* c_cuts = app.add_subcommand("cuts", "tomographic cuts through the curve crossings");
    auto* c_vd = app.add_subcommand("vd", "visibility/distinguishability scan over idler position");
    auto* c_near = app.add_subcommand("nearfield", "slit-plane singles intensity");
    auto* c_val = app.add_subcommand("validate", "check and echo the resolved configuration");
    add_common(c_ring, ring_o);
    add_common(c_curves, curves_o);
    add_common(c_cuts, cuts_o);
    add_common(c_vd, vd_o);
    add_common(c_near, near_o);
    add_common(c_val, val_o);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = Clock::now();
        if (c_ring->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(ring_o));
            const auto out = spdc::run_ring(rs);
            auto files = spdc::write_ring(rs, out, rs.cfg.output_dir);
            spdc::write_manifest(rs, rs.cfg.output_dir, seconds_since(t0), files);
            std::cout << "ring: upper_peaks=" << out.upper_peaks
                      << " lower_peaks=" << out.lower_peaks
                      << " cone_diameter=" << out.cone.diameter << " rad/um\n";
        } else if (c_curves->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(curves_o));
            const auto out = spdc::run_curves(rs);
            auto files = spdc::write_curves(rs, out, rs.cfg.output_dir);
            spdc::write_manifest(rs, rs.cfg.output_dir, seconds_since(t0), files);
            std::cout << "curves: branches=" << out.curves.size()
                      << " regions=" << out.regions.size()
                      << " slope_ratio=" << out.slope_ratio << "\n";
        } else if (c_cuts->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(cuts_o));
            const auto out = spdc::run_cuts(rs);
            auto files = spdc::write_cuts(rs, out, rs.cfg.output_dir);
            spdc::write_manifest(rs, rs.cfg.output_dir, seconds_since(t0), files);
            std::cout << "cuts: upper_peaks=" << out.upper_peaks
                      << " lower_peaks=" << out.lower_peaks << "\n";
        } else if (c_vd->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(vd_o));
            const auto out = spdc::run_vd(rs);
            auto files = spdc::write_vd(rs, out, rs.cfg.output_dir);
            spdc::write_manifest(rs, rs.cfg.output_dir, seconds_since(t0), files);
            std::cout << "vd: points=" << out.scan.points.size()
                      << " undefined=" << out.undefined_points
                      << " max_v2d2=" << out.max_v2d2
                      << " max_v2d2_ideal=" << out.max_v2d2_ideal << "\n";
        } else if (c_near->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(near_o));
            const auto out = spdc::run_nearfield(rs);
            auto files = spdc::write_nearfield(rs, out, rs.cfg.output_dir);
            spdc::write_manifest(rs, rs.cfg.output_dir, seconds_since(t0), files);
            std::cout << "nearfield: peaks=" << out.peak_positions_um.size() << "\n";
        } else if (c_val->parsed()) {
            const auto rs = spdc::resolve_scenario(build_config(val_o));
            std::cout << rs.config_text();
            std::cout << "# resolved: ring_edge=" << rs.ring_edge
                      << " rad/um, hash=" << rs.scenario_hash() << "\n";
        }
    } catch (const spdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const spdc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
