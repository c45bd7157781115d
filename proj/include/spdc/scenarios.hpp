#pragma once

#include <optional>
#include <string>

#include "spdc/config.hpp"
#include "spdc/output.hpp"

namespace spdc {

struct ResolvedScenario {
    ScenarioConfig cfg;   // auto grid.q_max replaced by its numeric value
    GridSpec grid;
    double ring_edge = 0; // outer edge of the phase-matching band (rad/um)

    std::string config_text() const { return serialize_config(cfg); }
    std::string scenario_hash() const { return fnv1a64_hex(config_text()); }
};

// Validates the configuration, resolves the automatic grid extent
// (1.2 x ring edge; explicit values must still cover the emission ring with
// a 15% margin) and applies the worker-count setting.
ResolvedScenario resolve_scenario(ScenarioConfig cfg);

// Shared 1-D working set: normalized joint amplitude, measured cones and the
// per-arm aperture masks of the configured chain.
struct Workspace1D {
    BiphotonAmplitude1D amp;
    ConeMeasurement cone_signal, cone_idler;
    double plane_scale_mm = 0; // resolved (10 mm per signal cone diameter if auto)
    Chain1D chain;
};
Workspace1D build_workspace_1d(const ResolvedScenario& rs);

struct VdOutput {
    ScanResult scan;
    ConeMeasurement cone_signal, cone_idler;
    double max_v2d2 = 0;        // Eq.-2 extrema column
    double max_v2d2_ideal = 0;  // overlap column
    int undefined_points = 0;
    std::optional<std::pair<double, double>> equality_band; // v2d2_ideal >= 0.95
};
VdOutput run_vd(const ResolvedScenario& rs);

struct RingOutput {
    GridSpec grid;
    std::vector<double> map_signal, map_idler;
    ConeMeasurement cone;          // from the signal map
    std::vector<double> vertical_cut; // q_x ~ 0 column of the signal map
    std::vector<double> radial_profile;
    int upper_peaks = 0, lower_peaks = 0; // 10% prominence per half
};
RingOutput run_ring(const ResolvedScenario& rs);

struct CrossingRegion {
    double q_sy = 0, q_iy = 0; // mean crossing location
    double slope = 0;          // mean dq_iy/dq_sy
};

struct CurvesOutput {
    std::vector<Polyline> curves;
    double pump_hump_sum = 0;  // |u|^2 maximum of the pump sum profile (0 for HG00)
    std::vector<CrossingRegion> regions; // sorted by q_sy ascending
    double slope_ratio = 0;    // max |slope| / min |slope| over regions
};
CurvesOutput run_curves(const ResolvedScenario& rs);

struct CutsOutput {
    std::vector<double> q;                 // q_sy axis
    std::vector<double> upper_cut, lower_cut;
    double upper_band_lo = 0, upper_band_hi = 0;
    double lower_band_lo = 0, lower_band_hi = 0;
    int upper_peaks = 0, lower_peaks = 0;  // 10% prominence
};
CutsOutput run_cuts(const ResolvedScenario& rs);

struct NearfieldOutput {
    std::vector<double> y, intensity;      // slit-plane singles
    std::vector<double> q, farfield;       // behind-the-slit far-field singles
    std::vector<double> peak_positions_um; // 10% prominence peaks of the near field
};
NearfieldOutput run_nearfield(const ResolvedScenario& rs);

// Writers: plot-ready CSV/PGM/JSON plus a RunManifest. Each returns the list
// of files written (relative to dir).
std::vector<std::string> write_vd(const ResolvedScenario& rs, const VdOutput& out, const std::string& dir);
std::vector<std::string> write_ring(const ResolvedScenario& rs, const RingOutput& out, const std::string& dir);
std::vector<std::string> write_curves(const ResolvedScenario& rs, const CurvesOutput& out, const std::string& dir);
std::vector<std::string> write_cuts(const ResolvedScenario& rs, const CutsOutput& out, const std::string& dir);
std::vector<std::string> write_nearfield(const ResolvedScenario& rs, const NearfieldOutput& out, const std::string& dir);

void write_manifest(const ResolvedScenario& rs, const std::string& dir,
                    double elapsed_seconds, const std::vector<std::string>& files);

} // namespace spdc
