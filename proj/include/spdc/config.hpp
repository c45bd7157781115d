#pragma once

#include <string>

#include "spdc/biphoton.hpp"
#include "spdc/detection.hpp"
#include "spdc/optical_chain.hpp"

namespace spdc {

// Flat key = value scenario description; '#' starts a comment. Unknown keys
// and malformed values raise ConfigError with the line number.
struct ScenarioConfig {
    CrystalSpec crystal;
    double axis_angle_deg = 41.9;
    PumpMode pump;

    int grid_n = 512;
    double grid_q_max = 0;      // <= 0 means "auto"
    bool grid_q_max_auto = true;

    ApertureSpec aperture;
    double plane_scale_mm = 0;  // <= 0 means "auto" (10 mm per measured cone diameter)
    bool plane_scale_auto = true;
    DoubleSlitSpec slit;

    double pixel_halfwidth_cells = 1.0;
    double scan_y_min_um = -250.0;
    double scan_y_max_um = 250.0;
    double scan_y_step_um = 2.0;
    long noise_counts = 0;      // 0 = noise-free; else Poisson scale for rates
    double cuts_band_halfwidth = 0.004; // rad/um

    KzMode fidelity = KzMode::Exact;
    int workers = 0;            // 0 = library default
    std::string output_dir = "out";

    std::vector<double> scan_positions() const;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Canonical serialization: every key in a fixed order; parse(serialize(c))
// reproduces c exactly.
std::string serialize_config(const ScenarioConfig& cfg);

// Apply one "key=value" override (CLI --set).
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

} // namespace spdc
