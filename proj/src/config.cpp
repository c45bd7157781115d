#include "spdc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
    }
}

SellmeierSet parse_sellmeier(const std::string& v, int line) {
    std::istringstream ss(v);
    SellmeierSet s;
    if (!(ss >> s.a >> s.b >> s.c >> s.d >> s.lambda_min_um >> s.lambda_max_um))
        throw ConfigError("line " + std::to_string(line) +
                          ": Sellmeier set needs six numbers (a b c d lambda_min lambda_max)");
    std::string rest;
    if (ss >> rest)
        throw ConfigError("line " + std::to_string(line) + ": trailing tokens in Sellmeier set");
    return s;
}

std::string fmt_sellmeier(const SellmeierSet& s) {
    return fmt(s.a) + " " + fmt(s.b) + " " + fmt(s.c) + " " + fmt(s.d) + " " +
           fmt(s.lambda_min_um) + " " + fmt(s.lambda_max_um);
}

} // namespace

std::vector<double> ScenarioConfig::scan_positions() const {
    if (!(scan_y_step_um > 0)) throw ConfigError("scan.y_step_um must be > 0");
    if (!(scan_y_max_um >= scan_y_min_um)) throw ConfigError("scan range is empty");
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((scan_y_max_um - scan_y_min_um) /
                                                  scan_y_step_um + 0.5)) + 1;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(scan_y_min_um + i * scan_y_step_um);
    return out;
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        apply_override(cfg, key + "=" + val + "\x01" + std::to_string(lineno));
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    // internal form appends "\x01<lineno>" for line-precise messages
    int line = 0;
    std::string body = assignment;
    const size_t mark = body.find('\x01');
    if (mark != std::string::npos) {
        line = std::stoi(body.substr(mark + 1));
        body = body.substr(0, mark);
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + body);
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));

    auto bad_value = [&](const std::string& allowed) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': invalid value '" + val + "' (allowed: " + allowed + ")");
    };

    if (key == "crystal.length_um") cfg.crystal.length_um = parse_double(val, line);
    else if (key == "crystal.axis_angle_deg") {
        cfg.axis_angle_deg = parse_double(val, line);
        cfg.crystal.axis_angle_rad = cfg.axis_angle_deg * kPi / 180.0;
    } else if (key == "crystal.pump_wavelength_um") cfg.crystal.lambda_pump_um = parse_double(val, line);
    else if (key == "crystal.signal_wavelength_um") cfg.crystal.lambda_signal_um = parse_double(val, line);
    else if (key == "crystal.idler_wavelength_um") cfg.crystal.lambda_idler_um = parse_double(val, line);
    else if (key == "crystal.signal_polarization") {
        if (val == "ordinary") cfg.crystal.signal_pol = Polarization::Ordinary;
        else if (val == "extraordinary") cfg.crystal.signal_pol = Polarization::Extraordinary;
        else bad_value("ordinary|extraordinary");
    } else if (key == "crystal.sellmeier_source") cfg.crystal.sellmeier_source = val;
    else if (key == "crystal.sellmeier_ordinary") cfg.crystal.ordinary = parse_sellmeier(val, line);
    else if (key == "crystal.sellmeier_extraordinary") cfg.crystal.extraordinary = parse_sellmeier(val, line);
    else if (key == "pump.order_x") cfg.pump.order_x = static_cast<int>(parse_long(val, line));
    else if (key == "pump.order_y") cfg.pump.order_y = static_cast<int>(parse_long(val, line));
    else if (key == "pump.waist_um") cfg.pump.waist_um = parse_double(val, line);
    else if (key == "pump.center_x_um") cfg.pump.center_x_um = parse_double(val, line);
    else if (key == "pump.center_y_um") cfg.pump.center_y_um = parse_double(val, line);
    else if (key == "grid.n") cfg.grid_n = static_cast<int>(parse_long(val, line));
    else if (key == "grid.q_max") {
        if (val == "auto") { cfg.grid_q_max_auto = true; cfg.grid_q_max = 0; }
        else { cfg.grid_q_max_auto = false; cfg.grid_q_max = parse_double(val, line); }
    } else if (key == "chain.aperture.shape") {
        if (val == "none") cfg.aperture.shape = ApertureShape::None;
        else if (val == "vertical-slit") cfg.aperture.shape = ApertureShape::VerticalSlit;
        else if (val == "inverse-slit") cfg.aperture.shape = ApertureShape::InverseSlit;
        else if (val == "circle") cfg.aperture.shape = ApertureShape::Circle;
        else bad_value("none|vertical-slit|inverse-slit|circle");
    } else if (key == "chain.aperture.units") {
        if (val == "relative") cfg.aperture.units = ApertureUnits::Relative;
        else if (val == "mm") cfg.aperture.units = ApertureUnits::Millimeters;
        else bad_value("relative|mm");
    } else if (key == "chain.aperture.size") cfg.aperture.size = parse_double(val, line);
    else if (key == "chain.aperture.center_x") cfg.aperture.center_x = parse_double(val, line);
    else if (key == "chain.aperture.center_y") cfg.aperture.center_y = parse_double(val, line);
    else if (key == "chain.aperture.arm") {
        if (val == "signal") cfg.aperture.arm = ApertureArm::Signal;
        else if (val == "idler") cfg.aperture.arm = ApertureArm::Idler;
        else if (val == "both") cfg.aperture.arm = ApertureArm::Both;
        else bad_value("signal|idler|both");
    } else if (key == "chain.plane_scale_mm") {
        if (val == "auto") { cfg.plane_scale_auto = true; cfg.plane_scale_mm = 0; }
        else { cfg.plane_scale_auto = false; cfg.plane_scale_mm = parse_double(val, line); }
    } else if (key == "chain.slit.width_um") cfg.slit.width_um = parse_double(val, line);
    else if (key == "chain.slit.separation_um") cfg.slit.separation_um = parse_double(val, line);
    else if (key == "chain.slit.offset_um") cfg.slit.offset_um = parse_double(val, line);
    else if (key == "detector.pixel_halfwidth_cells") cfg.pixel_halfwidth_cells = parse_double(val, line);
    else if (key == "scan.y_min_um") cfg.scan_y_min_um = parse_double(val, line);
    else if (key == "scan.y_max_um") cfg.scan_y_max_um = parse_double(val, line);
    else if (key == "scan.y_step_um") cfg.scan_y_step_um = parse_double(val, line);
    else if (key == "scan.noise_counts") cfg.noise_counts = parse_long(val, line);
    else if (key == "cuts.band_halfwidth") cfg.cuts_band_halfwidth = parse_double(val, line);
    else if (key == "run.fidelity") {
        if (val == "exact") cfg.fidelity = KzMode::Exact;
        else if (val == "fast") cfg.fidelity = KzMode::Fast;
        else bad_value("exact|fast");
    } else if (key == "run.workers") cfg.workers = static_cast<int>(parse_long(val, line));
    else if (key == "output.dir") cfg.output_dir = val;
    else
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream o;
    o << "crystal.length_um = " << fmt(cfg.crystal.length_um) << "\n";
    o << "crystal.axis_angle_deg = " << fmt(cfg.axis_angle_deg) << "\n";
    o << "crystal.pump_wavelength_um = " << fmt(cfg.crystal.lambda_pump_um) << "\n";
    o << "crystal.signal_wavelength_um = " << fmt(cfg.crystal.lambda_signal_um) << "\n";
    o << "crystal.idler_wavelength_um = " << fmt(cfg.crystal.lambda_idler_um) << "\n";
    o << "crystal.signal_polarization = "
      << (cfg.crystal.signal_pol == Polarization::Ordinary ? "ordinary" : "extraordinary") << "\n";
    o << "crystal.sellmeier_source = " << cfg.crystal.sellmeier_source << "\n";
    o << "crystal.sellmeier_ordinary = " << fmt_sellmeier(cfg.crystal.ordinary) << "\n";
    o << "crystal.sellmeier_extraordinary = " << fmt_sellmeier(cfg.crystal.extraordinary) << "\n";
    o << "pump.order_x = " << cfg.pump.order_x << "\n";
    o << "pump.order_y = " << cfg.pump.order_y << "\n";
    o << "pump.waist_um = " << fmt(cfg.pump.waist_um) << "\n";
    o << "pump.center_x_um = " << fmt(cfg.pump.center_x_um) << "\n";
    o << "pump.center_y_um = " << fmt(cfg.pump.center_y_um) << "\n";
    o << "grid.n = " << cfg.grid_n << "\n";
    o << "grid.q_max = " << (cfg.grid_q_max_auto ? std::string("auto") : fmt(cfg.grid_q_max)) << "\n";
    o << "chain.aperture.shape = ";
    switch (cfg.aperture.shape) {
        case ApertureShape::None: o << "none"; break;
        case ApertureShape::VerticalSlit: o << "vertical-slit"; break;
        case ApertureShape::InverseSlit: o << "inverse-slit"; break;
        case ApertureShape::Circle: o << "circle"; break;
    }
    o << "\n";
    o << "chain.aperture.units = "
      << (cfg.aperture.units == ApertureUnits::Relative ? "relative" : "mm") << "\n";
    o << "chain.aperture.size = " << fmt(cfg.aperture.size) << "\n";
    o << "chain.aperture.center_x = " << fmt(cfg.aperture.center_x) << "\n";
    o << "chain.aperture.center_y = " << fmt(cfg.aperture.center_y) << "\n";
    o << "chain.aperture.arm = ";
    switch (cfg.aperture.arm) {
        case ApertureArm::Signal: o << "signal"; break;
        case ApertureArm::Idler: o << "idler"; break;
        case ApertureArm::Both: o << "both"; break;
    }
    o << "\n";
    o << "chain.plane_scale_mm = "
      << (cfg.plane_scale_auto ? std::string("auto") : fmt(cfg.plane_scale_mm)) << "\n";
    o << "chain.slit.width_um = " << fmt(cfg.slit.width_um) << "\n";
    o << "chain.slit.separation_um = " << fmt(cfg.slit.separation_um) << "\n";
    o << "chain.slit.offset_um = " << fmt(cfg.slit.offset_um) << "\n";
    o << "detector.pixel_halfwidth_cells = " << fmt(cfg.pixel_halfwidth_cells) << "\n";
    o << "scan.y_min_um = " << fmt(cfg.scan_y_min_um) << "\n";
    o << "scan.y_max_um = " << fmt(cfg.scan_y_max_um) << "\n";
    o << "scan.y_step_um = " << fmt(cfg.scan_y_step_um) << "\n";
    o << "scan.noise_counts = " << cfg.noise_counts << "\n";
    o << "cuts.band_halfwidth = " << fmt(cfg.cuts_band_halfwidth) << "\n";
    o << "run.fidelity = " << (cfg.fidelity == KzMode::Exact ? "exact" : "fast") << "\n";
    o << "run.workers = " << cfg.workers << "\n";
    o << "output.dir = " << cfg.output_dir << "\n";
    return o.str();
}

} // namespace spdc
