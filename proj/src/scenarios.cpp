#include "spdc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>
#include <omp.h>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr const char* kDeterminism = "bit-stable: fixed-order per-pixel reductions";
} // namespace

ResolvedScenario resolve_scenario(ScenarioConfig cfg) {
    cfg.crystal.validate();
    cfg.pump.validate();
    if (cfg.noise_counts < 0) throw ConfigError("scan.noise_counts must be >= 0");
    if (cfg.pixel_halfwidth_cells < 1.0)
        throw ConfigError("detector pixel half-width must be at least one grid cell");
    if (cfg.workers < 0) throw ConfigError("run.workers must be >= 0");
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

    ResolvedScenario rs;
    rs.ring_edge = ring_outer_edge(cfg.crystal);
    if (cfg.grid_q_max_auto) {
        cfg.grid_q_max = 1.2 * rs.ring_edge;
        cfg.grid_q_max_auto = false;
    }
    const auto roots = antidiagonal_ring_roots(cfg.crystal);
    double ring_radius = 0;
    for (double r : roots) ring_radius = std::max(ring_radius, std::abs(r));
    if (cfg.grid_q_max < 1.15 * ring_radius)
        throw ConfigError("grid.q_max must cover the emission ring with a 15% margin (need >= " +
                          std::to_string(1.15 * ring_radius) + ")");
    rs.grid = GridSpec{cfg.grid_n, cfg.grid_q_max};
    rs.grid.validate();
    rs.cfg = std::move(cfg);
    return rs;
}

Workspace1D build_workspace_1d(const ResolvedScenario& rs) {
    Workspace1D w;
    w.amp = build_1d_amplitude(rs.grid, rs.cfg.pump, rs.cfg.crystal,
                               PhaseMatchModel::Exact, rs.cfg.fidelity);
    // cones from the unmasked marginals
    w.cone_signal = measure_cone_1d(singles_marginal(w.amp, Arm::Signal), w.amp.axis);
    w.cone_idler = measure_cone_1d(singles_marginal(w.amp, Arm::Idler), w.amp.axis);
    w.plane_scale_mm = rs.cfg.plane_scale_auto ? 10.0 / w.cone_signal.diameter
                                               : rs.cfg.plane_scale_mm;

    const ApertureSpec& ap = rs.cfg.aperture;
    if (ap.shape != ApertureShape::None) {
        if (ap.arm != ApertureArm::Idler)
            w.chain.signal_mask = aperture_mask_1d(ap, w.amp.axis, w.cone_signal, w.plane_scale_mm);
        if (ap.arm != ApertureArm::Signal)
            w.chain.idler_mask = aperture_mask_1d(ap, w.amp.axis, w.cone_idler, w.plane_scale_mm);
    }
    w.chain.slit = rs.cfg.slit;
    w.chain.pixel_halfwidth_cells = rs.cfg.pixel_halfwidth_cells;
    return w;
}

namespace {

// Optional Poisson noise layer on count-rate quantities; deterministic per
// (config, position). Excluded from acceptance runs (noise_counts = 0).
void poissonize(std::vector<double>& rates, double scale, std::mt19937_64& rng) {
    for (double& r : rates) {
        if (!(r > 0)) continue;
        std::poisson_distribution<long long> d(r * scale);
        r = static_cast<double>(d(rng)) / scale;
    }
}

} // namespace

VdOutput run_vd(const ResolvedScenario& rs) {
    const double fringe_period = 2.0 * kPi / rs.cfg.slit.separation_um;
    if (fringe_period < 4.0 * rs.grid.axis().dq())
        throw ConfigError("grid too coarse to resolve the double-slit fringe; increase grid.n");
    const Workspace1D w = build_workspace_1d(rs);
    const std::vector<double> positions = rs.cfg.scan_positions();

    VdOutput out;
    out.cone_signal = w.cone_signal;
    out.cone_idler = w.cone_idler;
    out.scan.points.resize(positions.size());

    const bool noisy = rs.cfg.noise_counts > 0;
    const uint64_t seed_base = fnv1a64(rs.config_text().data(), rs.config_text().size());

    #pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < static_cast<int>(positions.size()); ++t) {
        ScanPoint p;
        p.y_i_um = positions[t];
        try {
            ChainPointResult r = evaluate_chain_point_1d(p.y_i_um, w.amp, w.chain);
            if (noisy) {
                std::mt19937_64 rng(seed_base ^ (0x9e3779b97f4a7c15ull * (t + 1)));
                std::vector<double> cs{r.c_s1, r.c_s2};
                const double scale = static_cast<double>(rs.cfg.noise_counts);
                poissonize(cs, scale, rng);
                poissonize(r.fringe.rate, scale, rng);
                r.c_s1 = cs[0];
                r.c_s2 = cs[1];
                r.v_extrema = visibility(r.fringe);
            }
            p.c_s1 = r.c_s1;
            p.c_s2 = r.c_s2;
            if (r.c_s1 + r.c_s2 > 0) {
                p.defined = true;
                p.d_signed = distinguishability(r.c_s1, r.c_s2);
                p.v = r.v_extrema;
                p.v_ideal = r.v_overlap;
            }
        } catch (const NumericalError&) {
            p.defined = false;
        }
        out.scan.points[t] = p;
    }

    double best_e = 0, best_i = 0;
    for (const ScanPoint& p : out.scan.points) {
        if (!p.defined) { ++out.undefined_points; continue; }
        best_e = std::max(best_e, p.v2d2());
        best_i = std::max(best_i, p.v2d2_ideal());
    }
    out.max_v2d2 = best_e;
    out.max_v2d2_ideal = best_i;

    // longest contiguous band with v2d2_ideal >= 0.95
    int run_start = -1, best_lo = -1, best_hi = -2;
    for (int i = 0; i <= static_cast<int>(out.scan.points.size()); ++i) {
        const bool on = i < static_cast<int>(out.scan.points.size()) &&
                        out.scan.points[i].defined &&
                        out.scan.points[i].v2d2_ideal() >= 0.95;
        if (on && run_start < 0) run_start = i;
        if (!on && run_start >= 0) {
            if (i - 1 - run_start > best_hi - best_lo) { best_lo = run_start; best_hi = i - 1; }
            run_start = -1;
        }
    }
    if (best_hi >= best_lo && best_lo >= 0)
        out.equality_band = {out.scan.points[best_lo].y_i_um, out.scan.points[best_hi].y_i_um};
    return out;
}

RingOutput run_ring(const ResolvedScenario& rs) {
    RingOutput out;
    out.grid = rs.grid;
    const auto& cfg = rs.cfg;

    std::vector<double> mask;
    if (cfg.aperture.shape != ApertureShape::None) {
        // relative mode measures the cone on an unmasked signal map first
        std::optional<ConeMeasurement> cone;
        double plane_scale = cfg.plane_scale_mm;
        if (cfg.aperture.units == ApertureUnits::Relative || cfg.plane_scale_auto) {
            const std::vector<double> bare =
                singles_map_2d(Arm::Signal, {}, {}, rs.grid, cfg.pump, cfg.crystal, cfg.fidelity);
            cone = measure_cone_diameter(bare, rs.grid.axis(), rs.grid.axis());
            if (cfg.plane_scale_auto) plane_scale = 10.0 / cone->diameter;
        }
        mask = aperture_mask(cfg.aperture, rs.grid.axis(), rs.grid.axis(), cone, plane_scale);
    }
    const std::vector<double> empty;
    const std::vector<double>& ms = cfg.aperture.arm != ApertureArm::Idler ? mask : empty;
    const std::vector<double>& mi = cfg.aperture.arm != ApertureArm::Signal ? mask : empty;

    out.map_signal = singles_map_2d(Arm::Signal, ms, mi, rs.grid, cfg.pump, cfg.crystal, cfg.fidelity);
    out.map_idler = singles_map_2d(Arm::Idler, ms, mi, rs.grid, cfg.pump, cfg.crystal, cfg.fidelity);
    out.cone = measure_cone_diameter(out.map_signal, rs.grid.axis(), rs.grid.axis());

    // vertical cut at q_x ~ 0 of the signal map, split at the ring center
    const GridAxis axis = rs.grid.axis();
    const int ix0 = axis.index_of_q(0.0);
    out.vertical_cut.resize(axis.n);
    for (int iy = 0; iy < axis.n; ++iy)
        out.vertical_cut[iy] = out.map_signal[static_cast<size_t>(ix0) * axis.n + iy];

    const int split = axis.index_of_q(out.cone.center_qy);
    std::vector<double> lower(out.vertical_cut.begin(), out.vertical_cut.begin() + split);
    std::vector<double> upper(out.vertical_cut.begin() + split, out.vertical_cut.end());
    out.upper_peaks = static_cast<int>(find_peaks(upper, 0.10).size());
    out.lower_peaks = static_cast<int>(find_peaks(lower, 0.10).size());

    // radial profile about the centroid (one cell per bin)
    const double dr = axis.dq();
    const int nbins = static_cast<int>(std::hypot(2 * axis.q_max, 2 * axis.q_max) / dr) + 1;
    out.radial_profile.assign(nbins, 0.0);
    std::vector<double> cnt(nbins, 0.0);
    for (int ix = 0; ix < axis.n; ++ix)
        for (int iy = 0; iy < axis.n; ++iy) {
            const double r = std::hypot(axis.q(ix) - out.cone.center_qx,
                                        axis.q(iy) - out.cone.center_qy);
            const int b = std::min(static_cast<int>(r / dr), nbins - 1);
            out.radial_profile[b] += out.map_signal[static_cast<size_t>(ix) * axis.n + iy];
            cnt[b] += 1.0;
        }
    for (int b = 0; b < nbins; ++b)
        if (cnt[b] > 0) out.radial_profile[b] /= cnt[b];
    return out;
}

namespace {

// |u(0,p)|^2 maximum for p > 0 by golden-section search (0 for even modes).
double pump_hump_position(const PumpMode& pump) {
    if (pump.order_y == 0) return 0.0;
    auto f = [&](double p) { return -std::norm(mode_momentum(pump, WaveVectorT{0, p})); };
    double a = 1e-6, b = 8.0 * (pump.order_y + 1) / pump.waist_um;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int i = 0; i < 200; ++i) {
        if (f(c) < f(d)) b = d;
        else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

} // namespace

CurvesOutput run_curves(const ResolvedScenario& rs) {
    CurvesOutput out;
    const double qm = rs.grid.q_max;
    out.curves = phase_match_curves(rs.cfg.crystal, -qm, qm);
    if (out.curves.empty())
        throw NumericalError("no phase matching in range: check the crystal axis angle");
    out.pump_hump_sum = pump_hump_position(rs.cfg.pump);

    std::vector<CurveCrossing> all;
    const std::vector<double> sums = out.pump_hump_sum > 0
        ? std::vector<double>{+out.pump_hump_sum, -out.pump_hump_sum}
        : std::vector<double>{0.0};
    for (double s : sums) {
        auto v = pump_line_crossings(rs.cfg.crystal, s, -qm, qm);
        all.insert(all.end(), v.begin(), v.end());
    }
    if (all.empty()) throw NumericalError("pump lines do not cross the phase-matching curve");

    // group crossings into regions by q_sy proximity
    std::sort(all.begin(), all.end(),
              [](const CurveCrossing& a, const CurveCrossing& b) { return a.q_sy < b.q_sy; });
    const double gap = 0.1 * (2 * qm);
    std::vector<std::vector<CurveCrossing>> groups;
    for (const auto& c : all) {
        if (groups.empty() || c.q_sy - groups.back().back().q_sy > gap)
            groups.push_back({});
        groups.back().push_back(c);
    }
    for (const auto& g : groups) {
        CrossingRegion r;
        for (const auto& c : g) {
            r.q_sy += c.q_sy;
            r.q_iy += c.q_iy;
            r.slope += c.slope;
        }
        r.q_sy /= g.size();
        r.q_iy /= g.size();
        r.slope /= g.size();
        out.regions.push_back(r);
    }
    double smin = 1e300, smax = 0;
    for (const auto& r : out.regions) {
        smin = std::min(smin, std::abs(r.slope));
        smax = std::max(smax, std::abs(r.slope));
    }
    out.slope_ratio = smin > 0 ? smax / smin : 0.0;
    return out;
}

CutsOutput run_cuts(const ResolvedScenario& rs) {
    const CurvesOutput curves = run_curves(rs);
    if (curves.regions.size() < 2)
        throw NumericalError("need two crossing regions for tomographic cuts");
    const Workspace1D w = build_workspace_1d(rs);

    // upper intersection = larger q_sy
    const CrossingRegion& upper = curves.regions.back();
    const CrossingRegion& lower = curves.regions.front();
    const double hw = rs.cfg.cuts_band_halfwidth;

    CutsOutput out;
    out.upper_band_lo = upper.q_iy - hw;
    out.upper_band_hi = upper.q_iy + hw;
    out.lower_band_lo = lower.q_iy - hw;
    out.lower_band_hi = lower.q_iy + hw;
    out.upper_cut = tomographic_cut(out.upper_band_lo, out.upper_band_hi, w.amp);
    out.lower_cut = tomographic_cut(out.lower_band_lo, out.lower_band_hi, w.amp);
    out.q.resize(w.amp.axis.n);
    for (int i = 0; i < w.amp.axis.n; ++i) out.q[i] = w.amp.axis.q(i);
    out.upper_peaks = static_cast<int>(find_peaks(out.upper_cut, 0.10).size());
    out.lower_peaks = static_cast<int>(find_peaks(out.lower_cut, 0.10).size());
    return out;
}

NearfieldOutput run_nearfield(const ResolvedScenario& rs) {
    const Workspace1D w = build_workspace_1d(rs);
    NearfieldOutput out;
    const GridAxis& axis = w.amp.axis;
    out.intensity = nearfield_singles_1d(w.amp, w.chain.signal_mask, w.chain.idler_mask);
    out.farfield = farfield_singles_1d(w.amp, w.chain.signal_mask, w.chain.idler_mask, rs.cfg.slit);
    out.y.resize(axis.n);
    out.q.resize(axis.n);
    for (int i = 0; i < axis.n; ++i) {
        out.y[i] = axis.x(i);
        out.q[i] = axis.q(i);
    }
    for (int i : find_peaks(out.intensity, 0.10)) out.peak_positions_um.push_back(axis.x(i));
    return out;
}

// ---------------------------------------------------------------------------
// writers

namespace {

struct FileSink {
    std::string dir;
    std::vector<std::string> files;
    std::vector<ManifestEntry> entries;

    void add(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(dir);
        write_text_file(dir + "/" + name, content);
        files.push_back(name);
        entries.push_back({name, fnv1a64_hex(content)});
    }
};

std::vector<std::vector<double>> map_rows(const std::vector<double>& map, int nx, int ny) {
    std::vector<std::vector<double>> rows;
    rows.reserve(map.size());
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            rows.push_back({static_cast<double>(ix), static_cast<double>(iy),
                            map[static_cast<size_t>(ix) * ny + iy]});
    return rows;
}

std::string axis_comment(const GridAxis& ax, const GridAxis& ay) {
    std::ostringstream o;
    o << "qx [" << -ax.q_max << ", " << ax.q_max << "] qy [" << -ay.q_max << ", "
      << ay.q_max << "] rad/um, row-major, top row = max qy,";
    return o.str();
}

} // namespace

std::vector<std::string> write_vd(const ResolvedScenario& rs, const VdOutput& out,
                                  const std::string& dir) {
    FileSink sink{dir};
    const auto meta = metadata_block(rs.config_text(), kDeterminism);

    std::vector<std::vector<double>> rows;
    for (const ScanPoint& p : out.scan.points) {
        const double nan = std::nan("");
        if (p.defined)
            rows.push_back({p.y_i_um, p.v, p.d_signed, std::abs(p.d_signed), p.v2d2(),
                            p.c_s1, p.c_s2, p.v_ideal, p.v2d2_ideal()});
        else
            rows.push_back({p.y_i_um, nan, nan, nan, nan, p.c_s1, p.c_s2, nan, nan});
    }
    sink.add("vd_scan.csv",
             make_csv(meta,
                      {"y_i_um", "V", "D_signed", "D_abs", "V2_plus_D2", "C_S1", "C_S2",
                       "V_ideal", "V2_plus_D2_ideal"},
                      rows));

    nlohmann::json j;
    j["max_v2_plus_d2"] = out.max_v2d2;
    j["max_v2_plus_d2_ideal"] = out.max_v2d2_ideal;
    j["undefined_points"] = out.undefined_points;
    if (out.equality_band)
        j["equality_band_um"] = {out.equality_band->first, out.equality_band->second};
    else
        j["equality_band_um"] = nullptr;
    j["cone_signal"] = {{"center_qy", out.cone_signal.center_qy},
                        {"diameter", out.cone_signal.diameter}};
    j["cone_idler"] = {{"center_qy", out.cone_idler.center_qy},
                       {"diameter", out.cone_idler.diameter}};
    j["scenario_hash"] = rs.scenario_hash();
    sink.add("vd_summary.json", j.dump(2) + "\n");
    return sink.files;
}

std::vector<std::string> write_ring(const ResolvedScenario& rs, const RingOutput& out,
                                    const std::string& dir) {
    FileSink sink{dir};
    const auto meta = metadata_block(rs.config_text(), kDeterminism);
    const GridAxis axis = out.grid.axis();

    sink.add("ring_signal.pgm", make_pgm16(out.map_signal, axis, axis, axis_comment(axis, axis)));
    sink.add("ring_idler.pgm", make_pgm16(out.map_idler, axis, axis, axis_comment(axis, axis)));
    sink.add("ring_signal.csv", make_csv(meta, {"x_index", "y_index", "value"},
                                         map_rows(out.map_signal, axis.n, axis.n)));
    sink.add("ring_idler.csv", make_csv(meta, {"x_index", "y_index", "value"},
                                        map_rows(out.map_idler, axis.n, axis.n)));

    std::vector<std::vector<double>> cut;
    for (int iy = 0; iy < axis.n; ++iy) cut.push_back({axis.q(iy), out.vertical_cut[iy]});
    sink.add("ring_vertical_cut.csv", make_csv(meta, {"q_y", "rate"}, cut));

    std::vector<std::vector<double>> rad;
    for (size_t b = 0; b < out.radial_profile.size(); ++b)
        rad.push_back({(b + 0.5) * axis.dq(), out.radial_profile[b]});
    sink.add("ring_radial_profile.csv", make_csv(meta, {"r", "mean_rate"}, rad));

    nlohmann::json j;
    j["upper_peaks"] = out.upper_peaks;
    j["lower_peaks"] = out.lower_peaks;
    j["cone"] = {{"center_qx", out.cone.center_qx},
                 {"center_qy", out.cone.center_qy},
                 {"diameter", out.cone.diameter}};
    j["scenario_hash"] = rs.scenario_hash();
    sink.add("ring_summary.json", j.dump(2) + "\n");
    return sink.files;
}

std::vector<std::string> write_curves(const ResolvedScenario& rs, const CurvesOutput& out,
                                      const std::string& dir) {
    FileSink sink{dir};
    const auto meta = metadata_block(rs.config_text(), kDeterminism);

    std::vector<std::vector<double>> rows;
    for (size_t b = 0; b < out.curves.size(); ++b)
        for (const CurvePoint& p : out.curves[b])
            rows.push_back({static_cast<double>(b), p.q_sy, p.q_iy});
    sink.add("phase_match_curves.csv", make_csv(meta, {"branch", "q_sy", "q_iy"}, rows));

    // pump-hump lines q_sy + q_iy = +-hump, slope -1 in the (q_sy, q_iy) plane
    std::vector<std::vector<double>> lines;
    const double qm = rs.grid.q_max;
    for (double s : {out.pump_hump_sum, -out.pump_hump_sum}) {
        for (int i = 0; i <= 200; ++i) {
            const double q_sy = -qm + i * (2 * qm / 200);
            lines.push_back({s, q_sy, s - q_sy});
        }
        if (out.pump_hump_sum == 0) break;
    }
    sink.add("pump_lines.csv", make_csv(meta, {"sum", "q_sy", "q_iy"}, lines));

    nlohmann::json j;
    j["pump_hump_sum"] = out.pump_hump_sum;
    j["slope_ratio"] = out.slope_ratio;
    j["regions"] = nlohmann::json::array();
    for (const auto& r : out.regions)
        j["regions"].push_back({{"q_sy", r.q_sy}, {"q_iy", r.q_iy}, {"slope", r.slope}});
    j["scenario_hash"] = rs.scenario_hash();
    sink.add("curves_summary.json", j.dump(2) + "\n");
    return sink.files;
}

std::vector<std::string> write_cuts(const ResolvedScenario& rs, const CutsOutput& out,
                                    const std::string& dir) {
    FileSink sink{dir};
    const auto meta = metadata_block(rs.config_text(), kDeterminism);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < out.q.size(); ++i)
        rows.push_back({out.q[i], out.upper_cut[i], out.lower_cut[i]});
    sink.add("tomographic_cuts.csv", make_csv(meta, {"q_sy", "upper_band_rate", "lower_band_rate"}, rows));

    nlohmann::json j;
    j["upper_band"] = {out.upper_band_lo, out.upper_band_hi};
    j["lower_band"] = {out.lower_band_lo, out.lower_band_hi};
    j["upper_peaks"] = out.upper_peaks;
    j["lower_peaks"] = out.lower_peaks;
    j["scenario_hash"] = rs.scenario_hash();
    sink.add("cuts_summary.json", j.dump(2) + "\n");
    return sink.files;
}

std::vector<std::string> write_nearfield(const ResolvedScenario& rs, const NearfieldOutput& out,
                                         const std::string& dir) {
    FileSink sink{dir};
    const auto meta = metadata_block(rs.config_text(), kDeterminism);
    std::vector<std::vector<double>> nf;
    for (size_t i = 0; i < out.y.size(); ++i) nf.push_back({out.y[i], out.intensity[i]});
    sink.add("nearfield.csv", make_csv(meta, {"y_um", "intensity"}, nf));
    std::vector<std::vector<double>> ff;
    for (size_t i = 0; i < out.q.size(); ++i) ff.push_back({out.q[i], out.farfield[i]});
    sink.add("farfield.csv", make_csv(meta, {"q_y", "rate"}, ff));

    nlohmann::json j;
    j["nearfield_peaks_um"] = out.peak_positions_um;
    j["scenario_hash"] = rs.scenario_hash();
    sink.add("nearfield_summary.json", j.dump(2) + "\n");
    return sink.files;
}

void write_manifest(const ResolvedScenario& rs, const std::string& dir,
                    double elapsed_seconds, const std::vector<std::string>& files) {
    std::vector<ManifestEntry> entries;
    for (const std::string& name : files) {
        std::ifstream f(dir + "/" + name, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        entries.push_back({name, fnv1a64_hex(ss.str())});
    }
    write_text_file(dir + "/manifest.json",
                    make_manifest_json(rs.config_text(), elapsed_seconds, entries));
}

} // namespace spdc
