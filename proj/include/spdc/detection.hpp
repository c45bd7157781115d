#pragma once

#include <optional>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/optical_chain.hpp"

namespace spdc {

enum class DetectionPlane { Near, Far };

struct DetectorSpec {
    DetectionPlane plane = DetectionPlane::Far;
    double pixel_halfwidth_cells = 1.0; // in grid cells; >= 1
    std::vector<double> positions_um;   // idler scan positions
};

// Far-field rate samples with the envelope window used for the visibility
// reading: [window_lo, window_hi] is the central single-slit lobe around the
// pattern maximum.
struct FringePattern {
    std::vector<double> q;
    std::vector<double> rate;
    double window_lo = 0;
    double window_hi = 0;
    double fringe_period = 0; // 2 pi / slit separation
};

// Eq.-2 visibility: R_max is the global maximum inside the envelope window,
// R_min the smaller of the two local minima adjacent to it (search capped at
// 1.25 fringe periods per side). A pattern with no adjacent local minimum on
// either side is fringe-free: V = 0. Throws NumericalError when the fringe
// period is not resolved by the grid.
double visibility(const FringePattern& f);

// Ideal two-beam contrast from the slit-plane field: the lattice-lag
// cross-correlation 2 max_tau |<psi, T_tau psi>| / |psi|^2 over tau in
// [0.5, 1.5] slit separations. Cauchy-Schwarz-bounded by sqrt(1 - D^2), so
// V^2 + D^2 <= 1 holds exactly for a pure conditional state.
double overlap_visibility(const std::vector<Complex>& psi_slit, const GridAxis& y_axis,
                          const DoubleSlitSpec& slit);

// Signed Eq.-3 distinguishability; throws NumericalError on a zero denominator.
double distinguishability(double c_s1, double c_s2);

// Per-arm 1-D chain: momentum masks from the apertures (empty = all-pass).
struct Chain1D {
    std::vector<double> signal_mask;
    std::vector<double> idler_mask;
    DoubleSlitSpec slit;
    double pixel_halfwidth_cells = 1.0;
};

struct ChainPointResult {
    double c_s1 = 0, c_s2 = 0;
    double v_extrema = 0;
    double v_overlap = 0;
    FringePattern fringe;
    std::vector<Complex> psi_slit_plane; // conditional near field before the slit
};

// Full per-position evaluation: conditional amplitude -> signal mask ->
// near field -> slit -> C_S1/C_S2 and the far-field fringe + visibilities.
ChainPointResult evaluate_chain_point_1d(double y_i_um, const BiphotonAmplitude1D& amp,
                                         const Chain1D& chain);

FringePattern coincidence_fringe(double y_i_um, const BiphotonAmplitude1D& amp,
                                 const Chain1D& chain);

// (C_S1, C_S2): conditional near-field rate integrated over each opening.
std::pair<double, double> slit_coincidences(double y_i_um, const BiphotonAmplitude1D& amp,
                                            const Chain1D& chain);

struct ScanPoint {
    double y_i_um = 0;
    bool defined = false;     // false: zero coincidence denominator (gap)
    double v = 0;             // Eq.-2 extrema reading
    double v_ideal = 0;       // overlap visibility
    double d_signed = 0;
    double c_s1 = 0, c_s2 = 0;

    double d_abs() const { return defined ? std::abs(d_signed) : 0.0; }
    double v2d2() const { return v * v + d_signed * d_signed; }
    double v2d2_ideal() const { return v_ideal * v_ideal + d_signed * d_signed; }
};

struct ScanResult {
    std::vector<ScanPoint> points;
    std::string determinism = "bit-stable: per-point serial evaluation";
};

// Embarrassingly parallel over positions; per-position failures are recorded
// as gaps and the scan continues.
ScanResult vd_scan(const std::vector<double>& positions_um, const BiphotonAmplitude1D& amp,
                   const Chain1D& chain);

// Projection sum_{q_iy in [band_lo, band_hi]} |phi|^2 per q_sy column.
std::vector<double> tomographic_cut(double band_lo, double band_hi,
                                    const BiphotonAmplitude1D& amp);

// Marginals of |phi|^2 (no masks): over q_iy for the signal, over q_sy for
// the idler.
std::vector<double> singles_marginal(const BiphotonAmplitude1D& amp, Arm arm);

// Near-field singles intensity at the slit plane, idler traced out:
// I(y_s) = sum_k |T[M_s phi(., k) M_i(k)]|^2 (y_s).
std::vector<double> nearfield_singles_1d(const BiphotonAmplitude1D& amp,
                                         const std::vector<double>& signal_mask,
                                         const std::vector<double>& idler_mask);

// Far-field singles pattern behind the double slit, idler traced out.
std::vector<double> farfield_singles_1d(const BiphotonAmplitude1D& amp,
                                        const std::vector<double>& signal_mask,
                                        const std::vector<double>& idler_mask,
                                        const DoubleSlitSpec& slit);

// Indices of local maxima with topographic prominence >= frac * max(profile).
std::vector<int> find_peaks(const std::vector<double>& profile, double prominence_frac);

// Reduced-x 2-D coincidence evaluation for the 1-D cross-check: conditional
// slices per q_ix are pushed through the 2-D chain and summed incoherently.
struct CrossCheck2DResult {
    double v_ideal = 0;
    double v_extrema = 0;
    double d_signed = 0;
};
CrossCheck2DResult coincidence_point_2d(double y_i_um, const BiphotonTables2D& tables,
                                        const std::vector<double>& signal_mask,
                                        const std::vector<double>& idler_mask,
                                        const DoubleSlitSpec& slit);

} // namespace spdc
