#pragma once

#include <vector>

#include "spdc/dispersion.hpp"
#include "spdc/fourier.hpp"
#include "spdc/grid.hpp"
#include "spdc/pump_modes.hpp"

namespace spdc {

// Phase-matching factor used when assembling the joint amplitude.
// YSymmetrized and Unity are diagnostic surrogates for symmetry tests.
enum class PhaseMatchModel { Exact, YSymmetrized, Unity };

// Joint two-photon amplitude: pump momentum profile times the phase-matching
// amplitude, no extra phase factors.
Complex phi(const WaveVectorT& q_s, const WaveVectorT& q_i, const PumpMode& pump,
            const CrystalSpec& crystal, PhaseMatchModel model = PhaseMatchModel::Exact,
            KzMode mode = KzMode::Exact);

// Precomputed kz and pump tables on the q_x = 0 line; phi on the grid becomes
// three lookups and one sinc. Sum-grid index convention: q_j + q_k lies at
// sum index j + k of a (2n-1)-point grid spanning [2 q_min, 2 q_max].
struct BiphotonTables1D {
    GridAxis axis;
    double half_length_um = 0;
    PhaseMatchModel model = PhaseMatchModel::Exact;
    std::vector<double> kz_signal;  // n
    std::vector<double> kz_idler;   // n
    std::vector<double> kz_pump;    // 2n-1 on the sum grid
    std::vector<Complex> pump_amp;  // 2n-1 on the sum grid

    double delta_kz_at(int j, int k) const {
        return kz_pump[j + k] - kz_signal[j] - kz_idler[k];
    }
    Complex phi_at(int j, int k) const;
};

BiphotonTables1D build_tables_1d(const GridAxis& axis, const PumpMode& pump,
                                 const CrystalSpec& crystal,
                                 PhaseMatchModel model = PhaseMatchModel::Exact,
                                 KzMode mode = KzMode::Exact);

// Dense normalized joint amplitude over (q_sy, q_iy), q_sx = q_ix = 0.
// Row-major m[j*n + k], j indexing q_sy. Sum |m|^2 dq^2 = 1.
struct BiphotonAmplitude1D {
    GridAxis axis;
    std::vector<Complex> m;
    double norm_constant = 1.0; // divides the raw phi values

    Complex at(int j, int k) const { return m[static_cast<size_t>(j) * axis.n + k]; }
};

// Throws NumericalError if the grid does not cover the phase-matching band.
BiphotonAmplitude1D build_1d_amplitude(const GridSpec& grid, const PumpMode& pump,
                                       const CrystalSpec& crystal,
                                       PhaseMatchModel model = PhaseMatchModel::Exact,
                                       KzMode mode = KzMode::Exact);

enum class Arm { Signal, Idler };

// Rectangular-grid tables for full 2-D work (x resolution may be reduced).
struct BiphotonTables2D {
    GridAxis ax, ay;
    double half_length_um = 0;
    std::vector<double> kz_signal;  // nx*ny
    std::vector<double> kz_idler;   // nx*ny
    std::vector<double> kz_pump;    // (2nx-1)*(2ny-1)
    std::vector<double> pump_w;     // |u|^2 on the sum grid
    std::vector<Complex> pump_amp;  // u on the sum grid

    size_t idx(int ix, int iy) const { return static_cast<size_t>(ix) * ay.n + iy; }
    size_t sidx(int sx, int sy) const { return static_cast<size_t>(sx) * (2 * ay.n - 1) + sy; }
};

BiphotonTables2D build_tables_2d(const GridAxis& ax, const GridAxis& ay,
                                 const PumpMode& pump, const CrystalSpec& crystal,
                                 KzMode mode = KzMode::Exact);

// Streaming singles map over the square grid: for each output pixel the
// partner sum runs in a fixed order, so results are bit-identical for any
// worker count. masks are |M|^2 weights (empty = all ones).
std::vector<double> singles_map_2d(Arm arm, const std::vector<double>& mask_signal,
                                   const std::vector<double>& mask_idler,
                                   const GridSpec& grid, const PumpMode& pump,
                                   const CrystalSpec& crystal, KzMode mode = KzMode::Exact);

// Conditional signal amplitude for an idler projected onto near-field
// position y_i (1-D model): A[j] = sum_k phi[j,k] Mi[k] e^{i q_k y_i} dq.
std::vector<Complex> conditional_signal_amplitude_1d(double y_i_um,
                                                     const BiphotonAmplitude1D& amp,
                                                     const std::vector<double>& idler_mask);

// One q_ix slice of the 2-D conditional amplitude (the full coincidence rate
// sums slices incoherently): A[sx,sy] = sum_iy phi(qs, (qix, qiy)) Mi e^{i qiy y_i} dqy.
ComplexField2D conditional_signal_slice_2d(double y_i_um, int idler_ix,
                                           const BiphotonTables2D& tables,
                                           const std::vector<double>& idler_mask_amp);

} // namespace spdc
