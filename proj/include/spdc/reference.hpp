#pragma once

#include "spdc/biphoton.hpp"

namespace spdc {
// Serial reference implementations. These evaluate phi() point by point with
// no lookup tables and no threading; the streaming kernels are validated
// against them in the tests and timed against them in the benchmark.
namespace reference {

BiphotonAmplitude1D build_1d_amplitude(const GridSpec& grid, const PumpMode& pump,
                                       const CrystalSpec& crystal);

std::vector<double> singles_map_2d(Arm arm, const std::vector<double>& mask_signal,
                                   const std::vector<double>& mask_idler,
                                   const GridSpec& grid, const PumpMode& pump,
                                   const CrystalSpec& crystal);

std::vector<Complex> conditional_signal_amplitude_1d(double y_i_um,
                                                     const BiphotonAmplitude1D& amp,
                                                     const std::vector<double>& idler_mask);

} // namespace reference
} // namespace spdc
