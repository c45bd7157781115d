#pragma once

#include <vector>

#include "spdc/grid.hpp"

namespace spdc {

// Unitary centered discrete Fourier transforms on the symmetric grids of
// GridAxis. Forward uses the e^{-i q x} kernel; Inverse the e^{+i q x} one.
// Radix-2 only: axis lengths must be powers of two (enforced by GridSpec).
enum class FftDirection { Forward, Inverse };

// In-place unitary centered transform of one length-n vector.
void centered_dft(std::vector<Complex>& data, FftDirection dir);

// Position-space samples from momentum-space samples on the conjugate axis
// (physical normalization: output carries sqrt(dq/dx) so that measure-weighted
// norms are preserved to machine precision).
std::vector<Complex> axis_to_position(const std::vector<Complex>& mom, const GridAxis& axis);
std::vector<Complex> axis_to_momentum(const std::vector<Complex>& pos, const GridAxis& axis);

// Field transforms with plane bookkeeping: momentum planes map to the slit
// plane; position planes map to far-field detection.
ComplexField2D to_near_field(const ComplexField2D& field);
ComplexField2D to_far_field(const ComplexField2D& field);

} // namespace spdc
