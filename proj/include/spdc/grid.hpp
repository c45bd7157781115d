#pragma once

#include <complex>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

using Complex = std::complex<double>;

// One transform axis: n samples, momentum half-extent q_max.
// Momentum samples q_i = (i - n/2) * dq, dq = 2 q_max / n.
// Conjugate position samples x_i = (i - n/2) * dx, dx = pi / q_max,
// so dq * dx * n = 2 pi.
struct GridAxis {
    int n = 0;
    double q_max = 0;

    double dq() const { return 2.0 * q_max / n; }
    double dx() const { return 3.14159265358979323846 / q_max; }
    double q(int i) const { return (i - n / 2) * dq(); }
    double x(int i) const { return (i - n / 2) * dx(); }
    // nearest grid index for a momentum value (clamped)
    int index_of_q(double qv) const;
    int index_of_x(double xv) const;
};

// Square momentum grid of the scenario. n must be a power of two >= 32.
struct GridSpec {
    int n = 512;
    double q_max = 1.25;

    GridAxis axis() const { return GridAxis{n, q_max}; }
    void validate() const;
};

enum class Domain { Momentum, Position };

// Physical plane the samples live in; transforms connect conjugate planes.
enum class PlaneTag {
    CrystalExitMomentum, // emission spectrum right at the crystal
    AperturePlane,       // far field between photo lens and PBS
    SlitPlane,           // image of the crystal exit face (double slit)
    DetectionNear,       // near-field detection (same plane as the slit)
    DetectionFar,        // far-field detection behind the slit
};

Domain domain_of(PlaneTag tag);

// Dense complex samples on a rectangular (ax, ay) grid, row-major [ix*ny + iy].
struct ComplexField2D {
    GridAxis ax, ay;
    PlaneTag plane = PlaneTag::CrystalExitMomentum;
    std::vector<Complex> v;

    ComplexField2D() = default;
    ComplexField2D(GridAxis x, GridAxis y, PlaneTag tag)
        : ax(x), ay(y), plane(tag), v(static_cast<size_t>(x.n) * y.n) {}

    Complex& at(int ix, int iy) { return v[static_cast<size_t>(ix) * ay.n + iy]; }
    const Complex& at(int ix, int iy) const { return v[static_cast<size_t>(ix) * ay.n + iy]; }
    Domain domain() const { return domain_of(plane); }

    // measure-weighted squared norm (dx*dy or dqx*dqy depending on domain)
    double norm_squared() const;
};

} // namespace spdc
