#pragma once

#include <complex>

#include "spdc/dispersion.hpp"

namespace spdc {

using Complex = std::complex<double>;

// Hermite-Gauss transverse mode at its waist plane. order_x/order_y count the
// nodes along each axis; the default TEM01 has its two humps along y.
struct PumpMode {
    int order_x = 0;
    int order_y = 1;
    double waist_um = 150.0;
    double center_x_um = 0.0;
    double center_y_um = 0.0;

    void validate() const {
        if (!(waist_um > 0)) throw ConfigError("pump waist must be > 0");
        if (order_x < 0 || order_y < 0) throw ConfigError("mode orders must be >= 0");
    }
};

// Amplitude at the waist plane, normalized so that the integral of |u|^2 over
// the plane is 1. Real up to the Hermite sign structure.
Complex mode_position(const PumpMode& mode, double x_um, double y_um);

// Analytic Fourier transform of mode_position with the e^{-i q r} / (2 pi)
// convention (matches to_far_field); normalized to unit norm in q.
Complex mode_momentum(const PumpMode& mode, const WaveVectorT& q);

// |mode_momentum|^2 maxima of the n=1 profile sit at q = +-sqrt(2)/w0.
double hermite_polynomial(int n, double u);

} // namespace spdc
