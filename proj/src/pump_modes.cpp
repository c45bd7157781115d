#include "spdc/pump_modes.hpp"

#include <cmath>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// 1-D normalized HG amplitude with scale w: integral of |u|^2 dx = 1.
double hg_1d(int n, double x, double w) {
    const double norm = std::pow(2.0 / kPi, 0.25) /
                        std::sqrt(std::pow(2.0, n) * factorial(n) * w);
    return norm * hermite_polynomial(n, std::sqrt(2.0) * x / w) * std::exp(-x * x / (w * w));
}
} // namespace

double hermite_polynomial(int n, double u) {
    if (n == 0) return 1.0;
    if (n == 1) return 2.0 * u;
    double hm = 1.0, h = 2.0 * u;
    for (int k = 1; k < n; ++k) {
        const double hn = 2.0 * u * h - 2.0 * k * hm;
        hm = h;
        h = hn;
    }
    return h;
}

Complex mode_position(const PumpMode& mode, double x_um, double y_um) {
    const double u = hg_1d(mode.order_x, x_um - mode.center_x_um, mode.waist_um) *
                     hg_1d(mode.order_y, y_um - mode.center_y_um, mode.waist_um);
    return Complex(u, 0.0);
}

Complex mode_momentum(const PumpMode& mode, const WaveVectorT& q) {
    // HG modes are self-Fourier: scale w -> 2/w, per-order factor (-i)^n,
    // plus the shift phase for an off-center mode.
    const double wq = 2.0 / mode.waist_um;
    const double u = hg_1d(mode.order_x, q.qx, wq) * hg_1d(mode.order_y, q.qy, wq);
    const int n = mode.order_x + mode.order_y;
    static const Complex phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}}; // (-i)^n
    Complex val = phases[n % 4] * u;
    if (mode.center_x_um != 0.0 || mode.center_y_um != 0.0) {
        const double arg = -(q.qx * mode.center_x_um + q.qy * mode.center_y_um);
        val *= Complex(std::cos(arg), std::sin(arg));
    }
    return val;
}

} // namespace spdc
