#include "spdc/fourier.hpp"

#include <cmath>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Standard iterative radix-2 FFT, kernel e^{-2 pi i jk / n} for Forward.
void fft_radix2(std::vector<Complex>& a, FftDirection dir) {
    const size_t n = a.size();
    if (n < 2) return;
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sgn = dir == FftDirection::Forward ? -1.0 : 1.0;
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sgn * 2.0 * kPi / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}
} // namespace

void centered_dft(std::vector<Complex>& data, FftDirection dir) {
    const size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw NumericalError("centered_dft requires a power-of-two length");
    // F[k] = (1/sqrt n) e^{∓i pi n/2} (-1)^k sum_j (-1)^j f[j] e^{∓2 pi i jk/n}
    for (size_t j = 1; j < n; j += 2) data[j] = -data[j];
    fft_radix2(data, dir);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    // e^{-i pi n/2} for Forward (conjugate for Inverse): real +-1 for even n/2
    const double corner = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    for (size_t k = 0; k < n; ++k) {
        double s = scale * corner;
        if (k % 2 == 1) s = -s;
        data[k] *= s;
    }
}

std::vector<Complex> axis_to_position(const std::vector<Complex>& mom, const GridAxis& axis) {
    std::vector<Complex> out = mom;
    centered_dft(out, FftDirection::Inverse);
    const double scale = std::sqrt(axis.dq() / axis.dx());
    for (Complex& c : out) c *= scale;
    return out;
}

std::vector<Complex> axis_to_momentum(const std::vector<Complex>& pos, const GridAxis& axis) {
    std::vector<Complex> out = pos;
    centered_dft(out, FftDirection::Forward);
    const double scale = std::sqrt(axis.dx() / axis.dq());
    for (Complex& c : out) c *= scale;
    return out;
}

namespace {

void transform_field(ComplexField2D& f, FftDirection dir, double scale) {
    const int nx = f.ax.n, ny = f.ay.n;
    // rows (y axis)
    std::vector<Complex> buf(static_cast<size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) buf[iy] = f.at(ix, iy);
        centered_dft(buf, dir);
        for (int iy = 0; iy < ny; ++iy) f.at(ix, iy) = buf[iy];
    }
    // columns (x axis)
    std::vector<Complex> col(static_cast<size_t>(nx));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) col[ix] = f.at(ix, iy);
        centered_dft(col, dir);
        for (int ix = 0; ix < nx; ++ix) f.at(ix, iy) = col[ix];
    }
    for (Complex& c : f.v) c *= scale;
}

} // namespace

ComplexField2D to_near_field(const ComplexField2D& field) {
    if (field.domain() != Domain::Momentum)
        throw ConfigError("to_near_field expects a momentum-domain field");
    ComplexField2D out = field;
    const double scale = std::sqrt(field.ax.dq() / field.ax.dx()) *
                         std::sqrt(field.ay.dq() / field.ay.dx());
    transform_field(out, FftDirection::Inverse, scale);
    out.plane = PlaneTag::SlitPlane;
    return out;
}

ComplexField2D to_far_field(const ComplexField2D& field) {
    if (field.domain() != Domain::Position)
        throw ConfigError("to_far_field expects a position-domain field");
    ComplexField2D out = field;
    const double scale = std::sqrt(field.ax.dx() / field.ax.dq()) *
                         std::sqrt(field.ay.dx() / field.ay.dq());
    transform_field(out, FftDirection::Forward, scale);
    out.plane = PlaneTag::DetectionFar;
    return out;
}

} // namespace spdc
