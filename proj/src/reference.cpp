#include "spdc/reference.hpp"

#include <cmath>

namespace spdc {
namespace reference {

BiphotonAmplitude1D build_1d_amplitude(const GridSpec& grid, const PumpMode& pump,
                                       const CrystalSpec& crystal) {
    grid.validate();
    const GridAxis axis = grid.axis();
    const int n = axis.n;
    BiphotonAmplitude1D amp;
    amp.axis = axis;
    amp.m.resize(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            amp.m[static_cast<size_t>(j) * n + k] =
                phi(WaveVectorT{0, axis.q(j)}, WaveVectorT{0, axis.q(k)}, pump, crystal);
    double total = 0;
    for (const Complex& c : amp.m) total += std::norm(c);
    total *= axis.dq() * axis.dq();
    amp.norm_constant = std::sqrt(total);
    const double inv = 1.0 / amp.norm_constant;
    for (Complex& c : amp.m) c *= inv;
    return amp;
}

std::vector<double> singles_map_2d(Arm arm, const std::vector<double>& mask_signal,
                                   const std::vector<double>& mask_idler,
                                   const GridSpec& grid, const PumpMode& pump,
                                   const CrystalSpec& crystal) {
    grid.validate();
    const GridAxis axis = grid.axis();
    const int n = axis.n;
    const size_t n2 = static_cast<size_t>(n) * n;
    std::vector<double> map(n2, 0.0);
    const std::vector<double>& mout = arm == Arm::Signal ? mask_signal : mask_idler;
    const std::vector<double>& mpar = arm == Arm::Signal ? mask_idler : mask_signal;
    for (int ox = 0; ox < n; ++ox) {
        for (int oy = 0; oy < n; ++oy) {
            const size_t oidx = static_cast<size_t>(ox) * n + oy;
            const double mo = mout.empty() ? 1.0 : mout[oidx];
            if (mo == 0.0) continue;
            const WaveVectorT qo{axis.q(ox), axis.q(oy)};
            double acc = 0.0;
            for (int px = 0; px < n; ++px) {
                for (int py = 0; py < n; ++py) {
                    const double mp = mpar.empty() ? 1.0 : mpar[static_cast<size_t>(px) * n + py];
                    if (mp == 0.0) continue;
                    const WaveVectorT qp{axis.q(px), axis.q(py)};
                    const Complex f = arm == Arm::Signal ? phi(qo, qp, pump, crystal)
                                                         : phi(qp, qo, pump, crystal);
                    acc += std::norm(f) * mp;
                }
            }
            map[oidx] = acc * mo * axis.dq() * axis.dq();
        }
    }
    return map;
}

std::vector<Complex> conditional_signal_amplitude_1d(double y_i_um,
                                                     const BiphotonAmplitude1D& amp,
                                                     const std::vector<double>& idler_mask) {
    const int n = amp.axis.n;
    std::vector<Complex> out(n, Complex(0, 0));
    for (int j = 0; j < n; ++j) {
        Complex acc(0, 0);
        for (int k = 0; k < n; ++k) {
            const double m = idler_mask.empty() ? 1.0 : idler_mask[k];
            const double arg = amp.axis.q(k) * y_i_um;
            acc += amp.at(j, k) * Complex(std::cos(arg), std::sin(arg)) * m;
        }
        out[j] = acc * amp.axis.dq();
    }
    return out;
}

} // namespace reference
} // namespace spdc
