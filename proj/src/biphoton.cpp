#include "spdc/biphoton.hpp"

#include <cmath>
#include <omp.h>

namespace spdc {

Complex phi(const WaveVectorT& q_s, const WaveVectorT& q_i, const PumpMode& pump,
            const CrystalSpec& crystal, PhaseMatchModel model, KzMode mode) {
    const Complex u = mode_momentum(pump, WaveVectorT{q_s.qx + q_i.qx, q_s.qy + q_i.qy});
    double pm = 1.0;
    switch (model) {
        case PhaseMatchModel::Exact:
            pm = phase_match_amplitude(q_s, q_i, crystal, mode);
            break;
        case PhaseMatchModel::YSymmetrized: {
            const double d1 = delta_kz(q_s, q_i, crystal, mode);
            const double d2 = delta_kz(WaveVectorT{q_s.qx, -q_s.qy},
                                       WaveVectorT{q_i.qx, -q_i.qy}, crystal, mode);
            pm = sinc(0.5 * (d1 + d2) * crystal.length_um / 2.0);
            break;
        }
        case PhaseMatchModel::Unity:
            pm = 1.0;
            break;
    }
    return u * pm;
}

Complex BiphotonTables1D::phi_at(int j, int k) const {
    if (model == PhaseMatchModel::Unity) return pump_amp[j + k];
    return pump_amp[j + k] * sinc(delta_kz_at(j, k) * half_length_um);
}

BiphotonTables1D build_tables_1d(const GridAxis& axis, const PumpMode& pump,
                                 const CrystalSpec& crystal, PhaseMatchModel model,
                                 KzMode mode) {
    BiphotonTables1D t;
    t.axis = axis;
    t.half_length_um = crystal.length_um / 2.0;
    t.model = model;
    const int n = axis.n;
    t.kz_signal.resize(n);
    t.kz_idler.resize(n);
    t.kz_pump.resize(2 * n - 1);
    t.pump_amp.resize(2 * n - 1);

    #pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const WaveVectorT q{0.0, axis.q(i)};
        t.kz_signal[i] = kz(q, crystal.lambda_signal_um, crystal.signal_pol, crystal, mode);
        t.kz_idler[i] = kz(q, crystal.lambda_idler_um, crystal.idler_pol(), crystal, mode);
    }
    #pragma omp parallel for schedule(static)
    for (int s = 0; s < 2 * n - 1; ++s) {
        const double sum = (s - n) * axis.dq(); // q(j) + q(k) at sum index j+k = s
        const WaveVectorT q{0.0, sum};
        t.kz_pump[s] = kz(q, crystal.lambda_pump_um, Polarization::Extraordinary, crystal, mode);
        t.pump_amp[s] = mode_momentum(pump, q);
    }
    if (model == PhaseMatchModel::YSymmetrized)
        throw ConfigError("YSymmetrized model is only available through phi()");
    return t;
}

BiphotonAmplitude1D build_1d_amplitude(const GridSpec& grid, const PumpMode& pump,
                                       const CrystalSpec& crystal, PhaseMatchModel model,
                                       KzMode mode) {
    grid.validate();
    // grid-coverage check: the phase-matching band must fit
    if (model == PhaseMatchModel::Exact) {
        const double edge = ring_outer_edge(crystal);
        if (grid.q_max < edge)
            throw NumericalError("grid does not cover the phase-matching band: q_max " +
                                 std::to_string(grid.q_max) + " < ring edge " +
                                 std::to_string(edge));
    }
    const GridAxis axis = grid.axis();
    const int n = axis.n;
    BiphotonAmplitude1D amp;
    amp.axis = axis;
    amp.m.resize(static_cast<size_t>(n) * n);

    if (model == PhaseMatchModel::YSymmetrized) {
        #pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                amp.m[static_cast<size_t>(j) * n + k] =
                    phi(WaveVectorT{0, axis.q(j)}, WaveVectorT{0, axis.q(k)},
                        pump, crystal, model, mode);
    } else {
        const BiphotonTables1D t = build_tables_1d(axis, pump, crystal, model, mode);
        #pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                amp.m[static_cast<size_t>(j) * n + k] = t.phi_at(j, k);
    }

    double total = 0;
    for (const Complex& c : amp.m) total += std::norm(c);
    total *= axis.dq() * axis.dq();
    if (!(total > 0)) throw NumericalError("joint amplitude vanishes on the grid");
    amp.norm_constant = std::sqrt(total);
    const double inv = 1.0 / amp.norm_constant;
    for (Complex& c : amp.m) c *= inv;
    return amp;
}

BiphotonTables2D build_tables_2d(const GridAxis& ax, const GridAxis& ay,
                                 const PumpMode& pump, const CrystalSpec& crystal,
                                 KzMode mode) {
    BiphotonTables2D t;
    t.ax = ax;
    t.ay = ay;
    t.half_length_um = crystal.length_um / 2.0;
    const int nx = ax.n, ny = ay.n;
    t.kz_signal.resize(static_cast<size_t>(nx) * ny);
    t.kz_idler.resize(static_cast<size_t>(nx) * ny);
    #pragma omp parallel for schedule(static)
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            const WaveVectorT q{ax.q(ix), ay.q(iy)};
            t.kz_signal[t.idx(ix, iy)] =
                kz(q, crystal.lambda_signal_um, crystal.signal_pol, crystal, mode);
            t.kz_idler[t.idx(ix, iy)] =
                kz(q, crystal.lambda_idler_um, crystal.idler_pol(), crystal, mode);
        }
    }
    const int sx = 2 * nx - 1, sy = 2 * ny - 1;
    t.kz_pump.resize(static_cast<size_t>(sx) * sy);
    t.pump_w.resize(static_cast<size_t>(sx) * sy);
    t.pump_amp.resize(static_cast<size_t>(sx) * sy);
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < sx; ++i) {
        for (int j = 0; j < sy; ++j) {
            const WaveVectorT q{(i - nx) * ax.dq(), (j - ny) * ay.dq()};
            t.kz_pump[t.sidx(i, j)] =
                kz(q, crystal.lambda_pump_um, Polarization::Extraordinary, crystal, mode);
            const Complex u = mode_momentum(pump, q);
            t.pump_amp[t.sidx(i, j)] = u;
            t.pump_w[t.sidx(i, j)] = std::norm(u);
        }
    }
    return t;
}

std::vector<double> singles_map_2d(Arm arm, const std::vector<double>& mask_signal,
                                   const std::vector<double>& mask_idler,
                                   const GridSpec& grid, const PumpMode& pump,
                                   const CrystalSpec& crystal, KzMode mode) {
    grid.validate();
    const GridAxis axis = grid.axis();
    const int n = axis.n;
    const size_t n2 = static_cast<size_t>(n) * n;
    if (!mask_signal.empty() && mask_signal.size() != n2)
        throw ConfigError("signal mask size does not match the grid");
    if (!mask_idler.empty() && mask_idler.size() != n2)
        throw ConfigError("idler mask size does not match the grid");

    const BiphotonTables2D t = build_tables_2d(axis, axis, pump, crystal, mode);
    const std::vector<double>& mout = arm == Arm::Signal ? mask_signal : mask_idler;
    const std::vector<double>& mpar = arm == Arm::Signal ? mask_idler : mask_signal;
    const std::vector<double>& kz_out = arm == Arm::Signal ? t.kz_signal : t.kz_idler;
    const std::vector<double>& kz_par = arm == Arm::Signal ? t.kz_idler : t.kz_signal;
    const double lh = t.half_length_um;
    const int sy_n = 2 * n - 1;

    std::vector<double> map(n2, 0.0);
    // one output pixel per iteration; the partner sum runs in fixed row order
    #pragma omp parallel for schedule(dynamic, 4)
    for (int ox = 0; ox < n; ++ox) {
        for (int oy = 0; oy < n; ++oy) {
            const size_t oidx = static_cast<size_t>(ox) * n + oy;
            const double mo = mout.empty() ? 1.0 : mout[oidx];
            if (mo == 0.0) continue;
            const double kzo = kz_out[oidx];
            double acc = 0.0;
            for (int px = 0; px < n; ++px) {
                const double* kzp_row = &t.kz_pump[static_cast<size_t>(ox + px) * sy_n + oy];
                const double* w_row = &t.pump_w[static_cast<size_t>(ox + px) * sy_n + oy];
                const double* kzq_row = &kz_par[static_cast<size_t>(px) * n];
                const double* mp_row = mpar.empty() ? nullptr : &mpar[static_cast<size_t>(px) * n];
                for (int py = 0; py < n; ++py) {
                    const double mp = mp_row ? mp_row[py] : 1.0;
                    if (mp == 0.0) continue;
                    const double dk = kzp_row[py] - kzo - kzq_row[py];
                    const double s = sinc(dk * lh);
                    acc += w_row[py] * s * s * mp;
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
    if (!idler_mask.empty() && static_cast<int>(idler_mask.size()) != n)
        throw ConfigError("idler mask size does not match the grid");
    const double dx_extent = amp.axis.dx() * n / 2.0;
    if (std::abs(y_i_um) > dx_extent)
        throw NumericalError("idler position outside the conjugate position grid");

    std::vector<Complex> kernel(n);
    for (int k = 0; k < n; ++k) {
        const double arg = amp.axis.q(k) * y_i_um;
        const double m = idler_mask.empty() ? 1.0 : idler_mask[k];
        kernel[k] = Complex(std::cos(arg), std::sin(arg)) * m;
    }
    std::vector<Complex> out(n);
    const double dq = amp.axis.dq();
    #pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        Complex acc(0, 0);
        const Complex* row = &amp.m[static_cast<size_t>(j) * n];
        for (int k = 0; k < n; ++k) acc += row[k] * kernel[k];
        out[j] = acc * dq;
    }
    return out;
}

ComplexField2D conditional_signal_slice_2d(double y_i_um, int idler_ix,
                                           const BiphotonTables2D& t,
                                           const std::vector<double>& idler_mask_amp) {
    const int nx = t.ax.n, ny = t.ay.n;
    if (!idler_mask_amp.empty() &&
        idler_mask_amp.size() != static_cast<size_t>(nx) * ny)
        throw ConfigError("idler mask size does not match the grid");
    if (idler_ix < 0 || idler_ix >= nx) throw ConfigError("idler slice out of range");

    // premultiplied idler weights for this slice
    std::vector<Complex> w(ny);
    bool any = false;
    for (int iy = 0; iy < ny; ++iy) {
        const double m = idler_mask_amp.empty() ? 1.0
                        : idler_mask_amp[t.idx(idler_ix, iy)];
        const double arg = t.ay.q(iy) * y_i_um;
        w[iy] = Complex(std::cos(arg), std::sin(arg)) * m;
        if (m != 0.0) any = true;
    }
    ComplexField2D out(t.ax, t.ay, PlaneTag::CrystalExitMomentum);
    if (!any) return out;

    const int sy_n = 2 * ny - 1;
    const double dq = t.ay.dq();
    const double lh = t.half_length_um;
    #pragma omp parallel for schedule(dynamic, 2)
    for (int sxi = 0; sxi < nx; ++sxi) {
        const size_t sumx = static_cast<size_t>(sxi + idler_ix);
        const double* kzp_base = &t.kz_pump[sumx * sy_n];
        const Complex* u_base = &t.pump_amp[sumx * sy_n];
        const double* kzi_row = &t.kz_idler[t.idx(idler_ix, 0)];
        for (int syi = 0; syi < ny; ++syi) {
            const double kzs = t.kz_signal[t.idx(sxi, syi)];
            const double* kzp_row = kzp_base + syi;
            const Complex* u_row = u_base + syi;
            Complex acc(0, 0);
            for (int iy = 0; iy < ny; ++iy) {
                const Complex wi = w[iy];
                if (wi.real() == 0.0 && wi.imag() == 0.0) continue;
                const double dk = kzp_row[iy] - kzs - kzi_row[iy];
                acc += u_row[iy] * (sinc(dk * lh) * wi);
            }
            out.at(sxi, syi) = acc * dq;
        }
    }
    return out;
}

} // namespace spdc
