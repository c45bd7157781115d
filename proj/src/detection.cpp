#include "spdc/detection.hpp"

#include <algorithm>
#include <cmath>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

double visibility(const FringePattern& f) {
    const int n = static_cast<int>(f.rate.size());
    if (n < 8) throw NumericalError("fringe pattern too short");
    const double dq = f.q[1] - f.q[0];
    if (f.fringe_period < 4.0 * dq)
        throw NumericalError("fringe period not resolved by the grid");

    int lo = 0, hi = n - 1;
    for (int i = 0; i < n; ++i) {
        if (f.q[i] < f.window_lo) lo = i + 1;
        if (f.q[i] <= f.window_hi) hi = i;
    }
    if (hi - lo < 4) throw NumericalError("envelope window too narrow");

    int jmax = lo;
    for (int i = lo; i <= hi; ++i)
        if (f.rate[i] > f.rate[jmax]) jmax = i;
    const double rmax = f.rate[jmax];
    if (!(rmax > 0)) return 0.0;

    // constant pattern
    double wmin = rmax;
    for (int i = lo; i <= hi; ++i) wmin = std::min(wmin, f.rate[i]);
    if (rmax - wmin <= 1e-14 * rmax) return 0.0;

    const int cap = static_cast<int>(std::lround(1.25 * f.fringe_period / dq));
    auto adjacent_min = [&](int step) -> std::optional<double> {
        for (int s = 1; s <= cap; ++s) {
            const int j = jmax + step * s;
            if (j <= lo || j >= hi) return std::nullopt;
            if (f.rate[j] <= f.rate[j - 1] && f.rate[j] <= f.rate[j + 1])
                return f.rate[j];
        }
        return std::nullopt;
    };
    const auto l = adjacent_min(-1), r = adjacent_min(+1);
    if (!l && !r) return 0.0; // fringe-free pattern
    double rmin = rmax;
    if (l) rmin = std::min(rmin, *l);
    if (r) rmin = std::min(rmin, *r);
    return (rmax - rmin) / (rmax + rmin);
}

double overlap_visibility(const std::vector<Complex>& psi_slit, const GridAxis& y_axis,
                          const DoubleSlitSpec& slit) {
    const int n = static_cast<int>(psi_slit.size());
    double total = 0;
    for (const Complex& c : psi_slit) total += std::norm(c);
    if (!(total > 0)) return 0.0;
    const int lag_lo = std::max(1, static_cast<int>(std::lround(0.5 * slit.separation_um / y_axis.dx())));
    const int lag_hi = std::min(n - 1, static_cast<int>(std::lround(1.5 * slit.separation_um / y_axis.dx())));
    double best = 0;
    for (int lag = lag_lo; lag <= lag_hi; ++lag) {
        Complex acc(0, 0);
        for (int i = lag; i < n; ++i) acc += psi_slit[i] * std::conj(psi_slit[i - lag]);
        best = std::max(best, std::abs(acc));
    }
    return 2.0 * best / total;
}

double distinguishability(double c_s1, double c_s2) {
    const double denom = c_s1 + c_s2;
    if (!(denom > 0)) throw NumericalError("distinguishability undefined: zero coincidences");
    return (c_s1 - c_s2) / denom;
}

namespace {

std::vector<double> pixel_integrate(const std::vector<double>& rate, double halfwidth_cells) {
    const int half = static_cast<int>(std::lround(halfwidth_cells)) - 1;
    if (half <= 0) return rate;
    const int n = static_cast<int>(rate.size());
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j) s += rate[j];
        out[i] = s;
    }
    return out;
}

} // namespace

ChainPointResult evaluate_chain_point_1d(double y_i_um, const BiphotonAmplitude1D& amp,
                                         const Chain1D& chain) {
    const GridAxis& axis = amp.axis;
    const int n = axis.n;
    std::vector<Complex> a = conditional_signal_amplitude_1d(y_i_um, amp, chain.idler_mask);
    if (!chain.signal_mask.empty()) {
        if (static_cast<int>(chain.signal_mask.size()) != n)
            throw ConfigError("signal mask size does not match the grid");
        for (int j = 0; j < n; ++j) a[j] *= chain.signal_mask[j];
    }

    ChainPointResult res;
    res.psi_slit_plane = axis_to_position(a, axis);

    const SlitOpenings op = slit_openings(axis, chain.slit);
    const double dx = axis.dx();
    for (int i = op.upper_first; i <= op.upper_last; ++i)
        res.c_s1 += std::norm(res.psi_slit_plane[i]) * dx;
    for (int i = op.lower_first; i <= op.lower_last; ++i)
        res.c_s2 += std::norm(res.psi_slit_plane[i]) * dx;

    std::vector<Complex> psi_slit = apply_double_slit_1d(res.psi_slit_plane, axis, chain.slit);
    std::vector<Complex> far = axis_to_momentum(psi_slit, axis);

    std::vector<double> rate(n);
    for (int i = 0; i < n; ++i) rate[i] = std::norm(far[i]) * axis.dq();
    rate = pixel_integrate(rate, chain.pixel_halfwidth_cells);

    FringePattern f;
    f.q.resize(n);
    for (int i = 0; i < n; ++i) f.q[i] = axis.q(i);
    f.rate = std::move(rate);
    f.fringe_period = 2.0 * kPi / chain.slit.separation_um;
    int jmax = 0;
    for (int i = 1; i < n; ++i)
        if (f.rate[i] > f.rate[jmax]) jmax = i;
    const double env_half = 2.0 * kPi / chain.slit.width_um;
    f.window_lo = f.q[jmax] - env_half;
    f.window_hi = f.q[jmax] + env_half;

    res.v_extrema = visibility(f);
    res.v_overlap = overlap_visibility(psi_slit, axis, chain.slit);
    res.fringe = std::move(f);
    return res;
}

FringePattern coincidence_fringe(double y_i_um, const BiphotonAmplitude1D& amp,
                                 const Chain1D& chain) {
    return evaluate_chain_point_1d(y_i_um, amp, chain).fringe;
}

std::pair<double, double> slit_coincidences(double y_i_um, const BiphotonAmplitude1D& amp,
                                            const Chain1D& chain) {
    const ChainPointResult r = evaluate_chain_point_1d(y_i_um, amp, chain);
    return {r.c_s1, r.c_s2};
}

ScanResult vd_scan(const std::vector<double>& positions_um, const BiphotonAmplitude1D& amp,
                   const Chain1D& chain) {
    ScanResult out;
    out.points.resize(positions_um.size());
    #pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < static_cast<int>(positions_um.size()); ++t) {
        ScanPoint p;
        p.y_i_um = positions_um[t];
        try {
            const ChainPointResult r = evaluate_chain_point_1d(p.y_i_um, amp, chain);
            p.c_s1 = r.c_s1;
            p.c_s2 = r.c_s2;
            if (r.c_s1 + r.c_s2 > 0) {
                p.defined = true;
                p.d_signed = distinguishability(r.c_s1, r.c_s2);
                p.v = r.v_extrema;
                p.v_ideal = r.v_overlap;
            }
        } catch (const NumericalError&) {
            p.defined = false; // recorded as a gap; the scan continues
        }
        out.points[t] = p;
    }
    return out;
}

std::vector<double> tomographic_cut(double band_lo, double band_hi,
                                    const BiphotonAmplitude1D& amp) {
    const GridAxis& axis = amp.axis;
    const int n = axis.n;
    int klo = n, khi = -1;
    for (int k = 0; k < n; ++k) {
        const double q = axis.q(k);
        if (q >= band_lo && q <= band_hi) {
            klo = std::min(klo, k);
            khi = std::max(khi, k);
        }
    }
    if (khi < klo) throw ConfigError("tomographic band contains no grid samples");
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0;
        const Complex* row = &amp.m[static_cast<size_t>(j) * n];
        for (int k = klo; k <= khi; ++k) acc += std::norm(row[k]);
        out[j] = acc;
    }
    return out;
}

std::vector<double> singles_marginal(const BiphotonAmplitude1D& amp, Arm arm) {
    const int n = amp.axis.n;
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double w = std::norm(amp.at(j, k));
            if (arm == Arm::Signal) out[j] += w;
            else out[k] += w;
        }
    return out;
}

std::vector<double> nearfield_singles_1d(const BiphotonAmplitude1D& amp,
                                         const std::vector<double>& signal_mask,
                                         const std::vector<double>& idler_mask) {
    const GridAxis& axis = amp.axis;
    const int n = axis.n;
    // per-idler-sample rows computed independently, reduced in fixed order
    std::vector<std::vector<double>> rows(n);
    #pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < n; ++k) {
        const double mi = idler_mask.empty() ? 1.0 : idler_mask[k];
        if (mi == 0.0) continue;
        std::vector<Complex> col(n);
        for (int j = 0; j < n; ++j) {
            const double ms = signal_mask.empty() ? 1.0 : signal_mask[j];
            col[j] = amp.at(j, k) * (ms * mi);
        }
        std::vector<Complex> psi = axis_to_position(col, axis);
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) r[i] = std::norm(psi[i]);
        rows[k] = std::move(r);
    }
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (!rows[k].empty())
            for (int i = 0; i < n; ++i) out[i] += rows[k][i];
    return out;
}

std::vector<double> farfield_singles_1d(const BiphotonAmplitude1D& amp,
                                        const std::vector<double>& signal_mask,
                                        const std::vector<double>& idler_mask,
                                        const DoubleSlitSpec& slit) {
    const GridAxis& axis = amp.axis;
    const int n = axis.n;
    const std::vector<double> sm = double_slit_mask(axis, slit);
    std::vector<std::vector<double>> rows(n);
    #pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < n; ++k) {
        const double mi = idler_mask.empty() ? 1.0 : idler_mask[k];
        if (mi == 0.0) continue;
        std::vector<Complex> col(n);
        for (int j = 0; j < n; ++j) {
            const double ms = signal_mask.empty() ? 1.0 : signal_mask[j];
            col[j] = amp.at(j, k) * (ms * mi);
        }
        std::vector<Complex> psi = axis_to_position(col, axis);
        for (int i = 0; i < n; ++i) psi[i] *= sm[i];
        std::vector<Complex> far = axis_to_momentum(psi, axis);
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) r[i] = std::norm(far[i]);
        rows[k] = std::move(r);
    }
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (!rows[k].empty())
            for (int i = 0; i < n; ++i) out[i] += rows[k][i];
    return out;
}

std::vector<int> find_peaks(const std::vector<double>& profile, double prominence_frac) {
    const int n = static_cast<int>(profile.size());
    double vmax = 0;
    for (double v : profile) vmax = std::max(vmax, v);
    std::vector<int> out;
    if (!(vmax > 0)) return out;
    const double threshold = prominence_frac * vmax;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(profile[i] >= profile[i - 1] && profile[i] > profile[i + 1])) continue;
        double saddle_l = profile[i], saddle_r = profile[i];
        for (int j = i - 1; j >= 0; --j) {
            saddle_l = std::min(saddle_l, profile[j]);
            if (profile[j] > profile[i]) break;
        }
        for (int j = i + 1; j < n; ++j) {
            saddle_r = std::min(saddle_r, profile[j]);
            if (profile[j] > profile[i]) break;
        }
        const double prominence = profile[i] - std::max(saddle_l, saddle_r);
        if (prominence >= threshold) out.push_back(i);
    }
    return out;
}

CrossCheck2DResult coincidence_point_2d(double y_i_um, const BiphotonTables2D& tables,
                                        const std::vector<double>& signal_mask,
                                        const std::vector<double>& idler_mask,
                                        const DoubleSlitSpec& slit) {
    const int nx = tables.ax.n, ny = tables.ay.n;
    const double dqx = tables.ax.dq();
    const double dx = tables.ay.dx();
    const SlitOpenings op = slit_openings(tables.ay, slit);

    const int lag_lo = std::max(1, static_cast<int>(std::lround(0.5 * slit.separation_um / dx)));
    const int lag_hi = std::min(ny - 1, static_cast<int>(std::lround(1.5 * slit.separation_um / dx)));

    double c1 = 0, c2 = 0, slit_norm = 0;
    std::vector<Complex> acf(lag_hi - lag_lo + 1, Complex(0, 0));
    std::vector<double> fringe(ny, 0.0);

    for (int ix = 0; ix < nx; ++ix) {
        // skip slices the idler mask kills entirely
        if (!idler_mask.empty()) {
            bool any = false;
            for (int iy = 0; iy < ny && !any; ++iy)
                any = idler_mask[tables.idx(ix, iy)] != 0.0;
            if (!any) continue;
        }
        ComplexField2D a = conditional_signal_slice_2d(y_i_um, ix, tables, idler_mask);
        if (!signal_mask.empty())
            for (size_t i = 0; i < a.v.size(); ++i) a.v[i] *= signal_mask[i];
        ComplexField2D near = to_near_field(a);
        for (int sx = 0; sx < nx; ++sx) {
            for (int iy = op.upper_first; iy <= op.upper_last; ++iy)
                c1 += std::norm(near.at(sx, iy)) * dx * dqx;
            for (int iy = op.lower_first; iy <= op.lower_last; ++iy)
                c2 += std::norm(near.at(sx, iy)) * dx * dqx;
        }
        ComplexField2D near_slit = apply_double_slit(near, slit);
        for (int sx = 0; sx < nx; ++sx) {
            const Complex* col = &near_slit.v[static_cast<size_t>(sx) * ny];
            for (int iy = 0; iy < ny; ++iy) slit_norm += std::norm(col[iy]);
            for (int lag = lag_lo; lag <= lag_hi; ++lag) {
                Complex acc(0, 0);
                for (int iy = lag; iy < ny; ++iy) acc += col[iy] * std::conj(col[iy - lag]);
                acf[lag - lag_lo] += acc;
            }
        }
        ComplexField2D far = to_far_field(near_slit);
        for (int sx = 0; sx < nx; ++sx)
            for (int iy = 0; iy < ny; ++iy)
                fringe[iy] += std::norm(far.at(sx, iy)) * dqx * tables.ax.dq();
    }

    CrossCheck2DResult res;
    res.d_signed = distinguishability(c1, c2);
    double best = 0;
    for (const Complex& a : acf) best = std::max(best, std::abs(a));
    res.v_ideal = slit_norm > 0 ? 2.0 * best / slit_norm : 0.0;

    FringePattern f;
    f.q.resize(ny);
    for (int i = 0; i < ny; ++i) f.q[i] = tables.ay.q(i);
    f.rate = std::move(fringe);
    f.fringe_period = 2.0 * kPi / slit.separation_um;
    int jmax = 0;
    for (int i = 1; i < ny; ++i)
        if (f.rate[i] > f.rate[jmax]) jmax = i;
    const double env_half = 2.0 * kPi / slit.width_um;
    f.window_lo = f.q[jmax] - env_half;
    f.window_hi = f.q[jmax] + env_half;
    res.v_extrema = visibility(f);
    return res;
}

} // namespace spdc
