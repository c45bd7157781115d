#include "spdc/dispersion.hpp"

#include <algorithm>
#include <cmath>

namespace spdc {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_range(const SellmeierSet& s, double lambda_um) {
    if (!(lambda_um >= s.lambda_min_um && lambda_um <= s.lambda_max_um))
        throw NumericalError("wavelength " + std::to_string(lambda_um) +
                             " um outside Sellmeier validity range [" +
                             std::to_string(s.lambda_min_um) + ", " +
                             std::to_string(s.lambda_max_um) + "]");
}
} // namespace

double SellmeierSet::n_squared(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    return a + b / (l2 - c) - d * l2;
}

SellmeierSet bbo_ordinary() {
    return SellmeierSet{2.7405, 0.0184, 0.0179, 0.0155, 0.22, 1.06};
}

SellmeierSet bbo_extraordinary() {
    return SellmeierSet{2.3730, 0.0128, 0.0156, 0.0044, 0.22, 1.06};
}

void CrystalSpec::validate() const {
    if (!(length_um > 0)) throw ConfigError("crystal length must be > 0");
    if (!(lambda_pump_um > 0 && lambda_signal_um > 0 && lambda_idler_um > 0))
        throw ConfigError("wavelengths must be > 0");
    const double lhs = 1.0 / lambda_pump_um;
    const double rhs = 1.0 / lambda_signal_um + 1.0 / lambda_idler_um;
    if (std::abs(lhs - rhs) > 1e-12 * lhs)
        throw ConfigError("energy conservation violated: 1/lp != 1/ls + 1/li");
}

double index_ordinary(const SellmeierSet& set, double lambda_um) {
    check_range(set, lambda_um);
    return std::sqrt(set.n_squared(lambda_um));
}

double index_extraordinary(const SellmeierSet& set_o, const SellmeierSet& set_e,
                           double lambda_um, double theta_rad) {
    check_range(set_o, lambda_um);
    check_range(set_e, lambda_um);
    const double c = std::cos(theta_rad), s = std::sin(theta_rad);
    return 1.0 / std::sqrt(c * c / set_o.n_squared(lambda_um) +
                           s * s / set_e.n_squared(lambda_um));
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

namespace {

// Angle between the propagation direction (q, kz) and the optical axis
// (0, -sin(axis), cos(axis)).
inline double axis_angle_of(double qy, double kz_val, double q2,
                            double sin_axis, double cos_axis) {
    const double norm = std::sqrt(q2 + kz_val * kz_val);
    double ct = (-qy * sin_axis + kz_val * cos_axis) / norm;
    ct = std::clamp(ct, -1.0, 1.0);
    return std::acos(ct);
}

} // namespace

double kz(const WaveVectorT& q, double lambda_um, Polarization pol,
          const CrystalSpec& crystal, KzMode mode) {
    const double q2 = q.qx * q.qx + q.qy * q.qy;
    if (pol == Polarization::Ordinary) {
        const double k = 2.0 * kPi * index_ordinary(crystal.ordinary, lambda_um) / lambda_um;
        const double k2 = k * k;
        if (q2 >= k2) throw NumericalError("evanescent wave: |q| >= k (ordinary)");
        return std::sqrt(k2 - q2);
    }

    const double sin_axis = std::sin(crystal.axis_angle_rad);
    const double cos_axis = std::cos(crystal.axis_angle_rad);

    // initial guess: ordinary kz
    const double ko = 2.0 * kPi * index_ordinary(crystal.ordinary, lambda_um) / lambda_um;
    if (q2 >= ko * ko) throw NumericalError("evanescent wave: |q| >= k (seed)");
    double kz_cur = std::sqrt(ko * ko - q2);

    const int cap = (mode == KzMode::Fast) ? 1 : 50;
    for (int it = 0; it < cap; ++it) {
        const double theta = axis_angle_of(q.qy, kz_cur, q2, sin_axis, cos_axis);
        const double n = index_extraordinary(crystal.ordinary, crystal.extraordinary,
                                             lambda_um, theta);
        const double k = 2.0 * kPi * n / lambda_um;
        const double k2 = k * k;
        if (q2 >= k2) throw NumericalError("evanescent wave: |q| >= k (extraordinary)");
        const double kz_next = std::sqrt(k2 - q2);
        const double delta = std::abs(kz_next - kz_cur);
        kz_cur = kz_next;
        if (mode == KzMode::Exact && delta <= 1e-12 * kz_cur) return kz_cur;
    }
    if (mode == KzMode::Fast) return kz_cur;
    throw NumericalError("extraordinary kz fixed point did not converge in 50 iterations");
}

double delta_kz(const WaveVectorT& q_s, const WaveVectorT& q_i,
                const CrystalSpec& crystal, KzMode mode) {
    const WaveVectorT q_p{q_s.qx + q_i.qx, q_s.qy + q_i.qy};
    const double kp = kz(q_p, crystal.lambda_pump_um, Polarization::Extraordinary, crystal, mode);
    const double ks = kz(q_s, crystal.lambda_signal_um, crystal.signal_pol, crystal, mode);
    const double ki = kz(q_i, crystal.lambda_idler_um, crystal.idler_pol(), crystal, mode);
    return kp - ks - ki;
}

double phase_match_amplitude(const WaveVectorT& q_s, const WaveVectorT& q_i,
                             const CrystalSpec& crystal, KzMode mode) {
    return sinc(delta_kz(q_s, q_i, crystal, mode) * crystal.length_um / 2.0);
}

double collinear_phase_matching_angle(const CrystalSpec& crystal) {
    auto mismatch = [&](double angle) {
        CrystalSpec c = crystal;
        c.axis_angle_rad = angle;
        return delta_kz(WaveVectorT{0, 0}, WaveVectorT{0, 0}, c);
    };
    double lo = 20.0 * kPi / 180.0, hi = 70.0 * kPi / 180.0;
    double flo = mismatch(lo), fhi = mismatch(hi);
    if (flo * fhi > 0)
        throw NumericalError("no collinear phase-matching angle in [20, 70] deg");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mismatch(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0) { hi = mid; fhi = fm; }
        else              { lo = mid; flo = fm; }
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

double dkz_1d(const CrystalSpec& c, double q_sy, double q_iy) {
    return delta_kz(WaveVectorT{0, q_sy}, WaveVectorT{0, q_iy}, c);
}

// Bisection for f(t)=0 on [a,b] assuming a sign change.
template <typename F>
double bisect(F f, double a, double b, double fa, int iters = 80) {
    for (int i = 0; i < iters; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0) b = m;
        else { a = m; fa = fm; }
    }
    return 0.5 * (a + b);
}

} // namespace

std::vector<Polyline> phase_match_curves(const CrystalSpec& crystal,
                                         double range_min, double range_max,
                                         int samples_per_axis) {
    const int n = samples_per_axis;
    const double step = (range_max - range_min) / (n - 1);
    const double residual_cap = 0.01 / (crystal.length_um / 2.0);

    // dkz on the grid via 1-D tables (q_x = 0 throughout)
    std::vector<double> axis(n), kzs(n), kzi(n), kzp(2 * n - 1);
    for (int i = 0; i < n; ++i) axis[i] = range_min + i * step;
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        kzs[i] = kz(WaveVectorT{0, axis[i]}, crystal.lambda_signal_um, crystal.signal_pol, crystal);
        kzi[i] = kz(WaveVectorT{0, axis[i]}, crystal.lambda_idler_um, crystal.idler_pol(), crystal);
    }
    #pragma omp parallel for schedule(static)
    for (int s = 0; s < 2 * n - 1; ++s) {
        const double sum = 2.0 * range_min + s * step;
        kzp[s] = kz(WaveVectorT{0, sum}, crystal.lambda_pump_um, Polarization::Extraordinary, crystal);
    }
    auto f_grid = [&](int j, int k) { return kzp[j + k] - kzs[j] - kzi[k]; };

    // Marching squares: collect refined edge crossings per cell, chain cells
    // into polylines via a simple segment-stitching pass.
    struct Seg { CurvePoint a, b; };
    std::vector<Seg> segs;
    auto refine_y = [&](double q_sy_fixed, double y0, double y1, double f0) {
        auto f = [&](double y) { return dkz_1d(crystal, q_sy_fixed, y); };
        return CurvePoint{q_sy_fixed, bisect(f, y0, y1, f0)};
    };
    auto refine_x = [&](double q_iy_fixed, double x0, double x1, double f0) {
        auto f = [&](double x) { return dkz_1d(crystal, x, q_iy_fixed); };
        return CurvePoint{bisect(f, x0, x1, f0), q_iy_fixed};
    };

    for (int j = 0; j + 1 < n; ++j) {
        for (int k = 0; k + 1 < n; ++k) {
            const double f00 = f_grid(j, k), f10 = f_grid(j + 1, k);
            const double f01 = f_grid(j, k + 1), f11 = f_grid(j + 1, k + 1);
            std::vector<CurvePoint> pts;
            if (f00 * f10 < 0) pts.push_back(refine_x(axis[k], axis[j], axis[j + 1], f00));
            if (f01 * f11 < 0) pts.push_back(refine_x(axis[k + 1], axis[j], axis[j + 1], f01));
            if (f00 * f01 < 0) pts.push_back(refine_y(axis[j], axis[k], axis[k + 1], f00));
            if (f10 * f11 < 0) pts.push_back(refine_y(axis[j + 1], axis[k], axis[k + 1], f10));
            if (pts.size() == 2) segs.push_back({pts[0], pts[1]});
            else if (pts.size() == 4) {
                // saddle cell: report both branches, pairing by proximity
                auto d2 = [](const CurvePoint& a, const CurvePoint& b) {
                    const double dx = a.q_sy - b.q_sy, dy = a.q_iy - b.q_iy;
                    return dx * dx + dy * dy;
                };
                if (d2(pts[0], pts[1]) + d2(pts[2], pts[3]) <
                    d2(pts[0], pts[2]) + d2(pts[1], pts[3])) {
                    segs.push_back({pts[0], pts[1]});
                    segs.push_back({pts[2], pts[3]});
                } else {
                    segs.push_back({pts[0], pts[2]});
                    segs.push_back({pts[1], pts[3]});
                }
            }
        }
    }

    // stitch segments into polylines
    const double tol = 0.51 * step;
    auto close = [&](const CurvePoint& a, const CurvePoint& b) {
        return std::abs(a.q_sy - b.q_sy) <= tol && std::abs(a.q_iy - b.q_iy) <= tol;
    };
    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> out;
    for (size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Polyline line{segs[i].a, segs[i].b};
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t m = 0; m < segs.size(); ++m) {
                if (used[m]) continue;
                if (close(line.back(), segs[m].a))      { line.push_back(segs[m].b); used[m] = true; grew = true; }
                else if (close(line.back(), segs[m].b)) { line.push_back(segs[m].a); used[m] = true; grew = true; }
                else if (close(line.front(), segs[m].a)) { line.insert(line.begin(), segs[m].b); used[m] = true; grew = true; }
                else if (close(line.front(), segs[m].b)) { line.insert(line.begin(), segs[m].a); used[m] = true; grew = true; }
            }
        }
        out.push_back(std::move(line));
    }

    // every vertex must satisfy the residual bound (bisection gives much better)
    for (auto& line : out)
        for (auto& p : line)
            if (std::abs(dkz_1d(crystal, p.q_sy, p.q_iy)) >= residual_cap)
                throw NumericalError("phase-match curve vertex residual above bound");
    return out;
}

std::vector<CurveCrossing> pump_line_crossings(const CrystalSpec& crystal,
                                               double pump_sum,
                                               double range_min, double range_max) {
    auto f = [&](double q_sy) { return dkz_1d(crystal, q_sy, pump_sum - q_sy); };
    const int n = 4096;
    const double step = (range_max - range_min) / (n - 1);
    std::vector<CurveCrossing> out;
    double prev = f(range_min);
    for (int i = 1; i < n; ++i) {
        const double x = range_min + i * step;
        const double cur = f(x);
        if (prev * cur < 0) {
            const double root = bisect(f, x - step, x, prev);
            const double q_iy = pump_sum - root;
            const double eps = 1e-6;
            const double dds = (dkz_1d(crystal, root + eps, q_iy) -
                                dkz_1d(crystal, root - eps, q_iy)) / (2 * eps);
            const double ddi = (dkz_1d(crystal, root, q_iy + eps) -
                                dkz_1d(crystal, root, q_iy - eps)) / (2 * eps);
            out.push_back({root, q_iy, -dds / ddi});
        }
        prev = cur;
    }
    return out;
}

std::vector<double> antidiagonal_ring_roots(const CrystalSpec& crystal, double q_cap) {
    auto f = [&](double q) { return dkz_1d(crystal, q, -q); };
    const int n = 4096;
    const double step = 2.0 * q_cap / (n - 1);
    std::vector<double> roots;
    double prev = f(-q_cap);
    for (int i = 1; i < n; ++i) {
        const double x = -q_cap + i * step;
        const double cur = f(x);
        if (prev * cur < 0) roots.push_back(bisect(f, x - step, x, prev));
        prev = cur;
    }
    return roots;
}

double ring_outer_edge(const CrystalSpec& crystal, double q_cap) {
    const double target = kPi / (crystal.length_um / 2.0);
    auto g = [&](double q) { return std::abs(dkz_1d(crystal, q, -q)) - target; };
    auto roots = antidiagonal_ring_roots(crystal, q_cap);
    if (roots.empty()) throw NumericalError("no phase matching on the antidiagonal");
    double outer_root = roots.front();
    for (double r : roots)
        if (std::abs(r) > std::abs(outer_root)) outer_root = r;
    // walk outward from the outermost root until |dkz| L/2 passes pi
    const double step = (outer_root >= 0 ? 1.0 : -1.0) * 1e-3;
    double q = outer_root;
    double prev = g(q);
    for (int i = 0; i < 400000 && std::abs(q) <= q_cap; ++i) {
        q += step;
        const double cur = g(q);
        if (prev < 0 && cur >= 0)
            return std::abs(bisect(g, q - step, q, prev));
        prev = cur;
    }
    return std::abs(outer_root) * 1.1; // band edge beyond cap; safe margin
}

} // namespace spdc
