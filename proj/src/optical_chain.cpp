#include "spdc/optical_chain.hpp"

#include <algorithm>
#include <cmath>

namespace spdc {

namespace {

// aperture size/centers in grid momentum units
struct ResolvedAperture {
    double half_size = 0;
    double cx = 0, cy = 0;
};

ResolvedAperture resolve(const ApertureSpec& spec,
                         const std::optional<ConeMeasurement>& cone,
                         double plane_scale_mm) {
    ResolvedAperture r;
    if (spec.units == ApertureUnits::Relative) {
        if (!cone)
            throw ConfigError("relative aperture requires a measured cone diameter");
        if (!(spec.size > 0 && spec.size <= 1.5))
            throw ConfigError("relative aperture size must lie in (0, 1.5]");
        r.half_size = 0.5 * spec.size * cone->diameter;
        // center offsets are measured from the plane origin (one physical
        // aperture serves both arms); units: fractions of the cone diameter
        r.cx = spec.center_x * cone->diameter;
        r.cy = spec.center_y * cone->diameter;
    } else {
        if (!(plane_scale_mm > 0))
            throw ConfigError("millimeter aperture requires a positive plane scale");
        if (!(spec.size > 0)) throw ConfigError("aperture size must be > 0");
        r.half_size = 0.5 * spec.size / plane_scale_mm;
        r.cx = spec.center_x / plane_scale_mm;
        r.cy = spec.center_y / plane_scale_mm;
    }
    return r;
}

} // namespace

std::vector<double> aperture_mask(const ApertureSpec& spec, const GridAxis& ax,
                                  const GridAxis& ay,
                                  const std::optional<ConeMeasurement>& cone,
                                  double plane_scale_mm) {
    std::vector<double> m(static_cast<size_t>(ax.n) * ay.n, 1.0);
    if (spec.shape == ApertureShape::None) return m;
    const ResolvedAperture r = resolve(spec, cone, plane_scale_mm);
    for (int ix = 0; ix < ax.n; ++ix) {
        for (int iy = 0; iy < ay.n; ++iy) {
            const double qx = ax.q(ix), qy = ay.q(iy);
            bool pass = true;
            switch (spec.shape) {
                case ApertureShape::VerticalSlit:
                    pass = std::abs(qx - r.cx) <= r.half_size;
                    break;
                case ApertureShape::InverseSlit:
                    pass = std::abs(qx - r.cx) > r.half_size;
                    break;
                case ApertureShape::Circle: {
                    const double dx = qx - r.cx, dy = qy - r.cy;
                    pass = dx * dx + dy * dy <= r.half_size * r.half_size;
                    break;
                }
                case ApertureShape::None:
                    break;
            }
            m[static_cast<size_t>(ix) * ay.n + iy] = pass ? 1.0 : 0.0;
        }
    }
    return m;
}

std::vector<double> aperture_mask_1d(const ApertureSpec& spec, const GridAxis& axis,
                                     const std::optional<ConeMeasurement>& cone,
                                     double plane_scale_mm) {
    std::vector<double> m(axis.n, 1.0);
    if (spec.shape == ApertureShape::None) return m;
    const ResolvedAperture r = resolve(spec, cone, plane_scale_mm);

    if (spec.shape == ApertureShape::Circle) {
        for (int i = 0; i < axis.n; ++i)
            m[i] = std::abs(axis.q(i) - r.cy) <= r.half_size ? 1.0 : 0.0;
        return m;
    }

    // ring-arc shadow of an x-restriction
    if (!cone) throw ConfigError("slit apertures in the 1-D model require a measured cone");
    const double R = 0.5 * cone->diameter;
    const double c = cone->center_qy;
    const double h = std::min(r.half_size, R);
    const double thr = std::sqrt(std::max(R * R - h * h, 0.0));
    for (int i = 0; i < axis.n; ++i) {
        const bool in_strip = std::abs(axis.q(i) - c) >= thr; // arcs surviving |q_x| <= h
        const bool pass = spec.shape == ApertureShape::VerticalSlit ? in_strip : !in_strip;
        m[i] = pass ? 1.0 : 0.0;
    }
    return m;
}

std::vector<double> double_slit_mask(const GridAxis& y_axis, const DoubleSlitSpec& slit) {
    slit.validate();
    std::vector<double> m(y_axis.n, 0.0);
    const double c1 = slit.offset_um + slit.separation_um / 2.0;
    const double c2 = slit.offset_um - slit.separation_um / 2.0;
    int n1 = 0, n2 = 0;
    for (int i = 0; i < y_axis.n; ++i) {
        const double y = y_axis.x(i);
        if (std::abs(y - c1) <= slit.width_um / 2.0) { m[i] = 1.0; ++n1; }
        else if (std::abs(y - c2) <= slit.width_um / 2.0) { m[i] = 1.0; ++n2; }
    }
    if (n1 < 4 || n2 < 4)
        throw ConfigError("double slit under-resolved: fewer than 4 samples per opening");
    return m;
}

ComplexField2D apply_double_slit(const ComplexField2D& field, const DoubleSlitSpec& slit) {
    if (field.domain() != Domain::Position)
        throw ConfigError("apply_double_slit expects a position-domain field");
    const std::vector<double> m = double_slit_mask(field.ay, slit);
    ComplexField2D out = field;
    for (int ix = 0; ix < field.ax.n; ++ix)
        for (int iy = 0; iy < field.ay.n; ++iy)
            out.at(ix, iy) *= m[iy];
    return out;
}

std::vector<Complex> apply_double_slit_1d(const std::vector<Complex>& psi,
                                          const GridAxis& y_axis, const DoubleSlitSpec& slit) {
    if (static_cast<int>(psi.size()) != y_axis.n)
        throw ConfigError("field length does not match the axis");
    const std::vector<double> m = double_slit_mask(y_axis, slit);
    std::vector<Complex> out(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) out[i] = psi[i] * m[i];
    return out;
}

SlitOpenings slit_openings(const GridAxis& y_axis, const DoubleSlitSpec& slit) {
    slit.validate();
    SlitOpenings o{-1, -2, -1, -2};
    const double c1 = slit.offset_um + slit.separation_um / 2.0;
    const double c2 = slit.offset_um - slit.separation_um / 2.0;
    for (int i = 0; i < y_axis.n; ++i) {
        const double y = y_axis.x(i);
        if (std::abs(y - c1) <= slit.width_um / 2.0) {
            if (o.upper_first < 0) o.upper_first = i;
            o.upper_last = i;
        } else if (std::abs(y - c2) <= slit.width_um / 2.0) {
            if (o.lower_first < 0) o.lower_first = i;
            o.lower_last = i;
        }
    }
    if (o.upper_first < 0 || o.lower_first < 0)
        throw ConfigError("slit openings fall outside the position grid");
    return o;
}

ConeMeasurement measure_cone_diameter(const std::vector<double>& map,
                                      const GridAxis& ax, const GridAxis& ay) {
    if (map.size() != static_cast<size_t>(ax.n) * ay.n)
        throw ConfigError("map size does not match the grid");
    double total = 0, cx = 0, cy = 0;
    for (int ix = 0; ix < ax.n; ++ix)
        for (int iy = 0; iy < ay.n; ++iy) {
            const double w = map[static_cast<size_t>(ix) * ay.n + iy];
            total += w;
            cx += w * ax.q(ix);
            cy += w * ay.q(iy);
        }
    if (!(total > 0)) throw NumericalError("cone measurement: empty map");
    cx /= total;
    cy /= total;

    // radial profile about the centroid, bin width = one grid cell
    const double dr = std::min(ax.dq(), ay.dq());
    const double rmax = std::hypot(ax.q_max + std::abs(cx), ay.q_max + std::abs(cy));
    const int nbins = static_cast<int>(rmax / dr) + 1;
    std::vector<double> prof(nbins, 0.0), cnt(nbins, 0.0);
    for (int ix = 0; ix < ax.n; ++ix)
        for (int iy = 0; iy < ay.n; ++iy) {
            const double r = std::hypot(ax.q(ix) - cx, ay.q(iy) - cy);
            const int b = std::min(static_cast<int>(r / dr), nbins - 1);
            prof[b] += map[static_cast<size_t>(ix) * ay.n + iy];
            cnt[b] += 1.0;
        }
    for (int b = 0; b < nbins; ++b)
        if (cnt[b] > 0) prof[b] /= cnt[b];

    double best = 0;
    int bestb = -1;
    for (int b = 2; b < nbins - 1; ++b) {
        if (prof[b] >= prof[b - 1] && prof[b] > prof[b + 1] && prof[b] > best) {
            best = prof[b];
            bestb = b;
        }
    }
    if (bestb < 0) throw NumericalError("cone measurement: no radial peak found");
    // reject flat maps: the ring peak must stand above the inner profile
    double inner = prof[0];
    if (!(best > 1.05 * inner) && bestb < 3)
        throw NumericalError("cone measurement: no ring structure");
    return ConeMeasurement{cx, cy, 2.0 * (bestb + 0.5) * dr};
}

ConeMeasurement measure_cone_1d(const std::vector<double>& marginal, const GridAxis& axis) {
    if (static_cast<int>(marginal.size()) != axis.n)
        throw ConfigError("marginal size does not match the axis");
    double vmax = 0;
    for (double v : marginal) vmax = std::max(vmax, v);
    if (!(vmax > 0)) throw NumericalError("cone measurement: empty marginal");
    int first = -1, last = -1;
    for (int i = 1; i + 1 < axis.n; ++i) {
        if (marginal[i] >= marginal[i - 1] && marginal[i] > marginal[i + 1] &&
            marginal[i] > 0.10 * vmax) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0 || last <= first)
        throw NumericalError("cone measurement: fewer than two marginal lobes");
    ConeMeasurement c;
    c.center_qx = 0;
    c.center_qy = 0.5 * (axis.q(first) + axis.q(last));
    c.diameter = axis.q(last) - axis.q(first);
    return c;
}

} // namespace spdc
