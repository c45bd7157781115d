#pragma once

#include <optional>
#include <vector>

#include "spdc/fourier.hpp"
#include "spdc/grid.hpp"

namespace spdc {

enum class ApertureShape { None, VerticalSlit, InverseSlit, Circle };
enum class ApertureUnits { Relative, Millimeters };
enum class ApertureArm { Signal, Idler, Both };

// Ring geometry measured from an unmasked singles map or marginal.
struct ConeMeasurement {
    double center_qx = 0; // unused by the 1-D locator
    double center_qy = 0;
    double diameter = 0;  // rad/um
};

// Far-field aperture between the photo lens and the PBS. Sizes are fractions
// of the measured cone diameter or millimeters in the aperture plane
// (converted through plane_scale_mm, mm per rad/um). Center offsets are
// measured from the plane origin in the same units, so one physical aperture
// resolves consistently for both arms.
struct ApertureSpec {
    ApertureShape shape = ApertureShape::None;
    ApertureUnits units = ApertureUnits::Relative;
    double size = 0.30;      // slit width or circle diameter
    double center_x = 0.0;
    double center_y = 0.0;
    ApertureArm arm = ApertureArm::Both;
};

struct DoubleSlitSpec {
    double width_um = 65.0;
    double separation_um = 235.0;
    double offset_um = 0.0;

    void validate() const {
        if (!(width_um > 0 && width_um < separation_um))
            throw ConfigError("double slit requires 0 < width < separation");
    }
};

// Binary mask on the 2-D momentum grid. Relative mode requires a measured cone.
std::vector<double> aperture_mask(const ApertureSpec& spec, const GridAxis& ax,
                                  const GridAxis& ay,
                                  const std::optional<ConeMeasurement>& cone,
                                  double plane_scale_mm);

// 1-D reduction of the aperture onto the q_y axis. Circles restrict q_y
// directly. Vertical slits restrict q_x, which the y-only model cannot carry;
// they act through their ring-arc shadow instead: an x-strip of half-width h
// keeps the ring arcs with |q_y - c| >= sqrt(R^2 - h^2), so the mask passes
// exactly those q_y (inverse slit: the complement).
std::vector<double> aperture_mask_1d(const ApertureSpec& spec, const GridAxis& axis,
                                     const std::optional<ConeMeasurement>& cone,
                                     double plane_scale_mm);

// Pointwise double-slit transmission along y (uniform in x). Throws
// ConfigError if an opening is resolved by fewer than 4 samples.
std::vector<double> double_slit_mask(const GridAxis& y_axis, const DoubleSlitSpec& slit);
ComplexField2D apply_double_slit(const ComplexField2D& field, const DoubleSlitSpec& slit);
std::vector<Complex> apply_double_slit_1d(const std::vector<Complex>& psi,
                                          const GridAxis& y_axis, const DoubleSlitSpec& slit);

// Sample index ranges [first, last] of the two openings; opening 1 is the
// upper slit (positive y).
struct SlitOpenings {
    int upper_first = 0, upper_last = 0;
    int lower_first = 0, lower_last = 0;
};
SlitOpenings slit_openings(const GridAxis& y_axis, const DoubleSlitSpec& slit);

// Ring diameter from the radial intensity profile about the map centroid.
// Throws NumericalError when no ring is found.
ConeMeasurement measure_cone_diameter(const std::vector<double>& map,
                                      const GridAxis& ax, const GridAxis& ay);

// 1-D locator: cone center and diameter from the two outermost prominent
// peaks of a singles marginal.
ConeMeasurement measure_cone_1d(const std::vector<double>& marginal, const GridAxis& axis);

} // namespace spdc
