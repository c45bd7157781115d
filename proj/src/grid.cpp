#include "spdc/grid.hpp"

#include <algorithm>
#include <cmath>

namespace spdc {

int GridAxis::index_of_q(double qv) const {
    int i = static_cast<int>(std::lround(qv / dq())) + n / 2;
    return std::clamp(i, 0, n - 1);
}

int GridAxis::index_of_x(double xv) const {
    int i = static_cast<int>(std::lround(xv / dx())) + n / 2;
    return std::clamp(i, 0, n - 1);
}

void GridSpec::validate() const {
    if (n < 32 || (n & (n - 1)) != 0)
        throw ConfigError("grid.n must be a power of two >= 32");
    if (!(q_max > 0)) throw ConfigError("grid.q_max must be > 0");
}

Domain domain_of(PlaneTag tag) {
    switch (tag) {
        case PlaneTag::CrystalExitMomentum:
        case PlaneTag::AperturePlane:
        case PlaneTag::DetectionFar:
            return Domain::Momentum;
        case PlaneTag::SlitPlane:
        case PlaneTag::DetectionNear:
            return Domain::Position;
    }
    return Domain::Momentum;
}

double ComplexField2D::norm_squared() const {
    const double mx = domain() == Domain::Momentum ? ax.dq() : ax.dx();
    const double my = domain() == Domain::Momentum ? ay.dq() : ay.dx();
    double s = 0;
    for (const Complex& c : v) s += std::norm(c);
    return s * mx * my;
}

} // namespace spdc
