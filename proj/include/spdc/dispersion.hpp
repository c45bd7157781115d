#pragma once

#include <string>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

// Dispersion formula n^2(lambda) = a + b/(lambda^2 - c) - d*lambda^2,
// lambda in micrometers.
struct SellmeierSet {
    double a = 0, b = 0, c = 0, d = 0;
    double lambda_min_um = 0;
    double lambda_max_um = 0;

    double n_squared(double lambda_um) const;
};

// Eimerl et al., J. Appl. Phys. 62, 1968 (1987): beta-BaB2O4, valid 0.22-1.06 um.
SellmeierSet bbo_ordinary();
SellmeierSet bbo_extraordinary();
inline const char* bbo_source() {
    return "D. Eimerl et al., J. Appl. Phys. 62, 1968 (1987), beta-BaB2O4";
}

enum class Polarization { Ordinary, Extraordinary };

// Transverse wave vector of one photon, rad/um.
struct WaveVectorT {
    double qx = 0;
    double qy = 0;
};

// Uniaxial crystal for type-II SPDC. The optical axis lies in the y-z plane,
// tilted by axis_angle_rad from z toward -y (this orientation puts the
// double-structured part of the emission on +q_y).
struct CrystalSpec {
    double length_um = 2000.0;
    double axis_angle_rad = 41.9 * 3.14159265358979323846 / 180.0;
    double lambda_pump_um = 0.405;
    double lambda_signal_um = 0.810;
    double lambda_idler_um = 0.810;
    Polarization signal_pol = Polarization::Extraordinary; // idler gets the other one
    SellmeierSet ordinary = bbo_ordinary();
    SellmeierSet extraordinary = bbo_extraordinary();
    std::string sellmeier_source = bbo_source();

    Polarization idler_pol() const {
        return signal_pol == Polarization::Ordinary ? Polarization::Extraordinary
                                                    : Polarization::Ordinary;
    }
    // Throws ConfigError on violated invariants (energy conservation to 1e-12).
    void validate() const;
};

double index_ordinary(const SellmeierSet& set, double lambda_um);

// Extraordinary index at angle theta between wave vector and optical axis:
// n(theta) = [cos^2/n_o^2 + sin^2/n_e^2]^(-1/2).
double index_extraordinary(const SellmeierSet& set_o, const SellmeierSet& set_e,
                           double lambda_um, double theta_rad);

enum class KzMode { Exact, Fast };

// Longitudinal wave-vector component k_z = sqrt(k^2 - |q|^2), k = 2 pi n / lambda.
// For extraordinary rays n depends on the angle between (q, k_z) and the optical
// axis; the self-consistency is solved by fixed-point iteration on k_z to relative
// 1e-12 (cap 50 iterations). Fast mode does a single non-iterated evaluation.
double kz(const WaveVectorT& q, double lambda_um, Polarization pol,
          const CrystalSpec& crystal, KzMode mode = KzMode::Exact);

// Phase mismatch k_z,pump(q_s+q_i) - k_z,signal(q_s) - k_z,idler(q_i).
double delta_kz(const WaveVectorT& q_s, const WaveVectorT& q_i,
                const CrystalSpec& crystal, KzMode mode = KzMode::Exact);

// sinc(delta_kz * L / 2), sinc(0) = 1 exactly.
double phase_match_amplitude(const WaveVectorT& q_s, const WaveVectorT& q_i,
                             const CrystalSpec& crystal, KzMode mode = KzMode::Exact);

double sinc(double x);

// Axis angle (rad from z) at which collinear degenerate phase matching holds,
// found by bisection of delta_kz(0,0) over the axis angle.
double collinear_phase_matching_angle(const CrystalSpec& crystal);

struct CurvePoint {
    double q_sy = 0;
    double q_iy = 0;
};
using Polyline = std::vector<CurvePoint>;

// Zero set of delta_kz restricted to q_sx = q_ix = 0, traced by marching
// squares over [range_min, range_max]^2 with per-vertex bisection refinement
// so |delta_kz| * L/2 < 0.01 on every vertex. Empty if nothing matches.
std::vector<Polyline> phase_match_curves(const CrystalSpec& crystal,
                                         double range_min, double range_max,
                                         int samples_per_axis = 768);

struct CurveCrossing {
    double q_sy = 0;
    double q_iy = 0;
    double slope = 0; // dq_iy/dq_sy of the phase-matching curve at the crossing
};

// Intersections of the q_x = 0 phase-matching curve with the pump line
// q_sy + q_iy = pump_sum, with implicit-function slopes.
std::vector<CurveCrossing> pump_line_crossings(const CrystalSpec& crystal,
                                               double pump_sum,
                                               double range_min, double range_max);

// Roots of delta_kz(0, q, 0, -q): the emission structure on the antidiagonal.
std::vector<double> antidiagonal_ring_roots(const CrystalSpec& crystal,
                                            double q_cap = 1.6);

// Outermost |q| at which |delta_kz| * L/2 reaches pi on the antidiagonal
// (outer edge of the phase-matching band). Used for grid-coverage checks.
double ring_outer_edge(const CrystalSpec& crystal, double q_cap = 1.6);

} // namespace spdc
