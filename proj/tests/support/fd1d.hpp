#pragma once

#include <vector>

namespace tw::testsupport {

/// Independent 1D through-thickness oracle for the image-source series.
///
/// Explicit finite differences on a two-layer medium: the slab [0, L) keeps
/// the true material; behind it sits a deep backing layer with the same
/// diffusivity but volumetric heat capacity scaled by (1-R)/(1+R), which is
/// exactly the effusivity ratio that produces a thermal-wave reflection
/// coefficient R at the interface (R = 1 degenerates to an insulated back
/// face). The front face is adiabatic; the impulse enters as the analytic
/// half-space kernel at a small start time, before any boundary influence.
struct Fd1dConfig {
    double alpha = 1.2e-5;               ///< m^2/s, both layers
    double rho_cp = 7850.0 * 490.0;      ///< J/(m^3 K), slab
    double reflectivity = 0.9;
    double L = 1e-3;                     ///< slab thickness, m
    double q_per_area = 500.0 / (19e-3 * 19e-3);  ///< J/m^2 impulse
    double domain_depth = 0.04;          ///< m
    double dz = 1.0 / 60.0 * 1e-3;       ///< cell size (>= 2000 cells over the domain)
    double t_start = 0.002;              ///< s, analytic hand-off time
    double cfl_fraction = 0.25;          ///< dt = fraction * dz^2 / alpha
};

/// Surface temperature rise (T(0,t) - T0) at the requested times,
/// which must be ascending and all > t_start.
std::vector<double> fd_surface_rise(const Fd1dConfig& cfg, const std::vector<double>& times);

}  // namespace tw::testsupport
