#pragma once

#include "thermoweld/thermal/params.hpp"

namespace tw {

/// Surface temperature at time t after an instantaneous surface heating
/// impulse on a plate of thickness L, from the image-source series
///
///   T = T0 + (Q/A) / (rho c_p sqrt(pi alpha t))
///          * exp(-(x^2+y^2)/(4 alpha t))
///          * (1 + 2 sum_n R^n exp(-(n L)^2 / (alpha t)))
///
/// multiplied by the optional Newton-cooling factor exp(-t/tau).
///
/// x_rel/y_rel are the offsets from the nearest point of the illuminated
/// region, so they are zero for pixels inside it (homogeneous illumination;
/// lateral decay only applies beyond the rectangle edge).
///
/// The series is truncated once the remaining geometric tail is below
/// series_tol relative to the partial sum. Throws on t <= 0 or L <= 0.
double impulse_temperature(double x_rel, double y_rel, double t, double L,
                           const MaterialParams& mat, const LaserPulse& pulse);

/// Finite pulse by Duhamel superposition: the pulse energy is split into
/// (off_frame - on_frame) sub-impulses spaced 1/frame_rate apart, each
/// carrying Q/n_sub; only sub-impulses already fired contribute.
/// Requires t > on_frame / frame_rate.
double pulse_temperature(double x_rel, double y_rel, double t, double L,
                         const MaterialParams& mat, const LaserPulse& pulse,
                         double frame_rate);

}  // namespace tw
