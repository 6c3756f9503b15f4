#include "thermoweld/thermal/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace tw {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// 1 + 2 sum_{n>=1} R^n exp(-(nL)^2/(alpha t)), truncated when the
/// geometric bound on the tail drops below tol relative to the sum.
double image_source_series(double L, double alpha_t, double R, double tol) {
    if (R == 0.0) return 1.0;
    double sum = 1.0;
    double r_pow = 1.0;
    const double tail_gain = R / (1.0 - R);  // bounds sum of remaining terms
    for (int n = 1; n < 10000; ++n) {
        r_pow *= R;
        const double e = n * L;
        const double term = 2.0 * r_pow * std::exp(-(e * e) / alpha_t);
        sum += term;
        if (term * tail_gain < tol * sum) break;
    }
    return sum;
}

}  // namespace

double impulse_temperature(double x_rel, double y_rel, double t, double L,
                           const MaterialParams& mat, const LaserPulse& pulse) {
    if (!(t > 0.0)) throw std::invalid_argument("impulse_temperature: t must be > 0");
    if (!(L > 0.0)) throw std::invalid_argument("impulse_temperature: L must be > 0");

    const double alpha_t = mat.alpha * t;
    const double peak = (pulse.absorbed_energy_J / pulse.area_m2) /
                        (mat.rho * mat.c_p * std::sqrt(kPi * alpha_t));
    const double lateral = std::exp(-(x_rel * x_rel + y_rel * y_rel) / (4.0 * alpha_t));
    const double series = image_source_series(L, alpha_t, mat.reflectivity, mat.series_tol);
    double rise = peak * lateral * series;
    if (std::isfinite(mat.loss_time_constant_s))
        rise *= std::exp(-t / mat.loss_time_constant_s);
    return mat.T0 + rise;
}

double pulse_temperature(double x_rel, double y_rel, double t, double L,
                         const MaterialParams& mat, const LaserPulse& pulse,
                         double frame_rate) {
    if (!(frame_rate > 0)) throw std::invalid_argument("pulse_temperature: frame_rate must be > 0");
    const double dt = 1.0 / frame_rate;
    const double t_on = pulse.on_frame * dt;
    if (!(t > t_on)) throw std::invalid_argument("pulse_temperature: t must be after pulse start");

    const int n_sub = pulse.off_frame - pulse.on_frame;
    double rise = 0.0;
    for (int k = 0; k < n_sub; ++k) {
        const double elapsed = t - (t_on + k * dt);
        if (elapsed <= 0.0) break;  // not yet fired
        rise += impulse_temperature(x_rel, y_rel, elapsed, L, mat, pulse) - mat.T0;
    }
    return mat.T0 + rise / n_sub;
}

}  // namespace tw
