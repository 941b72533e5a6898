#pragma once

#include "svpath/model.hpp"

namespace svpath::kernel {

// One-step transition of the discretized path integral, from (x_from, y_from)
// at index i+1 to (x_to, y_to) at index i. Coefficients are frozen at the
// starting point y_from. Increments are dx = x_to - x_from, dy = y_to - y_from.
//
// With u = dx/eps - (r - e^y/2) and v = dy/eps - drift_y(y), the log-density
// of the step is ln N(eps, y) + eps * L with
//
//   L = -e^{-y}/(2(1-rho^2)) u^2 + rho e^{y(1/2-alpha)}/(xi(1-rho^2)) u v
//       - e^{2y(1-alpha)}/(2 xi^2 (1-rho^2)) v^2.

/// Drift of the log-price: r - e^y / 2.
double log_price_drift(double y, const ModelParams& params) noexcept;

/// Drift of the log-variance: lambda e^{-y} + mu - xi^2 e^{2y(alpha-1)} / 2.
double log_variance_drift(double y, const ModelParams& params) noexcept;

/// Diffusion scale of the log-variance: xi e^{y(alpha-1)}.
double log_variance_vol(double y, const ModelParams& params) noexcept;

/// ln N(eps) = y(1/2 - alpha) - ln(2 pi eps xi sqrt(1 - rho^2)).
double log_normalization(double eps, double y, const ModelParams& params);

/// The Lagrangian after completing the square in the price increment.
struct LagrangianParts {
    double price_part = 0.0;     // depends on dx and dy
    double variance_part = 0.0;  // depends on dy only
    [[nodiscard]] double total() const noexcept { return price_part + variance_part; }
};

LagrangianParts lagrangian(double dx, double dy, double y, double eps, const ModelParams& params);

/// Conditional law of the next log-price given the current state and the
/// realised log-variance increment.
struct StepLaw {
    double mean = 0.0;
    double std = 0.0;
};

StepLaw conditional_price_step(double x_next, double y_next, double dy, double eps, const ModelParams& params);

/// ln of the one-step transition density, ln N(eps) + eps * L.
double log_propagator(double x_from, double y_from, double x_to, double y_to, double eps,
                      const ModelParams& params);

/// ln of the marginal one-step log-variance density (the variance factor of the propagator).
double log_variance_step_density(double y_from, double y_to, double eps, const ModelParams& params);

}  // namespace svpath::kernel
