#include "svpath/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svpath::kernel {

namespace {

void require_positive_step(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error("time step must be positive");
}

}  // namespace

double log_price_drift(double y, const ModelParams& p) noexcept { return p.r - 0.5 * std::exp(y); }

double log_variance_drift(double y, const ModelParams& p) noexcept
{
    return p.lambda * std::exp(-y) + p.mu - 0.5 * p.xi * p.xi * std::exp(2.0 * y * (p.alpha - 1.0));
}

double log_variance_vol(double y, const ModelParams& p) noexcept { return p.xi * std::exp(y * (p.alpha - 1.0)); }

double log_normalization(double eps, double y, const ModelParams& p)
{
    require_positive_step(eps);
    return y * (0.5 - p.alpha) - std::log(2.0 * std::numbers::pi * eps * p.xi * std::sqrt(1.0 - p.rho * p.rho));
}

LagrangianParts lagrangian(double dx, double dy, double y, double eps, const ModelParams& p)
{
    require_positive_step(eps);
    const double one_minus_rho2 = 1.0 - p.rho * p.rho;
    const double u = dx / eps - log_price_drift(y, p);
    const double v = dy / eps - log_variance_drift(y, p);
    // Residual of u after regressing on v: u - rho (sigma_x / sigma_y) v.
    const double residual = u - p.rho * std::exp(y * (1.5 - p.alpha)) / p.xi * v;
    const double vol_y = log_variance_vol(y, p);
    return {
        -std::exp(-y) / (2.0 * one_minus_rho2) * residual * residual,
        -v * v / (2.0 * vol_y * vol_y),
    };
}

StepLaw conditional_price_step(double x_next, double y_next, double dy, double eps, const ModelParams& p)
{
    require_positive_step(eps);
    const double vol_x = std::exp(0.5 * y_next);
    const double vol_y = log_variance_vol(y_next, p);
    const double shock_y = dy - eps * log_variance_drift(y_next, p);
    return {
        x_next + eps * log_price_drift(y_next, p) + p.rho * vol_x / vol_y * shock_y,
        vol_x * std::sqrt(eps * (1.0 - p.rho * p.rho)),
    };
}

double log_propagator(double x_from, double y_from, double x_to, double y_to, double eps, const ModelParams& p)
{
    const auto parts = lagrangian(x_to - x_from, y_to - y_from, y_from, eps, p);
    return log_normalization(eps, y_from, p) + eps * parts.total();
}

double log_variance_step_density(double y_from, double y_to, double eps, const ModelParams& p)
{
    require_positive_step(eps);
    const double sd = log_variance_vol(y_from, p) * std::sqrt(eps);
    const double z = (y_to - y_from - eps * log_variance_drift(y_from, p)) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace svpath::kernel
