#include "svpath/reference.hpp"

#include "parallel.hpp"
#include "svpath/payoff.hpp"
#include "svpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace svpath::reference {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(name) + " must be positive");
}

}  // namespace

double bs_price(double spot, double strike, double r, double sigma, double maturity, bool is_call)
{
    require_positive(spot, "spot");
    require_positive(strike, "strike");
    require_positive(sigma, "sigma");
    require_positive(maturity, "maturity");
    const double sd = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + r * maturity) / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    const double df = std::exp(-r * maturity);
    if (is_call) return spot * norm_cdf(d1) - strike * df * norm_cdf(d2);
    return strike * df * norm_cdf(-d2) - spot * norm_cdf(-d1);
}

double bs_vega(double spot, double strike, double r, double sigma, double maturity)
{
    const double sd = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + r * maturity) / sd + 0.5 * sd;
    return spot * norm_pdf(d1) * std::sqrt(maturity);
}

double implied_vol(double price, double spot, double strike, double r, double maturity, bool is_call)
{
    require_positive(spot, "spot");
    require_positive(strike, "strike");
    require_positive(maturity, "maturity");
    const double forward_strike = strike * std::exp(-r * maturity);
    const double lower = is_call ? std::max(spot - forward_strike, 0.0) : std::max(forward_strike - spot, 0.0);
    const double upper = is_call ? spot : forward_strike;
    if (!std::isfinite(price) || price <= lower || price >= upper) {
        throw std::domain_error("price outside the no-arbitrage band; implied volatility undefined");
    }

    double lo = 1e-4;
    double hi = 1.0;
    while (bs_price(spot, strike, r, lo, maturity, is_call) > price && lo > 1e-12) lo *= 0.1;
    while (bs_price(spot, strike, r, hi, maturity, is_call) < price) {
        hi *= 2.0;
        if (hi > 1e3) throw std::domain_error("implied volatility above 1000");
    }
    // Bisection; the price map is increasing in sigma.
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (bs_price(spot, strike, r, mid, maturity, is_call) < price) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PriceResult euler_oracle(const Contract& contract, const MarketState& state, const ModelParams& params,
                         const EulerConfig& config)
{
    require_valid(contract);
    require_valid(state);
    require_valid(params);
    if (config.steps < 1 || config.paths < 1 || config.observation_intervals < 0) {
        throw std::invalid_argument("euler oracle needs steps >= 1 and paths >= 1");
    }
    if (config.paths >= (std::int64_t{1} << 32)) throw std::invalid_argument("euler paths must be below 2^32");

    const int intervals = config.observation_intervals == 0 ? config.steps : config.observation_intervals;
    const int substeps = (config.steps + intervals - 1) / intervals;
    const double dt = contract.maturity / (static_cast<double>(intervals) * substeps);
    const double sqrt_dt = std::sqrt(dt);
    const double rho_perp = std::sqrt(1.0 - params.rho * params.rho);
    const bool log_variance = params.alpha == 1.0;

    constexpr std::size_t kBlock = 1024;
    const auto paths = static_cast<std::size_t>(config.paths);
    const std::size_t blocks = (paths + kBlock - 1) / kBlock;
    std::vector<double> payoffs(paths);

    detail::parallel_for(blocks, config.threads, [&](std::size_t b) {
        std::vector<double> x(intervals + 1);
        const std::size_t end = std::min(paths, (b + 1) * kBlock);
        for (std::size_t path = b * kBlock; path < end; ++path) {
            NormalStream normals(config.seed, {StreamDomain::Euler, 0, static_cast<std::uint32_t>(path), 0});
            double xs = state.spot_log_price;
            double ys = state.spot_log_variance;   // used when alpha == 1
            double vs = std::exp(ys);              // used otherwise
            // Stored maturity-first: x[intervals] is today.
            x[intervals] = xs;
            for (int obs = intervals - 1; obs >= 0; --obs) {
                for (int s = 0; s < substeps; ++s) {
                    const double z2 = normals.next();
                    const double z1 = params.rho * z2 + rho_perp * normals.next();
                    if (log_variance) {
                        const double v = std::exp(ys);
                        xs += (params.r - 0.5 * v) * dt + std::sqrt(v) * sqrt_dt * z1;
                        ys += (params.lambda * std::exp(-ys) + params.mu - 0.5 * params.xi * params.xi) * dt +
                              params.xi * sqrt_dt * z2;
                    } else {
                        const double vp = std::max(vs, 0.0);
                        xs += (params.r - 0.5 * vp) * dt + std::sqrt(vp) * sqrt_dt * z1;
                        vs += (params.lambda + params.mu * vp) * dt +
                              params.xi * std::pow(vp, params.alpha) * sqrt_dt * z2;
                    }
                }
                x[obs] = xs;
            }
            payoffs[path] = payoff::evaluate(contract, std::span<const double>(x));
        }
    });

    double sum = 0.0;
    for (double p : payoffs) sum += p;
    const double mean = sum / static_cast<double>(paths);
    double ss = 0.0;
    for (double p : payoffs) ss += (p - mean) * (p - mean);
    const double discount = std::exp(-params.r * contract.maturity);
    PriceResult out;
    out.price = discount * mean;
    out.std_error = paths > 1 ? discount * std::sqrt(ss / (static_cast<double>(paths) * (paths - 1))) : 0.0;
    out.n_evaluations = static_cast<std::int64_t>(paths);
    return out;
}

}  // namespace svpath::reference
