#pragma once

#include "svpath/bridge.hpp"
#include "svpath/model.hpp"
#include "svpath/rng.hpp"

#include <functional>
#include <span>
#include <vector>

namespace svpath::pricer {

/// Supplies the standard normals for one addressed stream. The default source
/// draws from Philox keyed on (seed, address); tests substitute their own.
using NormalSource = std::function<void(StreamAddress, std::span<double>)>;

NormalSource philox_source(std::uint64_t seed);

/// Conditional expectation of the payoff given the terminal log-variance y0,
/// with the variance of that Monte-Carlo estimate.
struct ChiEstimate {
    double mean = 0.0;
    double variance = 0.0;
};

ChiEstimate chi(double y0, const MarketState& state, const ModelParams& params, const Contract& contract,
                const GridSpec& grid, const McConfig& mc, const bridge::SpectralBridge& spectral,
                std::uint32_t node = 0);

ChiEstimate chi(double y0, const MarketState& state, const ModelParams& params, const Contract& contract,
                const GridSpec& grid, const McConfig& mc, const bridge::SpectralBridge& spectral,
                std::uint32_t node, const NormalSource& source);

/// Several contracts priced on one set of paths. All contracts must share a maturity.
struct StripResult {
    std::vector<PriceResult> results;
    /// Row-major estimator covariance between the contract prices.
    std::vector<double> covariance;
    /// Sum of quadrature weight times endpoint density; 1 up to truncation.
    double mass = 0.0;
};

/// Outer quadrature over terminal log-variance, spectral-bridge variance paths
/// and conditional log-price paths inside each node.
StripResult price_strip(std::span<const Contract> contracts, const MarketState& state, const ModelParams& params,
                        const GridSpec& grid, const McConfig& mc);

PriceResult price(const Contract& contract, const MarketState& state, const ModelParams& params,
                  const GridSpec& grid, const McConfig& mc);

/// Plain nested Monte-Carlo: log-variance stepped forward from today with no
/// endpoint conditioning, then log-price conditional on it. Uses
/// variance_paths * y0_nodes variance trajectories so the path budget matches
/// price_strip.
StripResult price_sequential_strip(std::span<const Contract> contracts, const MarketState& state,
                                   const ModelParams& params, const GridSpec& grid, const McConfig& mc);

PriceResult price_sequential(const Contract& contract, const MarketState& state, const ModelParams& params,
                             const GridSpec& grid, const McConfig& mc);

/// Bounds of the outer y0 integral: centre +- halfwidth * xi * sqrt(tau),
/// centre = y_today + (mu - xi^2/2) tau.
std::pair<double, double> terminal_log_variance_bounds(const MarketState& state, const ModelParams& params,
                                                       const GridSpec& grid, double maturity);

}  // namespace svpath::pricer
