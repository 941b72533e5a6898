#pragma once

#include "svpath/model.hpp"

#include <cstdint>

namespace svpath::reference {

/// Black-Scholes value of a European option on a non-dividend asset.
double bs_price(double spot, double strike, double r, double sigma, double maturity, bool is_call);

/// dPrice/dSigma.
double bs_vega(double spot, double strike, double r, double sigma, double maturity);

/// Volatility reproducing `price`. Throws std::domain_error when the price lies
/// outside the open no-arbitrage band (discounted intrinsic, upper bound).
double implied_vol(double price, double spot, double strike, double r, double maturity, bool is_call);

struct EulerConfig {
    int steps = 250;
    std::int64_t paths = 100000;
    std::uint64_t seed = 0;
    /// Monitoring intervals of the payoff trajectory; 0 means one per step.
    /// Each interval is split into ceil(steps / intervals) Euler steps.
    int observation_intervals = 0;
    int threads = 1;
};

/// Euler-Maruyama simulation of the stochastic-volatility SDE pair under the
/// pricing measure, for any (lambda, alpha).
///   alpha = 1: y = ln V stepped in drift form (exact for lambda = 0).
///   otherwise: V stepped in levels with full truncation.
/// ln S is always stepped in drift form with the variance frozen over the step.
PriceResult euler_oracle(const Contract& contract, const MarketState& state, const ModelParams& params,
                         const EulerConfig& config);

}  // namespace svpath::reference
