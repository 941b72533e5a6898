#pragma once

#include "svpath/model.hpp"

#include <span>

namespace svpath::payoff {

/// Payoff parameters are the contract's own fields.
using PayoffSpec = Contract;

/// Summary statistics of one log-price trajectory, enough for every built-in kind.
struct PathSummary {
    double terminal = 0.0;         // e^{x_0}
    double arithmetic_mean = 0.0;  // mean of e^{x_i} over all n+2 samples
    double mean_log = 0.0;         // mean of x_i
    double maximum = 0.0;          // max of e^{x_i}
};

PathSummary summarize(std::span<const double> log_price);

/// Payoff from a precomputed summary. Custom payoffs need the raw path.
double evaluate(const PayoffSpec& spec, const PathSummary& summary, std::span<const double> log_price);

/// Payoff of a log-price trajectory (index 0 is maturity).
double evaluate(const PayoffSpec& spec, std::span<const double> log_price);

double evaluate(const PayoffSpec& spec, const Trajectory& trajectory);

/// Custom payoffs used throughout testing and by the CLI.
TrajectoryFunctional constant(double value);
/// e^{x_0} - strike: a forward contract.
TrajectoryFunctional forward(double strike);

}  // namespace svpath::payoff
