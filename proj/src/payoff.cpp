#include "svpath/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svpath::payoff {

PathSummary summarize(std::span<const double> log_price)
{
    if (log_price.empty()) throw std::invalid_argument("empty trajectory");
    PathSummary s;
    double sum = 0.0;
    double sum_log = 0.0;
    double max_log = log_price[0];
    for (double x : log_price) {
        sum += std::exp(x);
        sum_log += x;
        max_log = std::max(max_log, x);
    }
    const auto count = static_cast<double>(log_price.size());
    s.terminal = std::exp(log_price[0]);
    s.arithmetic_mean = sum / count;
    s.mean_log = sum_log / count;
    s.maximum = std::exp(max_log);
    return s;
}

double evaluate(const PayoffSpec& spec, const PathSummary& s, std::span<const double> log_price)
{
    const double k = spec.strike;
    switch (spec.kind) {
    case PayoffKind::EuropeanCall:
        return std::max(s.terminal - k, 0.0);
    case PayoffKind::EuropeanPut:
        return std::max(k - s.terminal, 0.0);
    case PayoffKind::AsianArithmeticCall:
        return std::max(s.arithmetic_mean - k, 0.0);
    case PayoffKind::AsianGeometricCall:
        return std::max(std::exp(s.mean_log) - k, 0.0);
    case PayoffKind::LookbackFixedCall:
        return std::max(s.maximum - k, 0.0);
    case PayoffKind::UpAndOutCall:
        if (!spec.barrier) throw std::invalid_argument("up_and_out_call without barrier");
        // Discrete monitoring on the grid samples.
        return s.maximum < *spec.barrier ? std::max(s.terminal - k, 0.0) : 0.0;
    case PayoffKind::Custom:
        if (!spec.custom_payoff) throw std::invalid_argument("custom payoff functional missing");
        return spec.custom_payoff(log_price);
    }
    throw std::invalid_argument("unknown payoff kind");
}

double evaluate(const PayoffSpec& spec, std::span<const double> log_price)
{
    return evaluate(spec, summarize(log_price), log_price);
}

double evaluate(const PayoffSpec& spec, const Trajectory& trajectory)
{
    if (!trajectory.log_variance.empty() && trajectory.log_variance.size() != trajectory.log_price.size()) {
        throw std::invalid_argument("trajectory components differ in length");
    }
    return evaluate(spec, std::span<const double>(trajectory.log_price));
}

TrajectoryFunctional constant(double value)
{
    return [value](std::span<const double>) { return value; };
}

TrajectoryFunctional forward(double strike)
{
    return [strike](std::span<const double> x) { return std::exp(x[0]) - strike; };
}

}  // namespace svpath::payoff
