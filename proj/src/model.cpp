#include "svpath/model.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace svpath {

namespace {

[[noreturn]] void throw_joined(const std::string& what, const std::vector<std::string>& errors)
{
    std::ostringstream os;
    os << what << ": ";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i > 0) os << "; ";
        os << errors[i];
    }
    throw std::invalid_argument(os.str());
}

constexpr std::array<std::pair<PayoffKind, const char*>, 7> kKindNames{{
    {PayoffKind::EuropeanCall, "european_call"},
    {PayoffKind::EuropeanPut, "european_put"},
    {PayoffKind::AsianArithmeticCall, "asian_arithmetic_call"},
    {PayoffKind::AsianGeometricCall, "asian_geometric_call"},
    {PayoffKind::LookbackFixedCall, "lookback_fixed_call"},
    {PayoffKind::UpAndOutCall, "up_and_out_call"},
    {PayoffKind::Custom, "custom"},
}};

}  // namespace

std::vector<std::string> validate(const ModelParams& p)
{
    std::vector<std::string> errors;
    const auto finite = [&](double v, const char* name) {
        if (!std::isfinite(v)) errors.push_back(std::string(name) + " must be finite");
    };
    finite(p.r, "r");
    finite(p.mu, "mu");
    finite(p.lambda, "lambda");
    finite(p.k, "k");
    finite(p.alpha, "alpha");
    if (!(p.xi > 0.0) || !std::isfinite(p.xi)) errors.emplace_back("xi>0");
    if (!(std::abs(p.rho) < 1.0)) errors.emplace_back("|rho|<1");
    // With alpha != 1 the variance level is simulated directly and can only
    // stay positive if the constant drift is not pushing it below zero.
    if (std::isfinite(p.lambda) && p.alpha != 1.0 && p.lambda < 0.0) {
        errors.emplace_back("lambda>=0 required for V>0 when alpha!=1");
    }
    return errors;
}

void require_valid(const ModelParams& params)
{
    if (auto errors = validate(params); !errors.empty()) throw_joined("invalid model parameters", errors);
}

MarketState MarketState::from_levels(double spot, double variance)
{
    if (!(spot > 0.0) || !(variance > 0.0)) {
        throw std::invalid_argument("spot and variance must be positive");
    }
    return {std::log(spot), std::log(variance)};
}

void require_valid(const MarketState& state)
{
    if (!std::isfinite(state.spot_log_price) || !std::isfinite(state.spot_log_variance)) {
        throw std::invalid_argument("market state must be finite");
    }
}

std::string to_string(PayoffKind kind)
{
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<PayoffKind> parse_payoff_kind(std::string_view name)
{
    for (const auto& [k, n] : kKindNames) {
        if (name == n) return k;
    }
    return std::nullopt;
}

void require_valid(const Contract& c)
{
    std::vector<std::string> errors;
    if (!(c.strike > 0.0) || !std::isfinite(c.strike)) errors.emplace_back("strike>0");
    if (!(c.maturity > 0.0) || !std::isfinite(c.maturity)) errors.emplace_back("maturity>0");
    if (c.kind == PayoffKind::UpAndOutCall) {
        if (!c.barrier) {
            errors.emplace_back("barrier required for up_and_out_call");
        } else if (!(*c.barrier > 0.0)) {
            errors.emplace_back("barrier>0");
        }
    }
    if (c.kind == PayoffKind::Custom && !c.custom_payoff) errors.emplace_back("custom payoff functional missing");
    if (!errors.empty()) throw_joined("invalid contract", errors);
}

void require_valid(const GridSpec& g)
{
    std::vector<std::string> errors;
    if (g.n < 1) errors.emplace_back("n>=1");
    if (g.y0_nodes < 3 || g.y0_nodes % 2 == 0) errors.emplace_back("y0_nodes>=3 and odd");
    if (!(g.y0_halfwidth_sigmas > 0.0)) errors.emplace_back("y0_halfwidth_sigmas>0");
    if (!errors.empty()) throw_joined("invalid grid", errors);
}

void require_valid(const McConfig& mc)
{
    std::vector<std::string> errors;
    if (mc.variance_paths < 1) errors.emplace_back("variance_paths>=1");
    if (mc.price_paths < 1) errors.emplace_back("price_paths>=1");
    if (mc.threads < 0) errors.emplace_back("threads>=0");
    if (!errors.empty()) throw_joined("invalid Monte-Carlo config", errors);
}

}  // namespace svpath
