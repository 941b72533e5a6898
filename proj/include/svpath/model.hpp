#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace svpath {

/// Stochastic-volatility parameters.
///
/// Price:    dS = r S dt + sqrt(V) S dZ1
/// Variance: dV = (lambda + mu V) dt + xi V^alpha dZ2,   corr(dZ1, dZ2) = rho
///
/// `mu` is the variance drift used by every pricing routine. `k` is the
/// mean-reversion rate of the physical-measure variance process; it is carried
/// for reporting and validation only.
struct ModelParams {
    double r = 0.0;
    double mu = 0.0;
    double xi = 0.5;
    double rho = 0.0;
    double lambda = 0.0;
    double k = 0.0;
    double alpha = 1.0;

    /// Drift of y = ln V in the alpha = 1, lambda = 0 branch.
    [[nodiscard]] double log_variance_drift() const noexcept { return mu - 0.5 * xi * xi; }

    /// True when the spectral-bridge pricer applies (alpha = 1, lambda = 0).
    [[nodiscard]] bool is_log_normal_variance() const noexcept { return alpha == 1.0 && lambda == 0.0; }
};

/// Every violated invariant, one message each. Empty means valid.
std::vector<std::string> validate(const ModelParams& params);

/// Throws std::invalid_argument listing every violation.
void require_valid(const ModelParams& params);

/// Valuation state in log coordinates: x = ln S, y = ln V.
struct MarketState {
    double spot_log_price = 0.0;
    double spot_log_variance = 0.0;

    static MarketState from_levels(double spot, double variance);
};

void require_valid(const MarketState& state);

enum class PayoffKind {
    EuropeanCall,
    EuropeanPut,
    AsianArithmeticCall,
    AsianGeometricCall,
    LookbackFixedCall,
    UpAndOutCall,
    Custom,
};

std::string to_string(PayoffKind kind);
std::optional<PayoffKind> parse_payoff_kind(std::string_view name);

/// Functional of a log-price trajectory ordered maturity-first (index 0 is maturity).
using TrajectoryFunctional = std::function<double(std::span<const double> log_price)>;

struct Contract {
    PayoffKind kind = PayoffKind::EuropeanCall;
    double strike = 1.0;
    double maturity = 1.0;
    std::optional<double> barrier;
    TrajectoryFunctional custom_payoff;
};

void require_valid(const Contract& contract);

/// Time grid and outer-quadrature layout.
struct GridSpec {
    int n = 32;
    int y0_nodes = 101;
    double y0_halfwidth_sigmas = 6.0;

    /// Step length for a given horizon: tau / (n + 1).
    [[nodiscard]] double step(double maturity) const noexcept { return maturity / (n + 1); }

    /// Calendar time of trajectory index i (index n+1 is today, index 0 is maturity).
    /// Computed directly from the index so the endpoints are exact.
    [[nodiscard]] double calendar_time(int index, double maturity) const noexcept
    {
        return maturity * static_cast<double>(n + 1 - index) / static_cast<double>(n + 1);
    }
};

void require_valid(const GridSpec& grid);

enum class OuterRule { Trapezoid, Simpson };

struct McConfig {
    std::int64_t variance_paths = 1000;
    std::int64_t price_paths = 10;
    std::uint64_t seed = 0;
    bool antithetic = false;
    OuterRule rule = OuterRule::Trapezoid;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    int threads = 1;
};

void require_valid(const McConfig& mc);

/// A sampled path pair. Both vectors have length n+2, index 0 is maturity and
/// index n+1 is the valuation date.
struct Trajectory {
    std::vector<double> log_variance;
    std::vector<double> log_price;
};

struct NodeDiagnostic {
    double y0 = 0.0;
    /// Quadrature weight times endpoint density.
    double weight = 0.0;
    double chi = 0.0;
    double chi_variance = 0.0;
};

struct PriceResult {
    double price = 0.0;
    double std_error = 0.0;
    std::int64_t n_evaluations = 0;
    std::vector<NodeDiagnostic> diagnostics;
};

}  // namespace svpath
