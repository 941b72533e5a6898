#include "svpath/smile.hpp"

#include "svpath/pricer.hpp"
#include "svpath/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svpath::smile {

Smile compute_smile(std::span<const double> strikes, double maturity, const MarketState& state,
                    const ModelParams& params, const GridSpec& grid, const McConfig& mc)
{
    if (strikes.empty()) throw std::invalid_argument("empty strike grid");
    std::vector<Contract> calls;
    calls.reserve(strikes.size());
    for (double k : strikes) calls.push_back({PayoffKind::EuropeanCall, k, maturity, std::nullopt, {}});
    const auto strip = pricer::price_strip(calls, state, params, grid, mc);

    const double spot = std::exp(state.spot_log_price);
    const std::size_t m = strikes.size();
    Smile out;
    std::vector<double> inv_vega(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        SmileRow row{strikes[i], strip.results[i].price, strip.results[i].std_error,
                     std::numeric_limits<double>::quiet_NaN(), false};
        try {
            row.implied_vol = reference::implied_vol(row.price, spot, row.strike, params.r, maturity, true);
            row.invertible = true;
            inv_vega[i] = 1.0 / reference::bs_vega(spot, row.strike, params.r, row.implied_vol, maturity);
        } catch (const std::domain_error&) {
        }
        out.rows.push_back(row);
    }
    out.iv_covariance.assign(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) out.iv_covariance[a * m + b] = strip.covariance[a * m + b] * inv_vega[a] * inv_vega[b];
    }
    return out;
}

SmileFit fit_smile(const Smile& smile)
{
    const std::size_t m = smile.rows.size();
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < m; ++i) {
        if (smile.rows[i].invertible) used.push_back(i);
    }
    if (used.size() < 2) throw std::domain_error("need at least two invertible rows to fit a smile");

    const double count = static_cast<double>(used.size());
    double kbar = 0.0;
    for (auto i : used) kbar += smile.rows[i].strike;
    kbar /= count;
    double sxx = 0.0;
    for (auto i : used) sxx += (smile.rows[i].strike - kbar) * (smile.rows[i].strike - kbar);

    // Both estimates are linear in the IVs: level = a.iv, slope = b.iv.
    std::vector<double> a(m, 0.0);
    std::vector<double> b(m, 0.0);
    for (auto i : used) {
        a[i] = 1.0 / count;
        b[i] = (smile.rows[i].strike - kbar) / sxx;
    }
    SmileFit fit;
    double var_level = 0.0;
    double var_slope = 0.0;
    for (auto i : used) {
        fit.level += a[i] * smile.rows[i].implied_vol;
        fit.slope += b[i] * smile.rows[i].implied_vol;
        for (auto j : used) {
            const double c = smile.iv_covariance[i * m + j];
            var_level += a[i] * a[j] * c;
            var_slope += b[i] * b[j] * c;
        }
    }
    fit.level_se = std::sqrt(std::max(var_level, 0.0));
    fit.slope_se = std::sqrt(std::max(var_slope, 0.0));
    return fit;
}

}  // namespace svpath::smile
