#pragma once

#include "svpath/model.hpp"

#include <span>
#include <vector>

namespace svpath::smile {

struct SmileRow {
    double strike = 0.0;
    double price = 0.0;
    double std_error = 0.0;
    double implied_vol = 0.0;  // NaN when not invertible
    bool invertible = false;
};

struct Smile {
    std::vector<SmileRow> rows;
    /// Row-major covariance of the implied vols (delta method through vega).
    /// Entries involving a non-invertible row are zero.
    std::vector<double> iv_covariance;
};

/// European-call smile priced on one shared set of paths.
Smile compute_smile(std::span<const double> strikes, double maturity, const MarketState& state,
                    const ModelParams& params, const GridSpec& grid, const McConfig& mc);

/// Level (mean implied vol) and least-squares slope d(IV)/dK over the
/// invertible rows, with standard errors from the IV covariance.
struct SmileFit {
    double level = 0.0;
    double level_se = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
};

SmileFit fit_smile(const Smile& smile);

}  // namespace svpath::smile
