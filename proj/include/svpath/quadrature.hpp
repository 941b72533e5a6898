#pragma once

#include "svpath/model.hpp"

#include <vector>

namespace svpath {

/// Composite Newton-Cotes rule on a uniform grid.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule trapezoid(double lo, double hi, int count);
/// Composite Simpson; count must be odd and >= 3.
QuadratureRule simpson(double lo, double hi, int count);
QuadratureRule make_rule(OuterRule rule, double lo, double hi, int count);

}  // namespace svpath
