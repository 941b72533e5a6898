#include "svpath/quadrature.hpp"

#include <stdexcept>

namespace svpath {

namespace {

std::vector<double> uniform_nodes(double lo, double hi, int count)
{
    std::vector<double> nodes(count);
    const double span = hi - lo;
    for (int i = 0; i < count; ++i) nodes[i] = lo + span * i / (count - 1);
    nodes.back() = hi;
    return nodes;
}

}  // namespace

QuadratureRule trapezoid(double lo, double hi, int count)
{
    if (count < 2 || !(hi > lo)) throw std::invalid_argument("trapezoid needs count >= 2 and hi > lo");
    QuadratureRule rule{uniform_nodes(lo, hi, count), std::vector<double>(count)};
    const double h = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) rule.weights[i] = (i == 0 || i == count - 1) ? 0.5 * h : h;
    return rule;
}

QuadratureRule simpson(double lo, double hi, int count)
{
    if (count < 3 || count % 2 == 0 || !(hi > lo)) {
        throw std::invalid_argument("simpson needs an odd count >= 3 and hi > lo");
    }
    QuadratureRule rule{uniform_nodes(lo, hi, count), std::vector<double>(count)};
    const double h = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        const double c = (i == 0 || i == count - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = c * h / 3.0;
    }
    return rule;
}

QuadratureRule make_rule(OuterRule rule, double lo, double hi, int count)
{
    return rule == OuterRule::Simpson ? simpson(lo, hi, count) : trapezoid(lo, hi, count);
}

}  // namespace svpath
