#pragma once

#include <cstddef>
#include <vector>

namespace detquas {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computed by Newton iteration on the Legendre polynomial; cached per n.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// A composite quadrature: all node/weight pairs of per-panel Gauss rules.
struct PanelQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Compose an n_per_panel-point Gauss rule over the given panel boundaries
/// (boundaries must be increasing; panel i is [b_i, b_{i+1}]).
PanelQuadrature compose_panels(const std::vector<double>& boundaries, std::size_t n_per_panel);

/// Equal-width panels over [lo, hi] with width <= max_width.
std::vector<double> uniform_boundaries(double lo, double hi, double max_width);

}  // namespace detquas
