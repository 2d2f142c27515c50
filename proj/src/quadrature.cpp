#include "detquas/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace detquas {

namespace {

GaussLegendreRule build_gauss_legendre(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t n) {
    static std::map<std::size_t, GaussLegendreRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

PanelQuadrature compose_panels(const std::vector<double>& boundaries, std::size_t n_per_panel) {
    if (boundaries.size() < 2)
        throw std::invalid_argument("compose_panels: need at least one panel");
    const auto& base = gauss_legendre(n_per_panel);
    PanelQuadrature q;
    q.nodes.reserve((boundaries.size() - 1) * n_per_panel);
    q.weights.reserve((boundaries.size() - 1) * n_per_panel);
    for (std::size_t p = 0; p + 1 < boundaries.size(); ++p) {
        double a = boundaries[p], b = boundaries[p + 1];
        if (!(b > a)) throw std::invalid_argument("compose_panels: boundaries must increase");
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < n_per_panel; ++i) {
            q.nodes.push_back(mid + half * base.nodes[i]);
            q.weights.push_back(half * base.weights[i]);
        }
    }
    return q;
}

std::vector<double> uniform_boundaries(double lo, double hi, double max_width) {
    if (!(hi > lo)) throw std::invalid_argument("uniform_boundaries: hi <= lo");
    std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / max_width));
    if (n == 0) n = 1;
    std::vector<double> b(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    return b;
}

}  // namespace detquas
