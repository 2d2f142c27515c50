#pragma once

#include <Eigen/Dense>

#include "detquas/ground.hpp"

namespace detquas {

/// Strictly positive weight on a window.
struct WeightFunction {
    WindowPtr window;
    std::vector<double> w;
    bool moment_bound_checked = false;

    WeightFunction(WindowPtr win, std::vector<double> values);

    /// Truncated moment sum(x^{2N} W(x)) over the window; sets the checked flag.
    double check_moment_bound(std::size_t N);
};

WeightFunction uniform_weight(WindowPtr window);
WeightFunction charlier_weight(WindowPtr window, double theta);
WeightFunction meixner_weight(WindowPtr window, double beta, double c);
WeightFunction krawtchouk_weight(WindowPtr window, long M, double p);

/// Monic orthogonal polynomial system on a discrete weight, built by the
/// discrete Stieltjes procedure:
///   p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x),   beta_k = h_k / h_{k-1}.
class OPSystem {
public:
    OPSystem(WeightFunction weight, std::size_t n_max);

    const WeightFunction& weight() const { return weight_; }
    std::size_t degree_bound() const { return n_max_; }
    double alpha(std::size_t k) const { return alpha_.at(k); }
    double beta(std::size_t k) const { return beta_.at(k); }
    double h(std::size_t k) const { return h_.at(k); }

    /// Monic p_k at an arbitrary point.
    double eval(std::size_t k, double x) const;
    /// d/dx of monic p_k.
    double eval_derivative(std::size_t k, double x) const;

    /// Largest relative orthogonality residual max_{j<k} |<p_j,p_k>_W| / sqrt(h_j h_k).
    double orthogonality_residual() const;

private:
    WeightFunction weight_;
    std::size_t n_max_;
    std::vector<double> alpha_, beta_, h_;
};

/// N-point orthogonal polynomial ensemble.
struct EnsembleSpec {
    OPSystem ops;
    std::size_t N;

    EnsembleSpec(OPSystem system, std::size_t n_particles);
};

class KernelMatrix;  // kernels.hpp

/// Rank-N Christoffel-Darboux projection kernel
///   K(x,y) = sum_{k<N} p_k(x) p_k(y) sqrt(W(x) W(y)) / h_k
/// materialized on the weight's window.
KernelMatrix cd_kernel(const OPSystem& ops, std::size_t N);

/// The ratio (Christoffel-Darboux) form of the same kernel at x != y;
/// kept as a cross-check of the sum form.
double cd_kernel_ratio_form(const OPSystem& ops, std::size_t N, double x, double y);

/// Probability of an N-point configuration: prod W(u) * Vandermonde^2 / Z_N
/// with Z_N = h_0 ... h_{N-1}.
double ensemble_mass(const EnsembleSpec& spec, const Configuration& omega);

/// Average of prod_{u in omega'} prod_i (x_i - u)(y_i - u) over the
/// (N-n)-point ensemble, by the closed form
///   (h_{N-n}...h_{N-1} / h_{N-1}^n) * det[D(x_i,y_j)] / (V(X) V(Y)),
/// where D(x,y) = (p_N(x) p_{N-1}(y) - p_{N-1}(x) p_N(y)) / (x - y) and a
/// coincidence x = y is evaluated by the confluent derivative limit.
double sf_closed_form(const OPSystem& ops, std::size_t N,
                      std::span<const double> X, std::span<const double> Y);

}  // namespace detquas
