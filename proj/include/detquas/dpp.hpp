#pragma once

#include <random>

#include "detquas/fock.hpp"
#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

namespace detquas {

/// Raised when an elementary reduction pivot falls below the regularity gate.
struct RegularityError : std::runtime_error {
    double site;
    bool occupied;
    double pivot;
    RegularityError(double site_, bool occupied_, double pivot_);
};

/// One elementary reduction step.
struct ReductionStep {
    double site;
    bool occupied;  // true: conditioned occupied, false: conditioned vacant
    double pivot;   // diagonal value d at the step; gate is |d| resp. |1-d|
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
};

/// Determinantal measure of a positive contraction on a finite window.
/// Caches the range basis so repeated sampling avoids re-decomposition.
class DeterminantalMeasure {
public:
    explicit DeterminantalMeasure(KernelMatrix kernel);
    const KernelMatrix& kernel() const { return kernel_; }
    std::size_t rank() const { return static_cast<std::size_t>(range_basis_.cols()); }

    /// One projection-DPP draw; requires a projection kernel.
    Configuration sample(std::mt19937_64& rng) const;

private:
    KernelMatrix kernel_;
    Eigen::MatrixXd range_basis_;
};

/// Principal minor det[K(x_i, x_j)] over pairwise distinct points.
double correlation(const KernelMatrix& K, std::span<const double> points);

/// Probability of the elementary cylinder: det of the matrix on X u X' whose
/// rows on X carry K and rows on X' carry delta - K.
double cylinder_prob(const KernelMatrix& K, const CylinderSpec& spec);

/// Point masses of every configuration (windows capped at 20 sites).
FullMeasure full_measure(const KernelMatrix& K);

/// One draw of a projection determinantal measure; |result| = rank(K).
Configuration sample(const KernelMatrix& K, std::mt19937_64& rng);

/// Default pivot gate of the reduction steps.
inline constexpr double kRegularityEps = 1e-9;

/// (X, X')-reduction of a kernel: vacant steps use K' = a + b (1-d)^{-1} c,
/// occupied steps K' = a - b d^{-1} c, applied site by site. The result lives
/// on the window with X u X' removed.
std::pair<KernelMatrix, ReductionTrace> reduce(const KernelMatrix& K,
                                               std::span<const double> occupied,
                                               std::span<const double> vacant,
                                               double eps_reg = kRegularityEps);

/// Same reduction with a caller-chosen order of elementary steps.
std::pair<KernelMatrix, ReductionTrace> reduce_ordered(const KernelMatrix& K,
                                                       std::span<const ReductionStep> order,
                                                       double eps_reg = kRegularityEps);

/// a(u) = prod_y (u - y) / prod_x (u - x).
double rn_density(std::span<const double> X, std::span<const double> Y, double u);

/// Max pointwise residual of the transfer identity between the two
/// conditional measures of an ensemble: (M_N)_{Y,Y'} vs the normalized
/// multiplicative functional of |a|^2 times (M_N)_{X,X'}.
double quasi_invariance_check(const EnsembleSpec& spec,
                              std::span<const double> X, std::span<const double> Xp,
                              std::span<const double> Y, std::span<const double> Yp);

}  // namespace detquas
