#pragma once

#include <optional>
#include <string>

#include "detquas/kernels.hpp"

namespace detquas {

/// Partial sums S(M) = sum over the box of (K1-K2)(x,y)^2. Boxes are
/// [0,M]^2 on the half-line and [-M,M]^2 on Z.
struct HSSummary {
    std::vector<long> cutoffs;
    std::vector<double> partial_sums;

    /// Increment over the last cutoff step (0 when fewer than two cutoffs).
    double last_gap() const;
};

HSSummary hs_partial_sums(const KernelFunction& K1, const KernelFunction& K2,
                          std::span<const long> cutoffs);

/// dim ker(K2 K1 | L1) - dim ker(K1 K2 | L2) for two finite-window
/// projections, counting singular values of the map between ranges below
/// sv_threshold_rel times the leading one.
int index_estimate(const KernelMatrix& K1, const KernelMatrix& K2,
                   double sv_threshold_rel = 1e-8);

/// Cosines of the principal angles between the two ranges (diagnostic).
std::vector<double> principal_angle_cosines(const KernelMatrix& K1, const KernelMatrix& K2);

enum class VerdictKind { Equivalent, Disjoint, Inconclusive };

struct VerdictPolicy {
    double cauchy_eps = 1e-3;          // Cauchy gate on the last dyadic increment
    double divergence_factor = 10.0;   // divergence gate: every gap > factor * eps
    long norm_window = 512;            // window for the operator-norm estimate
    double sv_threshold_rel = 1e-8;
    bool continuous_path_declared = false;  // a declared HS-continuous parameter path
};

struct EquivalenceVerdict {
    VerdictKind verdict = VerdictKind::Inconclusive;
    HSSummary sums;
    double cauchy_gap = 0.0;
    std::optional<int> index;   // 0 when the norm-gap (or path) route applies
    double norm_gap = 0.0;      // windowed 2-norm estimate of K1 - K2
    std::string diagnostics;    // truncation caveat and the route taken
    VerdictPolicy policy;
};

/// Decide equivalent / disjoint / inconclusive from truncated evidence.
/// Equivalent needs the Cauchy gate plus a zero index (norm gap < 1, or a
/// declared continuous path); disjoint needs every dyadic gap above the
/// divergence threshold. Verdicts are numerical evidence, not proofs.
EquivalenceVerdict verdict(const KernelFunction& K1, const KernelFunction& K2,
                           std::span<const long> cutoffs, VerdictPolicy policy = {});

/// S(cutoff) over a grid of symmetric-Jacobi parameters (Plus side).
struct JacobiUniformityTable {
    std::vector<double> grid;
    Eigen::MatrixXd S;  // S(i,j) = partial sum for (a_i, a_j)
};

JacobiUniformityTable jacobi_hs_uniformity(std::span<const double> a_grid, long cutoff);

/// Ratio of the closed-form odd/even product entering the Jacobi kernel to
/// its 4(n+1) asymptote; tends to 1 as n, m grow.
double jacobi_asymptotic_ratio(double a, long n, long m);

}  // namespace detquas
