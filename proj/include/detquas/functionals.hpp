#pragma once

#include "detquas/fock.hpp"
#include "detquas/kernels.hpp"

namespace detquas {

enum class DecayClass { Ell1, Ell2 };

/// Strictly positive multiplier alpha per site, with the declared decay class
/// of alpha - 1 (checked numerically on the window).
struct MultiplierFunction {
    WindowPtr window;
    std::vector<double> alpha;
    DecayClass decay = DecayClass::Ell2;

    MultiplierFunction(WindowPtr win, std::vector<double> values,
                       DecayClass decay_class = DecayClass::Ell2);

    double at_index(std::size_t i) const { return alpha[i]; }
    /// sum |alpha-1| (Ell1) resp. sum (alpha-1)^2 (Ell2) over the window.
    double decay_sum() const;
};

/// Product of alpha over the occupied sites.
double multiplicative_functional(const MultiplierFunction& alpha, const Configuration& omega);

/// Hilbert-Carleman regularized determinant det(1+A) exp(-tr A).
double det2(const Eigen::MatrixXd& A);

/// Eigenvalue-product route prod (1+lambda) e^{-lambda} for symmetric A.
double det2_symmetric_eigen(const Eigen::MatrixXd& A);

/// Expectation of the square root of the normalized multiplicative
/// functional under the determinantal measure of K:
///   det2(1+(a^{1/2}-1)K) / det2(1+(a-1)K)^{1/2}
///     * exp{ tr(([a^{1/2}-1] - [a-1]/2) K) }.
double expected_sqrt_multiplicative(const KernelMatrix& K, const MultiplierFunction& alpha);

/// Brute-force route E[Psi_{sqrt(alpha)}] / E[Psi_alpha]^{1/2} through plain
/// determinants; oracle for the det2 form on finite windows.
double expected_sqrt_multiplicative_direct(const KernelMatrix& K,
                                           const MultiplierFunction& alpha);

/// Max pointwise residual of mass_{M^{[aL]}} = normalized Psi_{a^2} * mass_{M^{[L]}},
/// where aL multiplies the range of the projection K entrywise by a and
/// re-orthonormalizes.
double density_ratio_check(const KernelMatrix& K, const MultiplierFunction& a);

/// The kernel of the projection onto aL (exposed for tests).
KernelMatrix multiplied_range_kernel(const KernelMatrix& K, const MultiplierFunction& a);

}  // namespace detquas
