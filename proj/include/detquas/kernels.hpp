#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "detquas/ground.hpp"

namespace detquas {

/// Thrown when a quadrature-backed evaluation misses its error target.
struct EvaluationError : std::runtime_error {
    double achieved;
    EvaluationError(const std::string& what, double achieved_bound)
        : std::runtime_error(what), achieved(achieved_bound) {}
};

/// Dense symmetric kernel on a finite window. The constructor symmetrizes
/// (rejecting asymmetry beyond 1e-10) and checks that the spectrum lies in
/// [-1e-8, 1 + 1e-8].
class KernelMatrix {
public:
    KernelMatrix(WindowPtr window, Eigen::MatrixXd entries);

    const WindowPtr& window() const { return window_; }
    const Eigen::MatrixXd& entries() const { return entries_; }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    double entry(std::size_t i, std::size_t j) const { return entries_(i, j); }
    double entry_at(double site_x, double site_y) const;
    double trace() const { return entries_.trace(); }

    /// max |(K^2 - K)(i,j)|; zero for exact projections.
    double projection_defect() const;
    bool is_projection(double tol = 1e-8) const { return projection_defect() <= tol; }

    /// Eigenvalues in increasing order.
    Eigen::VectorXd eigenvalues() const;

    /// Orthonormal basis of the range: eigenvectors with eigenvalue > 1/2.
    /// Meaningful for (near-)projection kernels.
    Eigen::MatrixXd range_basis() const;

private:
    WindowPtr window_;
    Eigen::MatrixXd entries_;
};

enum class HalfLineSide { Plus, Minus };

/// Closed-form kernel on an ambient integer lattice (entry generator).
class KernelFunction {
public:
    virtual ~KernelFunction() = default;
    virtual double entry(long x, long y) const = 0;
    virtual AmbientModel domain_model() const = 0;
    virtual std::string family() const = 0;
    /// Precompute internal tables so entries with |x|,|y| <= bound are O(1).
    virtual void ensure_tables(long bound) const { (void)bound; }
};

using KernelFunctionPtr = std::shared_ptr<const KernelFunction>;

/// Translation-invariant sine kernel on Z, band parameter phi in (0, pi).
KernelFunctionPtr sine_kernel(double phi);

/// Spectral half-line kernels built from orthonormal Hermite polynomials:
/// entries integrate the product of orthonormal weighted polynomials over
/// [r, inf) (Plus) or (-inf, r] (Minus). Off-diagonal entries use the
/// Wronskian-type closed form; diagonals use quadrature.
KernelFunctionPtr discrete_hermite(HalfLineSide side, double r, double quad_target = 1e-11);

/// Laguerre analogue (weight t^alpha e^{-t} on (0, inf)); all entries by
/// quadrature with an internal refinement check against quad_target.
KernelFunctionPtr discrete_laguerre(double alpha, double r, HalfLineSide side,
                                    double quad_target = 1e-11);

/// Symmetric Jacobi kernel (weight (1-t^2)^a, split at 0). Diagonal is 1/2,
/// same-parity off-diagonal entries vanish identically, opposite-parity
/// entries come from the log-Gamma closed form.
KernelFunctionPtr discrete_jacobi_symmetric(double a, HalfLineSide side);

/// Restrict an entry generator to a finite integer window.
KernelMatrix materialize(const KernelFunction& kf, const WindowPtr& window);

/// Particle/hole transform K°(x,y) = delta - (-1)^{nu(x)-nu(y)} K(x,y).
KernelMatrix particle_hole(const KernelMatrix& K);
KernelFunctionPtr particle_hole(KernelFunctionPtr kf);

/// Integer shift s_N used by the scaled Charlier approximants.
long charlier_shift(std::size_t N, double phi);

/// N-th Charlier (theta = 1) Christoffel-Darboux kernel evaluated at
/// arguments shifted by s_N, restricted to the window. Converges entrywise
/// to sine_kernel(phi) as N grows.
KernelMatrix charlier_scaled_kernel(std::size_t N, double phi, const WindowPtr& window);

// --- quadrature oracles (independent evaluation routes, used by tests and
// --- the verify suites; `refine` selects a finer rule) ---
double hermite_entry_quadrature(HalfLineSide side, double r, long x, long y,
                                int refine = 0);
double laguerre_entry_quadrature(double alpha, double r, HalfLineSide side, long x, long y,
                                 int refine = 0);
double jacobi_entry_quadrature(double a, HalfLineSide side, long x, long y,
                               int refine = 0);

}  // namespace detquas
