#pragma once

#include <cstdint>
#include <string>

namespace detquas {

/// Outcome of one verification sweep.
struct SuiteReport {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    std::string detail;
};

/// tau-state vs quasifree state of the Christoffel-Darboux kernel over
/// uniform / truncated-Charlier / random weights, all monomials up to max_n.
SuiteReport suite_perfect(std::size_t max_sites, std::size_t max_n, std::uint64_t seed,
                          double tol = 1e-9);

/// Closed-form ensemble averages of characteristic-polynomial products vs
/// brute-force enumeration (relative error gate).
SuiteReport suite_strahov_fyodorov(std::size_t instances, std::uint64_t seed,
                                   double rel_tol = 1e-9);

/// Anticommutation relations, monomial basis action vs ladder composition,
/// and involutivity/permutation action of the transposition images.
SuiteReport suite_car(std::size_t max_sites, double tol = 1e-12);

/// All ideal generator images vanish (both variants, all site pairs), and
/// stay zero under composition with further transposition images.
SuiteReport suite_ideal(std::size_t max_sites, double tol = 1e-12);

/// Schur-reduced kernels vs brute-force conditional correlations, plus
/// order independence of the elementary steps.
SuiteReport suite_conditioning(std::size_t instances, std::uint64_t seed, double tol = 1e-9,
                               double order_tol = 1e-10);

/// Complement pushforward vs particle/hole-transformed kernel, plus the
/// exact self-duality of the symmetric Jacobi kernel.
SuiteReport suite_particle_hole(std::size_t max_sites, std::uint64_t seed, double tol = 1e-10);

/// Regularized-determinant formula and the density identity for multiplied
/// ranges, against full enumeration.
SuiteReport suite_functionals(std::size_t instances, std::uint64_t seed, double tol = 1e-9);

/// The product-measure gap: tau value 1/4 vs forced-kernel determinant 3/16.
SuiteReport suite_product_counterexample(double tol = 1e-12);

/// Closed forms vs quadrature for the Hermite/Jacobi kernels, and the
/// scaled-Charlier to sine convergence table.
SuiteReport suite_limit_kernels(double tol = 1e-9);

/// Hermite divergence / Jacobi Cauchy signatures, verdicts, and the
/// odd-even product asymptote ratio.
SuiteReport suite_dichotomy();

/// Seed reproducibility and empirical one-point function bands.
SuiteReport suite_sampler(std::uint64_t seed, std::size_t n_samples = 20000);

}  // namespace detquas
