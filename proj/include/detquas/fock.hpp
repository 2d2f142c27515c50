#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <map>

#include "detquas/ground.hpp"
#include "detquas/kernels.hpp"

namespace detquas {

/// Sparse real vector over the 2^N configuration basis of the exterior
/// algebra on a window (basis vectors indexed by occupation masks).
class FockVector {
public:
    explicit FockVector(WindowPtr window) : window_(std::move(window)) {
        if (window_->size() > 24)
            throw std::invalid_argument("FockVector: window too large for 2^N basis work");
    }

    static FockVector basis_vector(WindowPtr window, std::uint64_t mask);

    const WindowPtr& window() const { return window_; }
    const std::map<std::uint64_t, double>& coeffs() const { return coeffs_; }
    double coeff(std::uint64_t mask) const;
    void add(std::uint64_t mask, double value);

    FockVector& operator+=(const FockVector& other);
    FockVector& operator*=(double scale);
    double dot(const FockVector& other) const;
    double max_abs() const;

private:
    WindowPtr window_;
    std::map<std::uint64_t, double> coeffs_;
};

/// Dense-on-demand operator on the 2^N basis, stored sparse.
struct GicarOperator {
    WindowPtr window;
    Eigen::SparseMatrix<double> matrix;  // dimension 2^N

    GicarOperator operator*(const GicarOperator& other) const;
    GicarOperator operator+(const GicarOperator& other) const;
    GicarOperator operator-(const GicarOperator& other) const;
    GicarOperator scaled(double s) const;
    double max_abs() const;
    FockVector apply(const FockVector& v) const;
};

GicarOperator identity_op(const WindowPtr& window);
GicarOperator creation_op(const WindowPtr& window, double site);
GicarOperator annihilation_op(const WindowPtr& window, double site);

/// Signed wedge action a^+_x.
FockVector apply_creation(double site, const FockVector& v);
/// Signed contraction a^-_x.
FockVector apply_annihilation(double site, const FockVector& v);

/// Basis action of the normal-ordered monomial a^+_{x_n}..a^+_{x_1} a^-_{y_1}..a^-_{y_n}:
/// each basis vector maps to fermionic_sign(X,Y,omega) times the basis vector
/// of (omega \ Y) u X.
FockVector apply_monomial(std::span<const double> X, std::span<const double> Y,
                          const FockVector& v);

/// det[K(y_i, x_j)], the quasifree value of the monomial above; 1 at n = 0.
double quasifree_state(const KernelMatrix& K, std::span<const double> X,
                       std::span<const double> Y);

/// Probability mass on every configuration of a window, indexed by mask.
struct FullMeasure {
    WindowPtr window;
    std::vector<double> mass;  // size 2^N

    double total() const;
};

/// Masses of an N-point orthogonal polynomial ensemble as a FullMeasure.
class EnsembleSpec;
FullMeasure ensemble_measure(const EnsembleSpec& spec);

/// sum over omega of sqrt(mass(omega) mass((omega\Y) u X)) * fermionic_sign(X,Y,omega).
/// Requires the masses to sum to 1 within 1e-12.
double tau_state(const FullMeasure& measure, std::span<const double> X,
                 std::span<const double> Y);

/// Images of the hyperoctahedral generators: p(eps_x) = 1 - 2 a^+_x a^-_x and
/// the transposition image built from the eta elements; p(s)^2 = 1 and p(s)
/// permutes basis vectors.
GicarOperator p_epsilon(double site, const WindowPtr& window);
GicarOperator p_transposition(double site_x, double site_y, const WindowPtr& window);

enum class IdealVariant { Minus, Plus };

/// Image of (1 - s_{x,y})(1 -+ eps_x)(1 -+ eps_y); identically zero.
GicarOperator ideal_generator_image(double site_x, double site_y, const WindowPtr& window,
                                    IdealVariant variant);

/// Pfaffian of an even-dimensional skew-symmetric matrix (recursive
/// expansion; intended for small orders).
double pfaffian(const Eigen::MatrixXd& A);

/// The same monomial value as quasifree_state, evaluated through the Pfaffian
/// functional of the bilinear form Phi(a^+_x, a^-_y) = K(x,y),
/// Phi(a^-_y, a^+_x) = delta - K(x,y).
double quasifree_state_pfaffian(const KernelMatrix& K, std::span<const double> X,
                                std::span<const double> Y);

}  // namespace detquas
