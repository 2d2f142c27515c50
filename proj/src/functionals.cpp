#include "detquas/functionals.hpp"

#include <cmath>

#include "detquas/dpp.hpp"

namespace detquas {

MultiplierFunction::MultiplierFunction(WindowPtr win, std::vector<double> values,
                                       DecayClass decay_class)
    : window(std::move(win)), alpha(std::move(values)), decay(decay_class) {
    if (alpha.size() != window->size())
        throw std::invalid_argument("MultiplierFunction: one value per site required");
    for (double a : alpha)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("MultiplierFunction: alpha must be strictly positive");
    if (!std::isfinite(decay_sum()))
        throw std::invalid_argument("MultiplierFunction: declared decay sum diverges");
}

double MultiplierFunction::decay_sum() const {
    double s = 0.0;
    for (double a : alpha) {
        double d = a - 1.0;
        s += (decay == DecayClass::Ell1) ? std::abs(d) : d * d;
    }
    return s;
}

double multiplicative_functional(const MultiplierFunction& alpha, const Configuration& omega) {
    if (omega.window->size() != alpha.window->size())
        throw std::invalid_argument("multiplicative_functional: window mismatch");
    double p = 1.0;
    for (std::size_t i = 0; i < omega.window->size(); ++i)
        if (omega.contains_index(i)) p *= alpha.alpha[i];
    return p;
}

double det2(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("det2: square matrix required");
    Eigen::MatrixXd one_plus = Eigen::MatrixXd::Identity(A.rows(), A.cols()) + A;
    return one_plus.partialPivLu().determinant() * std::exp(-A.trace());
}

double det2_symmetric_eigen(const Eigen::MatrixXd& A) {
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("det2_symmetric_eigen: symmetric input required");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    double p = 1.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        p *= (1.0 + l) * std::exp(-l);
    }
    return p;
}

namespace {

Eigen::MatrixXd scaled_kernel(const KernelMatrix& K, const std::vector<double>& factor) {
    // diag(factor) * K
    Eigen::MatrixXd M = K.entries();
    for (Eigen::Index r = 0; r < M.rows(); ++r) M.row(r) *= factor[static_cast<std::size_t>(r)];
    return M;
}

}  // namespace

double expected_sqrt_multiplicative(const KernelMatrix& K, const MultiplierFunction& alpha) {
    if (K.window()->size() != alpha.window->size())
        throw std::invalid_argument("expected_sqrt_multiplicative: window mismatch");
    const std::size_t m = K.size();
    std::vector<double> sqrt_minus(m), minus(m), trace_fac(m);
    for (std::size_t i = 0; i < m; ++i) {
        double a = alpha.alpha[i];
        sqrt_minus[i] = std::sqrt(a) - 1.0;
        minus[i] = a - 1.0;
        trace_fac[i] = sqrt_minus[i] - 0.5 * minus[i];
    }
    double denom = det2(scaled_kernel(K, minus));
    if (!(denom > 0.0))
        throw EvaluationError("expected_sqrt_multiplicative: det2 denominator not positive",
                              denom);
    double numer = det2(scaled_kernel(K, sqrt_minus));
    double tr = scaled_kernel(K, trace_fac).trace();
    return numer / std::sqrt(denom) * std::exp(tr);
}

double expected_sqrt_multiplicative_direct(const KernelMatrix& K,
                                           const MultiplierFunction& alpha) {
    const std::size_t m = K.size();
    std::vector<double> sqrt_minus(m), minus(m);
    for (std::size_t i = 0; i < m; ++i) {
        sqrt_minus[i] = std::sqrt(alpha.alpha[i]) - 1.0;
        minus[i] = alpha.alpha[i] - 1.0;
    }
    auto plain_det = [&](const std::vector<double>& f) {
        Eigen::MatrixXd M =
            Eigen::MatrixXd::Identity(m, m) + scaled_kernel(K, f);
        return M.partialPivLu().determinant();
    };
    return plain_det(sqrt_minus) / std::sqrt(plain_det(minus));
}

KernelMatrix multiplied_range_kernel(const KernelMatrix& K, const MultiplierFunction& a) {
    if (K.window()->size() != a.window->size())
        throw std::invalid_argument("multiplied_range_kernel: window mismatch");
    if (!K.is_projection())
        throw std::invalid_argument("multiplied_range_kernel: projection kernel required");
    Eigen::MatrixXd V = K.range_basis();
    for (Eigen::Index r = 0; r < V.rows(); ++r) V.row(r) *= a.alpha[static_cast<std::size_t>(r)];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() < V.cols())
        throw std::invalid_argument("multiplied_range_kernel: multiplied range lost rank");
    Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(V.rows(), V.cols());
    Eigen::MatrixXd P = Q * Q.transpose();
    return KernelMatrix(K.window(), std::move(P));
}

double density_ratio_check(const KernelMatrix& K, const MultiplierFunction& a) {
    KernelMatrix Ka = multiplied_range_kernel(K, a);
    FullMeasure base = full_measure(K);
    FullMeasure transformed = full_measure(Ka);

    const std::size_t m = K.size();
    std::vector<double> asq(m);
    for (std::size_t i = 0; i < m; ++i) asq[i] = a.alpha[i] * a.alpha[i];

    // E_base[Psi_{a^2}] through the enumerated masses.
    double expect = 0.0;
    std::vector<double> psi(base.mass.size(), 1.0);
    for (std::uint64_t mask = 0; mask < base.mass.size(); ++mask) {
        double p = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            if ((mask >> i) & 1u) p *= asq[i];
        psi[mask] = p;
        expect += p * base.mass[mask];
    }
    double residual = 0.0;
    for (std::uint64_t mask = 0; mask < base.mass.size(); ++mask)
        residual = std::max(residual,
                            std::abs(transformed.mass[mask] - psi[mask] / expect * base.mass[mask]));
    return residual;
}

}  // namespace detquas
