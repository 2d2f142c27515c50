#include "detquas/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "detquas/quadrature.hpp"

namespace detquas {

// ---------------------------------------------------------------------------
// KernelMatrix
// ---------------------------------------------------------------------------

KernelMatrix::KernelMatrix(WindowPtr window, Eigen::MatrixXd entries)
    : window_(std::move(window)), entries_(std::move(entries)) {
    const auto n = entries_.rows();
    if (n != entries_.cols() || static_cast<std::size_t>(n) != window_->size())
        throw std::invalid_argument("KernelMatrix: shape does not match window");
    double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
        throw std::invalid_argument("KernelMatrix: entries are not symmetric");
    if (asym > 0.0) entries_ = 0.5 * (entries_ + entries_.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-8 || hi > 1.0 + 1e-8)
        throw std::invalid_argument("KernelMatrix: spectrum escapes [0, 1] beyond tolerance");
}

double KernelMatrix::entry_at(double site_x, double site_y) const {
    return entries_(window_->require_index(site_x), window_->require_index(site_y));
}

double KernelMatrix::projection_defect() const {
    return (entries_ * entries_ - entries_).cwiseAbs().maxCoeff();
}

Eigen::VectorXd KernelMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::MatrixXd KernelMatrix::range_basis() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) ++rank;
    Eigen::MatrixXd basis(entries_.rows(), rank);
    std::size_t c = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) basis.col(c++) = es.eigenvectors().col(i);
    return basis;
}

// ---------------------------------------------------------------------------
// Orthonormal recurrences for the three continuous weights. All evaluations
// go through the weighted functions psi_k = P~_k * sqrt(weight), which stay
// bounded; long double absorbs the exponentially small classically-forbidden
// regime at large |t|.
// ---------------------------------------------------------------------------

namespace {

// Precomputed orthonormal-recurrence coefficients; the per-node inner loops
// then run on multiply/add alone.
struct HermiteCoeffs {
    std::vector<long double> sb;       // sqrt(k/2)
    std::vector<long double> inv_sb;   // 1 / sqrt(k/2)
    explicit HermiteCoeffs(std::size_t K) : sb(K + 1), inv_sb(K + 1) {
        for (std::size_t k = 0; k <= K; ++k) {
            sb[k] = sqrtl(0.5L * static_cast<long double>(k));
            inv_sb[k] = (k == 0) ? 0.0L : 1.0L / sb[k];
        }
    }
};

// psi_k(t) for k = 0..K, Hermite weight exp(-t^2).
void hermite_weighted_all(long double t, std::size_t K, const HermiteCoeffs& c,
                          std::vector<long double>& out) {
    out.resize(K + 1);
    long double prev = 0.0L;
    long double cur = expl(-0.5L * t * t) * 0.7511255444649424828587L;  // pi^{-1/4}
    out[0] = cur;
    for (std::size_t k = 0; k < K; ++k) {
        long double next = (t * cur - c.sb[k] * prev) * c.inv_sb[k + 1];
        prev = cur;
        cur = next;
        out[k + 1] = cur;
    }
}

struct LaguerreCoeffs {
    std::vector<long double> a;        // 2k + alpha + 1
    std::vector<long double> sb;       // sqrt(k (k + alpha))
    std::vector<long double> inv_sb;
    LaguerreCoeffs(double alpha, std::size_t K) : a(K + 1), sb(K + 1), inv_sb(K + 1) {
        for (std::size_t k = 0; k <= K; ++k) {
            a[k] = 2.0L * k + static_cast<long double>(alpha) + 1.0L;
            sb[k] = sqrtl(static_cast<long double>(k) * (k + static_cast<long double>(alpha)));
            inv_sb[k] = (k == 0) ? 0.0L : 1.0L / sb[k];
        }
    }
};

// psi_k(t) for the Laguerre weight t^alpha e^{-t}, t > 0.
void laguerre_weighted_all(long double t, double alpha, std::size_t K,
                           const LaguerreCoeffs& c, std::vector<long double>& out) {
    out.resize(K + 1);
    long double logw = alpha * logl(t) - t;
    long double prev = 0.0L;
    long double cur = expl(0.5L * (logw - static_cast<long double>(std::lgamma(alpha + 1.0))));
    out[0] = cur;
    for (std::size_t k = 0; k < K; ++k) {
        long double next = ((t - c.a[k]) * cur - c.sb[k] * prev) * c.inv_sb[k + 1];
        prev = cur;
        cur = next;
        out[k + 1] = cur;
    }
}

double jacobi_beta(double a, std::size_t k) {
    if (k == 1) return 1.0 / (2.0 * a + 3.0);  // cancelled form, finite at a = -1/2
    double kk = static_cast<double>(k);
    return kk * (kk + 2.0 * a) / (4.0 * (kk + a + 0.5) * (kk + a - 0.5));
}

// Orthonormal symmetric-Jacobi polynomial values at t in [-1,1] (unweighted;
// they grow only polynomially in the degree).
void jacobi_orthonormal_all(double t, double a, std::size_t K, std::vector<double>& out) {
    out.resize(K + 1);
    double h0 = std::exp(0.5 * std::log(M_PI) + std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
    double prev = 0.0;
    double cur = 1.0 / std::sqrt(h0);
    out[0] = cur;
    for (std::size_t k = 0; k < K; ++k) {
        double sb_k = (k == 0) ? 0.0 : std::sqrt(jacobi_beta(a, k));
        double sb_next = std::sqrt(jacobi_beta(a, k + 1));
        double next = (t * cur - sb_k * prev) / sb_next;
        prev = cur;
        cur = next;
        out[k + 1] = cur;
    }
}

// Geometrically graded boundaries on [lo, hi] refining toward lo, then
// uniform panels of width `width` for the rest.
std::vector<double> graded_boundaries(double lo, double hi, double width, double first) {
    std::vector<double> b{lo};
    double step = first;
    while (lo + step < std::min(lo + width, hi) && step < width) {
        b.push_back(lo + step);
        step *= 2.0;
    }
    double start = b.back();
    if (hi > start) {
        auto rest = uniform_boundaries(start, hi, width);
        b.insert(b.end(), rest.begin() + 1, rest.end());
    }
    return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sine kernel
// ---------------------------------------------------------------------------

namespace {

class SineKernel final : public KernelFunction {
public:
    explicit SineKernel(double phi) : phi_(phi) {
        if (!(phi > 0.0) || !(phi < M_PI))
            throw std::invalid_argument("sine_kernel: phi must lie in (0, pi)");
    }
    double entry(long x, long y) const override {
        if (x == y) return phi_ / M_PI;
        double d = static_cast<double>(x - y);
        return std::sin(phi_ * d) / (M_PI * d);
    }
    AmbientModel domain_model() const override { return AmbientModel::FullLine; }
    std::string family() const override { return "sine"; }

private:
    double phi_;
};

}  // namespace

KernelFunctionPtr sine_kernel(double phi) { return std::make_shared<SineKernel>(phi); }

// ---------------------------------------------------------------------------
// Discrete Hermite kernel
// ---------------------------------------------------------------------------

namespace {

constexpr long kHermiteDegreeCap = 8192;  // long double underflow margin

class DiscreteHermiteKernel final : public KernelFunction {
public:
    DiscreteHermiteKernel(HalfLineSide side, double r, double quad_target)
        : side_(side), r_(r), target_(quad_target) {
        if (!std::isfinite(r)) throw std::invalid_argument("discrete_hermite: r must be finite");
        if (std::abs(r) > 100.0)
            throw std::invalid_argument("discrete_hermite: |r| too large for stable evaluation");
    }

    double entry(long x, long y) const override {
        if (x < 0 || y < 0)
            throw std::invalid_argument("discrete_hermite: arguments live on Z>=0");
        ensure_tables(std::max(x, y));
        if (x == y) return diag_[static_cast<std::size_t>(x)];
        return static_cast<double>(entry_closed(x, y));
    }

    AmbientModel domain_model() const override { return AmbientModel::HalfLine; }
    std::string family() const override { return "discrete_hermite"; }

    void ensure_tables(long bound) const override {
        if (bound <= table_bound_) return;
        if (bound > kHermiteDegreeCap)
            throw std::invalid_argument("discrete_hermite: degree beyond supported table cap");
        long b = std::max(bound, std::min<long>(2 * std::max<long>(table_bound_, 32), kHermiteDegreeCap));
        build_tables(b);
        table_bound_ = b;
    }

private:
    // Off-diagonal Wronskian-type closed form through the orthonormal values
    // at r (no raw factorials).
    long double entry_closed(long x, long y) const {
        long double sign = (side_ == HalfLineSide::Plus) ? -1.0L : 1.0L;
        long double bracket =
            sqrtl(0.5L * (x + 1)) * ptilde_[x + 1] * ptilde_[y] -
            sqrtl(0.5L * (y + 1)) * ptilde_[x] * ptilde_[y + 1];
        return sign * expl(-static_cast<long double>(r_) * r_) * bracket /
               static_cast<long double>(x - y);
    }

    void build_tables(long bound) const {
        const std::size_t K = static_cast<std::size_t>(bound);
        std::vector<long double> pt;
        HermiteCoeffs coeffs(K + 4);
        hermite_weighted_all(static_cast<long double>(r_), K + 3, coeffs, pt);
        // ptilde stores the unweighted polynomial values at r.
        long double unweight = expl(0.5L * static_cast<long double>(r_) * r_);
        ptilde_.resize(K + 4);
        for (std::size_t k = 0; k <= K + 3; ++k) ptilde_[k] = pt[k] * unweight;

        diag_ = diag_by_parts(K);
        // Independent oracle: node-sweep quadrature over a prefix of degrees.
        const std::size_t prefix = std::min<std::size_t>(K, 512);
        auto sweep = sweep_diag(prefix, 1.0);
        double achieved = 0.0;
        for (std::size_t k = 0; k <= prefix; ++k)
            achieved = std::max(achieved, std::abs(diag_[k] - sweep[k]));
        if (achieved > target_)
            throw EvaluationError("discrete_hermite: diagonal evaluation missed its target",
                                  achieved);
    }

    // All diagonal entries by the integration-by-parts ladder: a boundary
    // term and two closed-form cross integrals advance I_k to I_{k+1}.
    std::vector<double> diag_by_parts(std::size_t K) const {
        std::vector<double> diag(K + 1);
        long double sqrt_weight_r = expl(-0.5L * static_cast<long double>(r_) * r_);
        auto psi = [&](std::size_t k) { return ptilde_[k] * sqrt_weight_r; };
        long double boundary_sign = (side_ == HalfLineSide::Plus) ? 1.0L : -1.0L;
        long double I = 0.5L * static_cast<long double>(
                                   std::erfc(side_ == HalfLineSide::Plus ? r_ : -r_));
        diag[0] = static_cast<double>(I);
        for (std::size_t k = 0; k < K; ++k) {
            long double kk = static_cast<long double>(k);
            long double step =
                boundary_sign * sqrtl(2.0L / (kk + 1.0L)) * psi(k) * psi(k + 1);
            if (k >= 1)
                step += sqrtl(kk / (kk + 1.0L)) *
                        entry_closed(static_cast<long>(k) - 1, static_cast<long>(k) + 1);
            step -= sqrtl((kk + 2.0L) / (kk + 1.0L)) *
                    entry_closed(static_cast<long>(k), static_cast<long>(k) + 2);
            I += step;
            diag[k + 1] = static_cast<double>(I);
        }
        return diag;
    }

    // Diagonal entries for all degrees <= K in one node sweep.
    std::vector<double> sweep_diag(std::size_t K, double width_scale) const {
        double turning = std::sqrt(2.0 * static_cast<double>(K) + 3.0);
        double far = turning + 10.0;
        double lo, hi;
        if (side_ == HalfLineSide::Plus) {
            lo = r_;
            hi = std::max(far, r_ + 20.0);
        } else {
            lo = std::min(-far, r_ - 20.0);
            hi = r_;
        }
        double width = width_scale * std::min(0.5, 8.0 / turning);
        auto q = compose_panels(uniform_boundaries(lo, hi, width), 32);

        std::vector<double> acc(K + 1, 0.0);
        std::vector<long double> psi;
        HermiteCoeffs coeffs(K + 1);
        for (std::size_t j = 0; j < q.size(); ++j) {
            hermite_weighted_all(static_cast<long double>(q.nodes[j]), K, coeffs, psi);
            for (std::size_t k = 0; k <= K; ++k) {
                long double v = psi[k];
                acc[k] += q.weights[j] * static_cast<double>(v * v);
            }
        }
        return acc;
    }

    HalfLineSide side_;
    double r_;
    double target_;
    mutable long table_bound_ = -1;
    mutable std::vector<long double> ptilde_;
    mutable std::vector<double> diag_;
};

}  // namespace

KernelFunctionPtr discrete_hermite(HalfLineSide side, double r, double quad_target) {
    return std::make_shared<DiscreteHermiteKernel>(side, r, quad_target);
}

// ---------------------------------------------------------------------------
// Discrete Laguerre kernel
// ---------------------------------------------------------------------------

namespace {

class DiscreteLaguerreKernel final : public KernelFunction {
public:
    DiscreteLaguerreKernel(double alpha, double r, HalfLineSide side, double quad_target)
        : alpha_(alpha), r_(r), side_(side), target_(quad_target) {
        if (!(alpha > -1.0)) throw std::invalid_argument("discrete_laguerre: alpha must exceed -1");
        if (!(r > 0.0))
            throw std::invalid_argument("discrete_laguerre: r must lie inside the weight support");
    }

    double entry(long x, long y) const override {
        if (x < 0 || y < 0)
            throw std::invalid_argument("discrete_laguerre: arguments live on Z>=0");
        ensure_tables(std::max(x, y));
        return table_(x, y);
    }

    AmbientModel domain_model() const override { return AmbientModel::HalfLine; }
    std::string family() const override { return "discrete_laguerre"; }

    void ensure_tables(long bound) const override {
        if (bound <= table_bound_) return;
        if (bound > 2048)
            throw std::invalid_argument("discrete_laguerre: degree beyond supported table cap");
        long b = std::max(bound, std::min<long>(2 * std::max<long>(table_bound_, 16), 2048));
        Eigen::MatrixXd base = sweep_table(static_cast<std::size_t>(b), 0);
        Eigen::MatrixXd fine = sweep_table(static_cast<std::size_t>(b), 1);
        double achieved = (base - fine).cwiseAbs().maxCoeff();
        if (achieved > target_)
            throw EvaluationError("discrete_laguerre: quadrature missed its target", achieved);
        table_ = std::move(fine);
        table_bound_ = b;
    }

    Eigen::MatrixXd sweep_table(std::size_t K, int refine) const {
        // Substituting t = s^2 makes the oscillation rate uniform in s.
        double s_hi = std::sqrt(4.0 * static_cast<double>(K + 1) + 60.0 + r_);
        double s_r = std::sqrt(r_);
        double width = std::min(0.5, 4.0 / std::sqrt(static_cast<double>(K + 1))) /
                       (refine ? 2.0 : 1.0);
        std::vector<double> bounds;
        if (side_ == HalfLineSide::Plus)
            bounds = uniform_boundaries(s_r, s_hi, width);
        else
            bounds = graded_boundaries(0.0, s_r, width, refine ? 1e-13 : 1e-12);
        auto q = compose_panels(bounds, refine ? 40 : 32);

        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(K + 1, K + 1);
        std::vector<long double> psi;
        LaguerreCoeffs coeffs(alpha_, K + 1);
        Eigen::VectorXd v(K + 1);
        for (std::size_t j = 0; j < q.size(); ++j) {
            double s = q.nodes[j];
            if (s <= 0.0) continue;
            long double t = static_cast<long double>(s) * s;
            laguerre_weighted_all(t, alpha_, K, coeffs, psi);
            for (std::size_t k = 0; k <= K; ++k) v(k) = static_cast<double>(psi[k]);
            acc.selfadjointView<Eigen::Lower>().rankUpdate(v, q.weights[j] * 2.0 * s);
        }
        Eigen::MatrixXd full = acc.selfadjointView<Eigen::Lower>();
        return full;
    }

private:
    double alpha_, r_;
    HalfLineSide side_;
    double target_;
    mutable long table_bound_ = -1;
    mutable Eigen::MatrixXd table_;
};

}  // namespace

KernelFunctionPtr discrete_laguerre(double alpha, double r, HalfLineSide side,
                                    double quad_target) {
    return std::make_shared<DiscreteLaguerreKernel>(alpha, r, side, quad_target);
}

// ---------------------------------------------------------------------------
// Discrete symmetric Jacobi kernel
// ---------------------------------------------------------------------------

namespace {

class DiscreteJacobiSymmetricKernel final : public KernelFunction {
public:
    DiscreteJacobiSymmetricKernel(double a, HalfLineSide side) : a_(a), side_(side) {
        if (!(a > -1.0))
            throw std::invalid_argument("discrete_jacobi_symmetric: a must exceed -1");
    }

    double entry(long x, long y) const override {
        if (x < 0 || y < 0)
            throw std::invalid_argument("discrete_jacobi_symmetric: arguments live on Z>=0");
        if (x == y) return 0.5;
        if (((x + y) & 1) == 0) return 0.0;  // entries vanish at equal parity
        ensure_tables(std::max(x, y));
        double value = (u_[x] * v_[y] - v_[x] * u_[y]) /
                       (2.0 * static_cast<double>(x - y) * (x + y + 2.0 * a_ + 1.0));
        return side_ == HalfLineSide::Plus ? value : -value;
    }

    AmbientModel domain_model() const override { return AmbientModel::HalfLine; }
    std::string family() const override { return "discrete_jacobi_symmetric"; }

    void ensure_tables(long bound) const override {
        if (bound <= table_bound_) return;
        long b = std::max(bound, 2 * std::max<long>(table_bound_, 64));
        build_tables(b);
        table_bound_ = b;
    }

private:
    // log(1/||J_k||) for the standardized symmetric Jacobi polynomials.
    // (k+a+1/2) Gamma(k+2a+1) is rewritten through Gamma(k+2a+2), whose
    // argument stays positive; the leftover ratio is 1/2 at k = 0 for every a
    // (removing the 0/0 at a = -1/2) and regular otherwise.
    double log_inv_norm(long k) const {
        double ratio = (k == 0) ? 0.5
                                : (static_cast<double>(k) + a_ + 0.5) /
                                      (static_cast<double>(k) + 2.0 * a_ + 1.0);
        return 0.5 * (std::log(ratio) + std::lgamma(k + 2.0 * a_ + 2.0) +
                      std::lgamma(k + 1.0)) -
               a_ * std::log(2.0) - std::lgamma(static_cast<double>(k) + a_ + 1.0);
    }

    void build_tables(long bound) const {
        u_.assign(bound + 1, 0.0);
        v_.assign(bound + 1, 0.0);
        for (long k = 0; k <= bound; ++k) {
            if ((k & 1) == 0) {
                long l = k / 2;
                double lg = std::lgamma(k + a_ + 1.0) - k * std::log(2.0) -
                            std::lgamma(l + 1.0) - std::lgamma(l + a_ + 1.0);
                v_[k] = ((l & 1) ? -1.0 : 1.0) * std::exp(lg + log_inv_norm(k));
            } else {
                long l = (k - 1) / 2;
                double lg = std::lgamma(2.0 * l + a_ + 2.0) - 2.0 * l * std::log(2.0) -
                            std::lgamma(l + 1.0) - std::lgamma(l + a_ + 2.0);
                u_[k] = ((l & 1) ? -1.0 : 1.0) * (k + 2.0 * a_ + 1.0) *
                        std::exp(lg + log_inv_norm(k));
            }
        }
    }

    double a_;
    HalfLineSide side_;
    mutable long table_bound_ = -1;
    mutable std::vector<double> u_, v_;
};

}  // namespace

KernelFunctionPtr discrete_jacobi_symmetric(double a, HalfLineSide side) {
    return std::make_shared<DiscreteJacobiSymmetricKernel>(a, side);
}

// ---------------------------------------------------------------------------
// Materialization, particle/hole, scaled Charlier
// ---------------------------------------------------------------------------

KernelMatrix materialize(const KernelFunction& kf, const WindowPtr& window) {
    if (window->model() != kf.domain_model())
        throw std::invalid_argument("materialize: window model does not match kernel domain");
    const std::size_t m = window->size();
    long bound = 0;
    std::vector<long> xs(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = window->site(i);
        if (s != std::floor(s))
            throw std::invalid_argument("materialize: lattice kernels need integer sites");
        xs[i] = static_cast<long>(s);
        bound = std::max(bound, std::abs(xs[i]));
    }
    kf.ensure_tables(bound);
    Eigen::MatrixXd K(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double v = kf.entry(xs[i], xs[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
    return KernelMatrix(window, std::move(K));
}

KernelMatrix particle_hole(const KernelMatrix& K) {
    const std::size_t m = K.size();
    const GroundWindow& win = *K.window();
    Eigen::MatrixXd out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double sign = ((win.nu(i) - win.nu(j)) % 2 == 0) ? 1.0 : -1.0;
            out(i, j) = (i == j ? 1.0 : 0.0) - sign * K.entry(i, j);
        }
    return KernelMatrix(K.window(), std::move(out));
}

namespace {

class ParticleHoleKernel final : public KernelFunction {
public:
    explicit ParticleHoleKernel(KernelFunctionPtr base) : base_(std::move(base)) {}
    double entry(long x, long y) const override {
        double sign = (((x - y) % 2) == 0) ? 1.0 : -1.0;
        return (x == y ? 1.0 : 0.0) - sign * base_->entry(x, y);
    }
    AmbientModel domain_model() const override { return base_->domain_model(); }
    std::string family() const override { return base_->family() + "_particle_hole"; }
    void ensure_tables(long bound) const override { base_->ensure_tables(bound); }

private:
    KernelFunctionPtr base_;
};

}  // namespace

KernelFunctionPtr particle_hole(KernelFunctionPtr kf) {
    return std::make_shared<ParticleHoleKernel>(std::move(kf));
}

long charlier_shift(std::size_t N, double phi) {
    if (!(phi > 0.0) || !(phi < M_PI))
        throw std::invalid_argument("charlier_shift: phi must lie in (0, pi)");
    if (N == 0) throw std::invalid_argument("charlier_shift: N must be positive");
    double nd = static_cast<double>(N);
    return static_cast<long>(std::floor(nd + 2.0 * std::cos(phi) * std::sqrt(nd)));
}

namespace {

// Orthonormal weighted Charlier functions at theta = 1: alpha_k = k + 1,
// beta_k = k, phi_0(x) = exp(-(lgamma(x+1) + 1) / 2). The forward recurrence
// in the degree is stable only while the degree stays below the argument;
// past that point the self-duality phi_k(x) = (-1)^{k+x} phi_x(k) routes the
// evaluation through the stable direction. Long double carries the tiny
// classically-forbidden values at x ~ N back up to O(1).
long double charlier_phi_run(long double x, std::size_t degree) {
    long double prev = 0.0L;
    long double cur = expl(-0.5L * (lgammal(x + 1.0L) + 1.0L));
    for (std::size_t k = 0; k < degree; ++k) {
        long double next = ((x - static_cast<long double>(k + 1)) * cur -
                            sqrtl(static_cast<long double>(k)) * prev) /
                           sqrtl(static_cast<long double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

void charlier_phi_column(long x, std::size_t N, std::vector<long double>& col) {
    col.resize(N);
    long double xx = static_cast<long double>(x);
    std::size_t stable = std::min<std::size_t>(N, static_cast<std::size_t>(x) + 1);
    long double prev = 0.0L;
    long double cur = expl(-0.5L * (lgammal(xx + 1.0L) + 1.0L));
    for (std::size_t k = 0; k < stable; ++k) {
        col[k] = cur;
        long double next = ((xx - static_cast<long double>(k + 1)) * cur -
                            sqrtl(static_cast<long double>(k)) * prev) /
                           sqrtl(static_cast<long double>(k + 1));
        prev = cur;
        cur = next;
    }
    for (std::size_t k = stable; k < N; ++k) {
        long double dual = charlier_phi_run(static_cast<long double>(k),
                                            static_cast<std::size_t>(x));
        col[k] = (((k + static_cast<std::size_t>(x)) & 1) ? -1.0L : 1.0L) * dual;
    }
}

}  // namespace

KernelMatrix charlier_scaled_kernel(std::size_t N, double phi, const WindowPtr& window) {
    long s = charlier_shift(N, phi);
    const std::size_t m = window->size();
    std::vector<long> arg(m);
    for (std::size_t i = 0; i < m; ++i) {
        double x = window->site(i);
        if (x != std::floor(x))
            throw std::invalid_argument("charlier_scaled_kernel: integer sites required");
        long xi = static_cast<long>(x);
        if (xi + s < 0)
            throw std::invalid_argument("charlier_scaled_kernel: window extends below -s_N");
        arg[i] = xi + s;
    }

    Eigen::MatrixXd K(m, m);
    std::vector<std::vector<long double>> phi_vals(m);
    for (std::size_t i = 0; i < m; ++i) charlier_phi_column(arg[i], N, phi_vals[i]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < N; ++k) acc += phi_vals[i][k] * phi_vals[j][k];
            K(i, j) = static_cast<double>(acc);
            K(j, i) = K(i, j);
        }
    return KernelMatrix(window, std::move(K));
}

// ---------------------------------------------------------------------------
// Quadrature oracles
// ---------------------------------------------------------------------------

double hermite_entry_quadrature(HalfLineSide side, double r, long x, long y, int refine) {
    std::size_t K = static_cast<std::size_t>(std::max(x, y));
    double turning = std::sqrt(2.0 * static_cast<double>(K) + 3.0);
    double far = turning + 10.0;
    double lo = (side == HalfLineSide::Plus) ? r : std::min(-far, r - 20.0);
    double hi = (side == HalfLineSide::Plus) ? std::max(far, r + 20.0) : r;
    double width = std::min(0.4, 7.0 / turning) / (refine ? 1.7 : 1.0);
    auto q = compose_panels(uniform_boundaries(lo, hi, width), refine ? 28 : 20);
    std::vector<long double> psi;
    HermiteCoeffs coeffs(K + 1);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < q.size(); ++j) {
        hermite_weighted_all(static_cast<long double>(q.nodes[j]), K, coeffs, psi);
        acc += static_cast<long double>(q.weights[j]) * psi[x] * psi[y];
    }
    return static_cast<double>(acc);
}

double laguerre_entry_quadrature(double alpha, double r, HalfLineSide side, long x, long y,
                                 int refine) {
    std::size_t K = static_cast<std::size_t>(std::max(x, y));
    double s_hi = std::sqrt(4.0 * static_cast<double>(K + 1) + 60.0 + r);
    double s_r = std::sqrt(r);
    double width = std::min(0.4, 3.0 / std::sqrt(static_cast<double>(K + 1))) /
                   (refine ? 1.7 : 1.0);
    std::vector<double> bounds = (side == HalfLineSide::Plus)
                                     ? uniform_boundaries(s_r, s_hi, width)
                                     : graded_boundaries(0.0, s_r, width, 1e-12);
    auto q = compose_panels(bounds, refine ? 28 : 20);
    std::vector<long double> psi;
    LaguerreCoeffs coeffs(alpha, K + 1);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < q.size(); ++j) {
        double s = q.nodes[j];
        laguerre_weighted_all(static_cast<long double>(s) * s, alpha, K, coeffs, psi);
        acc += static_cast<long double>(q.weights[j] * 2.0 * s) * psi[x] * psi[y];
    }
    return static_cast<double>(acc);
}

double jacobi_entry_quadrature(double a, HalfLineSide side, long x, long y, int refine) {
    std::size_t K = static_cast<std::size_t>(std::max(x, y));
    // t = cos(theta); the Plus side integrates t in (0,1], i.e. theta in [0, pi/2).
    double width = std::min(0.2, 7.0 / static_cast<double>(K + 1)) / (refine ? 1.7 : 1.0);
    double lo = (side == HalfLineSide::Plus) ? 0.0 : M_PI / 2.0;
    double hi = (side == HalfLineSide::Plus) ? M_PI / 2.0 : M_PI;
    // grade toward the endpoint carrying the (sin theta)^{2a+1} factor's kink
    std::vector<double> bounds;
    if (side == HalfLineSide::Plus) {
        bounds = graded_boundaries(lo, hi, width, 1e-12);
    } else {
        auto rev = graded_boundaries(0.0, hi - lo, width, 1e-12);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) bounds.push_back(hi - *it);
    }
    auto q = compose_panels(bounds, refine ? 28 : 20);
    std::vector<double> p;
    long double acc = 0.0L;
    for (std::size_t j = 0; j < q.size(); ++j) {
        double theta = q.nodes[j];
        jacobi_orthonormal_all(std::cos(theta), a, K, p);
        double wfac = std::pow(std::sin(theta), 2.0 * a + 1.0);
        acc += static_cast<long double>(q.weights[j] * wfac) * p[x] * p[y];
    }
    return static_cast<double>(acc);
}

}  // namespace detquas
