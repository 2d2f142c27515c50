#include "detquas/fock.hpp"

#include <bit>
#include <cmath>

#include "detquas/orthopoly.hpp"

namespace detquas {

// ---------------------------------------------------------------------------
// FockVector
// ---------------------------------------------------------------------------

FockVector FockVector::basis_vector(WindowPtr window, std::uint64_t mask) {
    FockVector v(std::move(window));
    v.add(mask, 1.0);
    return v;
}

double FockVector::coeff(std::uint64_t mask) const {
    auto it = coeffs_.find(mask);
    return it == coeffs_.end() ? 0.0 : it->second;
}

void FockVector::add(std::uint64_t mask, double value) {
    if (value == 0.0) return;
    auto [it, inserted] = coeffs_.emplace(mask, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

FockVector& FockVector::operator+=(const FockVector& other) {
    for (const auto& [mask, c] : other.coeffs_) add(mask, c);
    return *this;
}

FockVector& FockVector::operator*=(double scale) {
    if (scale == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [mask, c] : coeffs_) c *= scale;
    return *this;
}

double FockVector::dot(const FockVector& other) const {
    double acc = 0.0;
    for (const auto& [mask, c] : coeffs_) acc += c * other.coeff(mask);
    return acc;
}

double FockVector::max_abs() const {
    double m = 0.0;
    for (const auto& [mask, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

// ---------------------------------------------------------------------------
// Creation / annihilation
// ---------------------------------------------------------------------------

namespace {

// Number of occupied sites above index i: the sign exponent of the wedge.
int inversions_above(std::uint64_t mask, std::size_t i) {
    std::uint64_t above = mask >> (i + 1);
    return std::popcount(above) & 1;
}

}  // namespace

FockVector apply_creation(double site, const FockVector& v) {
    std::size_t i = v.window()->require_index(site);
    FockVector out(v.window());
    for (const auto& [mask, c] : v.coeffs()) {
        if ((mask >> i) & 1u) continue;  // a^+_x a^+_x = 0
        double sign = inversions_above(mask, i) ? -1.0 : 1.0;
        out.add(mask | (std::uint64_t{1} << i), sign * c);
    }
    return out;
}

FockVector apply_annihilation(double site, const FockVector& v) {
    std::size_t i = v.window()->require_index(site);
    FockVector out(v.window());
    for (const auto& [mask, c] : v.coeffs()) {
        if (!((mask >> i) & 1u)) continue;
        double sign = inversions_above(mask, i) ? -1.0 : 1.0;
        out.add(mask & ~(std::uint64_t{1} << i), sign * c);
    }
    return out;
}

FockVector apply_monomial(std::span<const double> X, std::span<const double> Y,
                          const FockVector& v) {
    FockVector out(v.window());
    for (const auto& [mask, c] : v.coeffs()) {
        Configuration omega{v.window(), mask};
        int sign = fermionic_sign(X, Y, omega);
        if (sign == 0) continue;
        std::uint64_t target = mask;
        for (double y : Y) target &= ~(std::uint64_t{1} << v.window()->require_index(y));
        for (double x : X) target |= (std::uint64_t{1} << v.window()->require_index(x));
        out.add(target, sign * c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

namespace {

Eigen::Index dim_of(const WindowPtr& window) {
    if (window->size() > 24)
        throw std::invalid_argument("GicarOperator: window too large for 2^N matrices");
    return Eigen::Index{1} << window->size();
}

void check_same_window(const GicarOperator& a, const GicarOperator& b) {
    if (a.window.get() != b.window.get())
        throw std::invalid_argument("GicarOperator: window mismatch");
}

}  // namespace

GicarOperator GicarOperator::operator*(const GicarOperator& other) const {
    check_same_window(*this, other);
    return GicarOperator{window, (matrix * other.matrix).pruned()};
}

GicarOperator GicarOperator::operator+(const GicarOperator& other) const {
    check_same_window(*this, other);
    return GicarOperator{window, matrix + other.matrix};
}

GicarOperator GicarOperator::operator-(const GicarOperator& other) const {
    check_same_window(*this, other);
    return GicarOperator{window, matrix - other.matrix};
}

GicarOperator GicarOperator::scaled(double s) const {
    return GicarOperator{window, (matrix * s).eval()};
}

double GicarOperator::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

FockVector GicarOperator::apply(const FockVector& v) const {
    FockVector out(window);
    for (const auto& [mask, c] : v.coeffs()) {
        // walk column `mask` (column-major storage)
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, static_cast<Eigen::Index>(mask));
             it; ++it)
            out.add(static_cast<std::uint64_t>(it.row()), it.value() * c);
    }
    return out;
}

GicarOperator identity_op(const WindowPtr& window) {
    Eigen::SparseMatrix<double> m(dim_of(window), dim_of(window));
    m.setIdentity();
    return GicarOperator{window, std::move(m)};
}

namespace {

GicarOperator ladder_op(const WindowPtr& window, double site, bool create) {
    std::size_t i = window->require_index(site);
    Eigen::Index dim = dim_of(window);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(dim) / 2);
    for (Eigen::Index mask = 0; mask < dim; ++mask) {
        bool occ = (mask >> i) & 1;
        if (create == occ) continue;
        Eigen::Index target = create ? (mask | (Eigen::Index{1} << i))
                                     : (mask & ~(Eigen::Index{1} << i));
        double sign = inversions_above(static_cast<std::uint64_t>(mask), i) ? -1.0 : 1.0;
        trip.emplace_back(target, mask, sign);
    }
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return GicarOperator{window, std::move(m)};
}

}  // namespace

GicarOperator creation_op(const WindowPtr& window, double site) {
    return ladder_op(window, site, true);
}

GicarOperator annihilation_op(const WindowPtr& window, double site) {
    return ladder_op(window, site, false);
}

GicarOperator p_epsilon(double site, const WindowPtr& window) {
    std::size_t i = window->require_index(site);
    Eigen::Index dim = dim_of(window);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index mask = 0; mask < dim; ++mask)
        trip.emplace_back(mask, mask, ((mask >> i) & 1) ? -1.0 : 1.0);
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return GicarOperator{window, std::move(m)};
}

GicarOperator p_transposition(double site_x, double site_y, const WindowPtr& window) {
    if (site_x == site_y)
        throw std::invalid_argument("p_transposition: sites must be distinct");
    double lo = std::min(site_x, site_y), hi = std::max(site_x, site_y);

    GicarOperator id = identity_op(window);
    GicarOperator ex = p_epsilon(lo, window);
    GicarOperator ey = p_epsilon(hi, window);
    GicarOperator exey = ex * ey;

    // eta over the open interval (lo, hi)
    GicarOperator eta_between = id;
    std::size_t ilo = window->require_index(lo), ihi = window->require_index(hi);
    for (std::size_t k = ilo + 1; k < ihi; ++k)
        eta_between = eta_between * p_epsilon(window->site(k), window);

    GicarOperator hop = creation_op(window, lo) * annihilation_op(window, hi) +
                        creation_op(window, hi) * annihilation_op(window, lo);

    GicarOperator half_plus = (id + exey).scaled(0.5);
    GicarOperator zeta = (id + exey + (id - exey) * eta_between).scaled(0.5);
    return half_plus + zeta * hop;
}

GicarOperator ideal_generator_image(double site_x, double site_y, const WindowPtr& window,
                                    IdealVariant variant) {
    if (site_x == site_y)
        throw std::invalid_argument("ideal_generator_image: sites must be distinct");
    GicarOperator id = identity_op(window);
    GicarOperator s = p_transposition(site_x, site_y, window);
    GicarOperator ex = p_epsilon(site_x, window);
    GicarOperator ey = p_epsilon(site_y, window);
    if (variant == IdealVariant::Minus)
        return (id - s) * (id - ex) * (id - ey);
    return (id - s) * (id + ex) * (id + ey);
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

double quasifree_state(const KernelMatrix& K, std::span<const double> X,
                       std::span<const double> Y) {
    if (X.size() != Y.size())
        throw std::invalid_argument("quasifree_state: |X| != |Y|");
    const std::size_t n = X.size();
    if (n == 0) return 1.0;
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = K.entry_at(Y[i], X[j]);
    return M.determinant();
}

double FullMeasure::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

FullMeasure ensemble_measure(const EnsembleSpec& spec) {
    const WindowPtr& win = spec.ops.weight().window;
    if (win->size() > 24)
        throw std::invalid_argument("ensemble_measure: window too large to enumerate");
    FullMeasure out{win, std::vector<double>(std::size_t{1} << win->size(), 0.0)};
    for (const auto& omega : enumerate_configurations(win, spec.N))
        out.mass[omega.mask] = ensemble_mass(spec, omega);
    return out;
}

double tau_state(const FullMeasure& measure, std::span<const double> X,
                 std::span<const double> Y) {
    if (X.size() != Y.size())
        throw std::invalid_argument("tau_state: |X| != |Y|");
    if (std::abs(measure.total() - 1.0) > 1e-12)
        throw std::invalid_argument("tau_state: masses must sum to 1");
    const WindowPtr& win = measure.window;
    if (X.empty()) return 1.0;

    std::uint64_t xmask = 0, ymask = 0;
    for (double x : X) xmask |= (std::uint64_t{1} << win->require_index(x));
    for (double y : Y) ymask |= (std::uint64_t{1} << win->require_index(y));

    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < measure.mass.size(); ++mask) {
        double m = measure.mass[mask];
        if (m == 0.0) continue;
        Configuration omega{win, mask};
        int sign = fermionic_sign(X, Y, omega);
        if (sign == 0) continue;
        std::uint64_t target = (mask & ~ymask) | xmask;
        double mt = measure.mass[target];
        if (mt == 0.0) continue;
        acc += sign * std::sqrt(m * mt);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Pfaffian
// ---------------------------------------------------------------------------

namespace {

double pfaffian_rec(const Eigen::MatrixXd& A, std::vector<int>& idx) {
    const std::size_t n = idx.size();
    if (n == 0) return 1.0;
    if (n == 2) return A(idx[0], idx[1]);
    double acc = 0.0;
    int first = idx[0];
    std::vector<int> rest(idx.begin() + 1, idx.end());
    double sign = 1.0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
        int pick = rest[j];
        std::vector<int> sub;
        sub.reserve(rest.size() - 1);
        for (std::size_t k = 0; k < rest.size(); ++k)
            if (k != j) sub.push_back(rest[k]);
        acc += sign * A(first, pick) * pfaffian_rec(A, sub);
        sign = -sign;
    }
    return acc;
}

}  // namespace

double pfaffian(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("pfaffian: square matrix required");
    if (A.rows() % 2 != 0) throw std::invalid_argument("pfaffian: even dimension required");
    if (A.rows() > 0 && (A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("pfaffian: matrix is not skew-symmetric");
    if (A.rows() > 16)
        throw std::invalid_argument("pfaffian: recursive expansion limited to order 16");
    std::vector<int> idx(A.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return pfaffian_rec(A, idx);
}

double quasifree_state_pfaffian(const KernelMatrix& K, std::span<const double> X,
                                std::span<const double> Y) {
    if (X.size() != Y.size())
        throw std::invalid_argument("quasifree_state_pfaffian: |X| != |Y|");
    const std::size_t n = X.size();
    if (n == 0) return 1.0;
    // Word a^+_{x_n}..a^+_{x_1} a^-_{y_1}..a^-_{y_n}, one row per factor.
    struct Factor {
        bool creation;
        double site;
    };
    std::vector<Factor> word;
    for (std::size_t i = 0; i < n; ++i) word.push_back({true, X[n - 1 - i]});
    for (std::size_t i = 0; i < n; ++i) word.push_back({false, Y[i]});

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::size_t i = 0; i < word.size(); ++i)
        for (std::size_t j = i + 1; j < word.size(); ++j) {
            const auto& vi = word[i];
            const auto& vj = word[j];
            double value = 0.0;
            if (vi.creation && !vj.creation) {
                value = K.entry_at(vi.site, vj.site);
            } else if (!vi.creation && vj.creation) {
                value = (vi.site == vj.site ? 1.0 : 0.0) - K.entry_at(vj.site, vi.site);
            }
            A(i, j) = value;
            A(j, i) = -value;
        }
    return pfaffian(A);
}

}  // namespace detquas
