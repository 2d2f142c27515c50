#include "detquas/dpp.hpp"

#include <algorithm>
#include <cmath>

namespace detquas {

RegularityError::RegularityError(double site_, bool occupied_, double pivot_)
    : std::runtime_error("reduction pivot below regularity gate at site " +
                         std::to_string(site_) + (occupied_ ? " (occupied)" : " (vacant)")),
      site(site_), occupied(occupied_), pivot(pivot_) {}

DeterminantalMeasure::DeterminantalMeasure(KernelMatrix kernel)
    : kernel_(std::move(kernel)), range_basis_(kernel_.range_basis()) {}

double correlation(const KernelMatrix& K, std::span<const double> points) {
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("correlation: points must be pairwise distinct");
    if (n == 0) return 1.0;
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = K.entry_at(points[i], points[j]);
    return M.determinant();
}

double cylinder_prob(const KernelMatrix& K, const CylinderSpec& spec) {
    for (double x : spec.occupied)
        for (double xp : spec.vacant)
            if (x == xp) throw std::invalid_argument("cylinder_prob: X and X' overlap");
    std::vector<std::size_t> idx;
    std::size_t n_occ = spec.occupied.size();
    for (double x : spec.occupied) idx.push_back(K.window()->require_index(x));
    for (double xp : spec.vacant) idx.push_back(K.window()->require_index(xp));
    const std::size_t n = idx.size();
    if (n == 0) return 1.0;
    Eigen::MatrixXd A(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            double k = K.entry(idx[r], idx[c]);
            A(r, c) = (r < n_occ) ? k : ((idx[r] == idx[c] ? 1.0 : 0.0) - k);
        }
    return A.determinant();
}

FullMeasure full_measure(const KernelMatrix& K) {
    const std::size_t m = K.size();
    if (m > 20) throw std::invalid_argument("full_measure: windows capped at 20 sites");
    const Eigen::MatrixXd& k = K.entries();
    FullMeasure out{K.window(), std::vector<double>(std::size_t{1} << m, 0.0)};
    Eigen::MatrixXd A(m, m);
    for (std::uint64_t mask = 0; mask < out.mass.size(); ++mask) {
        for (std::size_t r = 0; r < m; ++r) {
            bool occ = (mask >> r) & 1u;
            for (std::size_t c = 0; c < m; ++c)
                A(r, c) = occ ? k(r, c) : ((r == c ? 1.0 : 0.0) - k(r, c));
        }
        double det = A.partialPivLu().determinant();
        if (det < 0.0) {
            if (det < -1e-10)
                throw std::runtime_error("full_measure: significantly negative mass");
            det = 0.0;
        }
        out.mass[mask] = det;
    }
    double total = out.total();
    if (std::abs(total - 1.0) > 1e-10)
        throw std::runtime_error("full_measure: masses do not sum to 1");
    return out;
}

namespace {

// Uniform double in [0,1) from the top 53 bits; bit-stable across platforms.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Configuration sample_from_basis(const WindowPtr& window, const Eigen::MatrixXd& basis,
                                std::mt19937_64& rng) {
    const std::size_t m = static_cast<std::size_t>(basis.rows());
    Eigen::MatrixXd V = basis;
    std::uint64_t mask = 0;
    while (V.cols() > 0) {
        const Eigen::Index k = V.cols();
        Eigen::VectorXd probs = V.rowwise().squaredNorm();
        double total = probs.sum();
        double u = next_uniform(rng) * total;
        std::size_t pick = m - 1;
        double csum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            csum += probs(i);
            if (u < csum) {
                pick = i;
                break;
            }
        }
        mask |= (std::uint64_t{1} << pick);
        if (k == 1) break;
        // Condition the span on e_pick: eliminate with the column of largest
        // coefficient at the picked row, then re-orthonormalize the rest.
        Eigen::Index jmax = 0;
        V.row(pick).cwiseAbs().maxCoeff(&jmax);
        Eigen::VectorXd e = V.col(jmax) / V(pick, jmax);
        for (Eigen::Index j = 0; j < k; ++j)
            if (j != jmax) V.col(j) -= V(pick, j) * e;
        if (jmax != k - 1) V.col(jmax).swap(V.col(k - 1));
        Eigen::MatrixXd rest = V.leftCols(k - 1);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(rest);
        V = qr.householderQ() * Eigen::MatrixXd::Identity(m, k - 1);
    }
    return Configuration{window, mask};
}

}  // namespace

Configuration DeterminantalMeasure::sample(std::mt19937_64& rng) const {
    if (!kernel_.is_projection())
        throw std::invalid_argument("sample: kernel is not a projection");
    return sample_from_basis(kernel_.window(), range_basis_, rng);
}

Configuration sample(const KernelMatrix& K, std::mt19937_64& rng) {
    if (!K.is_projection())
        throw std::invalid_argument("sample: kernel is not a projection");
    return sample_from_basis(K.window(), K.range_basis(), rng);
}

namespace {

struct WorkingKernel {
    std::vector<double> sites;
    Eigen::MatrixXd K;
};

void elementary_step(WorkingKernel& w, double site, bool occupied, double eps_reg,
                     ReductionTrace& trace) {
    auto it = std::find(w.sites.begin(), w.sites.end(), site);
    if (it == w.sites.end())
        throw std::invalid_argument("reduce: site not present (or already removed)");
    const Eigen::Index i = it - w.sites.begin();
    const Eigen::Index m = w.K.rows();
    double d = w.K(i, i);
    if (occupied) {
        if (std::abs(d) < eps_reg) throw RegularityError(site, true, d);
    } else {
        if (std::abs(1.0 - d) < eps_reg) throw RegularityError(site, false, d);
    }
    double denom = occupied ? d : (1.0 - d);
    double sign = occupied ? -1.0 : 1.0;

    Eigen::MatrixXd next(m - 1, m - 1);
    for (Eigen::Index p = 0, pp = 0; p < m; ++p) {
        if (p == i) continue;
        for (Eigen::Index q = 0, qq = 0; q < m; ++q) {
            if (q == i) continue;
            next(pp, qq) = w.K(p, q) + sign * w.K(p, i) * w.K(i, q) / denom;
            ++qq;
        }
        ++pp;
    }
    trace.steps.push_back(ReductionStep{site, occupied, d});
    w.sites.erase(it);
    w.K = std::move(next);
}

KernelMatrix finish_reduction(const WorkingKernel& w) {
    auto window = std::make_shared<GroundWindow>(AmbientModel::Finite, w.sites, 0);
    return KernelMatrix(window, w.K);
}

}  // namespace

std::pair<KernelMatrix, ReductionTrace> reduce(const KernelMatrix& K,
                                               std::span<const double> occupied,
                                               std::span<const double> vacant,
                                               double eps_reg) {
    for (double x : occupied)
        for (double y : vacant)
            if (x == y) throw std::invalid_argument("reduce: occupied and vacant overlap");
    WorkingKernel w{std::vector<double>(K.window()->sites().begin(), K.window()->sites().end()),
                    K.entries()};
    ReductionTrace trace;
    std::vector<double> vac(vacant.begin(), vacant.end());
    std::vector<double> occ(occupied.begin(), occupied.end());
    std::sort(vac.begin(), vac.end());
    std::sort(occ.begin(), occ.end());
    for (double s : vac) elementary_step(w, s, false, eps_reg, trace);
    for (double s : occ) elementary_step(w, s, true, eps_reg, trace);
    return {finish_reduction(w), std::move(trace)};
}

std::pair<KernelMatrix, ReductionTrace> reduce_ordered(const KernelMatrix& K,
                                                       std::span<const ReductionStep> order,
                                                       double eps_reg) {
    WorkingKernel w{std::vector<double>(K.window()->sites().begin(), K.window()->sites().end()),
                    K.entries()};
    ReductionTrace trace;
    for (const auto& step : order) elementary_step(w, step.site, step.occupied, eps_reg, trace);
    return {finish_reduction(w), std::move(trace)};
}

double rn_density(std::span<const double> X, std::span<const double> Y, double u) {
    if (X.size() != Y.size()) throw std::invalid_argument("rn_density: |X| != |Y|");
    double num = 1.0, den = 1.0;
    for (double y : Y) {
        if (u == y) throw std::invalid_argument("rn_density: u hits a zero of a(.)");
        num *= u - y;
    }
    for (double x : X) {
        if (u == x) throw std::invalid_argument("rn_density: u hits a pole of a(.)");
        den *= u - x;
    }
    return num / den;
}

double quasi_invariance_check(const EnsembleSpec& spec,
                              std::span<const double> X, std::span<const double> Xp,
                              std::span<const double> Y, std::span<const double> Yp) {
    if (X.size() != Y.size())
        throw std::invalid_argument("quasi_invariance_check: |X| != |Y|");
    std::vector<double> zx(X.begin(), X.end());
    zx.insert(zx.end(), Xp.begin(), Xp.end());
    std::vector<double> zy(Y.begin(), Y.end());
    zy.insert(zy.end(), Yp.begin(), Yp.end());
    std::sort(zx.begin(), zx.end());
    std::sort(zy.begin(), zy.end());
    if (zx != zy)
        throw std::invalid_argument("quasi_invariance_check: X u X' must equal Y u Y'");

    const WindowPtr& win = spec.ops.weight().window;
    FullMeasure full = ensemble_measure(spec);

    std::uint64_t zmask = 0;
    for (double z : zx) zmask |= (std::uint64_t{1} << win->require_index(z));
    std::uint64_t xmask = 0, ymask = 0;
    for (double x : X) xmask |= (std::uint64_t{1} << win->require_index(x));
    for (double y : Y) ymask |= (std::uint64_t{1} << win->require_index(y));

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < win->size(); ++i)
        if (!((zmask >> i) & 1u)) rest.push_back(i);

    const std::size_t r = rest.size();
    std::vector<double> mass_x(std::size_t{1} << r, 0.0), mass_y(std::size_t{1} << r, 0.0);
    for (std::uint64_t sub = 0; sub < mass_x.size(); ++sub) {
        std::uint64_t base = 0;
        for (std::size_t b = 0; b < r; ++b)
            if ((sub >> b) & 1u) base |= (std::uint64_t{1} << rest[b]);
        mass_x[sub] = full.mass[base | xmask];
        mass_y[sub] = full.mass[base | ymask];
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < mass_x.size(); ++i) {
        cx += mass_x[i];
        cy += mass_y[i];
    }
    if (cx <= 0.0 || cy <= 0.0)
        throw std::invalid_argument("quasi_invariance_check: a cylinder has zero mass");
    for (auto& v : mass_x) v /= cx;
    for (auto& v : mass_y) v /= cy;

    // Psi_{|a|^2} on the leftover sites, then normalize against mass_x.
    std::vector<double> psi(mass_x.size(), 1.0);
    std::vector<double> a_at(r);
    for (std::size_t b = 0; b < r; ++b) a_at[b] = rn_density(X, Y, win->site(rest[b]));
    for (std::uint64_t sub = 0; sub < psi.size(); ++sub)
        for (std::size_t b = 0; b < r; ++b)
            if ((sub >> b) & 1u) psi[sub] *= a_at[b] * a_at[b];
    double expect = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) expect += psi[i] * mass_x[i];

    double residual = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        residual = std::max(residual, std::abs(mass_y[i] - psi[i] / expect * mass_x[i]));
    return residual;
}

}  // namespace detquas
