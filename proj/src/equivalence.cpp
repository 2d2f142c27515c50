#include "detquas/equivalence.hpp"

#include <cmath>
#include <sstream>

namespace detquas {

double HSSummary::last_gap() const {
    if (partial_sums.size() < 2) return 0.0;
    return partial_sums.back() - partial_sums[partial_sums.size() - 2];
}

HSSummary hs_partial_sums(const KernelFunction& K1, const KernelFunction& K2,
                          std::span<const long> cutoffs) {
    if (K1.domain_model() != K2.domain_model())
        throw std::invalid_argument("hs_partial_sums: kernels live on different lattices");
    HSSummary out;
    out.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    for (std::size_t i = 1; i < out.cutoffs.size(); ++i)
        if (out.cutoffs[i] <= out.cutoffs[i - 1])
            throw std::invalid_argument("hs_partial_sums: cutoffs must increase");
    if (out.cutoffs.empty()) return out;

    const bool full_line = K1.domain_model() == AmbientModel::FullLine;
    const long top = out.cutoffs.back();
    K1.ensure_tables(top + 1);
    K2.ensure_tables(top + 1);

    // Accumulate shell by shell so every cutoff is an exact box sum.
    double acc = 0.0;
    std::size_t next = 0;
    auto add = [&](long x, long y) {
        double d = K1.entry(x, y) - K2.entry(x, y);
        acc += d * d;
    };
    for (long M = 0; M <= top; ++M) {
        // entries with max(|x|,|y|) == M relative to the box shape
        if (M == 0) {
            add(0, 0);
        } else if (full_line) {
            for (long y = -M; y <= M; ++y) {
                add(M, y);
                add(-M, y);
            }
            for (long x = -M + 1; x <= M - 1; ++x) {
                add(x, M);
                add(x, -M);
            }
        } else {
            for (long y = 0; y <= M; ++y) add(M, y);
            for (long x = 0; x <= M - 1; ++x) add(x, M);
        }
        while (next < out.cutoffs.size() && out.cutoffs[next] == M) {
            out.partial_sums.push_back(acc);
            ++next;
        }
    }
    return out;
}

int index_estimate(const KernelMatrix& K1, const KernelMatrix& K2, double sv_threshold_rel) {
    if (!K1.is_projection() || !K2.is_projection())
        throw std::invalid_argument("index_estimate: projection kernels required");
    if (K1.size() != K2.size())
        throw std::invalid_argument("index_estimate: kernels on different windows");
    Eigen::MatrixXd V1 = K1.range_basis();
    Eigen::MatrixXd V2 = K2.range_basis();
    const Eigen::Index r1 = V1.cols(), r2 = V2.cols();
    if (r1 == 0 || r2 == 0) return static_cast<int>(r1 - r2);
    Eigen::MatrixXd B = V2.transpose() * V1;  // matrix of K2 K1 : L1 -> L2
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    double lead = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double thresh = sv_threshold_rel * std::max(lead, 1e-300);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++rank;
    if (lead <= 0.0) rank = 0;
    int ker1 = static_cast<int>(r1 - rank);
    int ker2 = static_cast<int>(r2 - rank);
    return ker1 - ker2;
}

std::vector<double> principal_angle_cosines(const KernelMatrix& K1, const KernelMatrix& K2) {
    Eigen::MatrixXd B = K2.range_basis().transpose() * K1.range_basis();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        out.push_back(std::min(1.0, svd.singularValues()(i)));
    return out;
}

namespace {

double windowed_norm_gap(const KernelFunction& K1, const KernelFunction& K2, long M) {
    const bool full_line = K1.domain_model() == AmbientModel::FullLine;
    long lo = full_line ? -M : 0;
    const std::size_t n = static_cast<std::size_t>(M - lo + 1);
    Eigen::MatrixXd D(n, n);
    for (long x = lo; x <= M; ++x)
        for (long y = x; y <= M; ++y) {
            double d = K1.entry(x, y) - K2.entry(x, y);
            D(x - lo, y - lo) = d;
            D(y - lo, x - lo) = d;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

EquivalenceVerdict verdict(const KernelFunction& K1, const KernelFunction& K2,
                           std::span<const long> cutoffs, VerdictPolicy policy) {
    if (cutoffs.size() < 2)
        throw std::invalid_argument("verdict: at least two cutoffs required");
    EquivalenceVerdict out;
    out.policy = policy;
    out.sums = hs_partial_sums(K1, K2, cutoffs);
    out.cauchy_gap = out.sums.last_gap();
    out.norm_gap = windowed_norm_gap(K1, K2, policy.norm_window);

    bool all_gaps_diverge = true;
    for (std::size_t i = 1; i < out.sums.partial_sums.size(); ++i) {
        double gap = out.sums.partial_sums[i] - out.sums.partial_sums[i - 1];
        if (gap <= policy.divergence_factor * policy.cauchy_eps) all_gaps_diverge = false;
    }

    std::ostringstream diag;
    diag << "truncated evidence, not a proof; ";
    if (out.cauchy_gap <= policy.cauchy_eps) {
        if (out.norm_gap < 1.0) {
            out.verdict = VerdictKind::Equivalent;
            out.index = 0;
            diag << "Cauchy partial sums; windowed norm gap " << out.norm_gap
                 << " < 1 forces index 0";
        } else if (policy.continuous_path_declared) {
            out.verdict = VerdictKind::Equivalent;
            out.index = 0;
            diag << "Cauchy partial sums; declared continuous path forces index 0";
        } else {
            out.verdict = VerdictKind::Inconclusive;
            diag << "Cauchy partial sums but no index-0 route (norm gap " << out.norm_gap
                 << " >= 1, no declared path)";
        }
    } else if (all_gaps_diverge) {
        out.verdict = VerdictKind::Disjoint;
        diag << "every dyadic increment exceeds " << policy.divergence_factor << " * "
             << policy.cauchy_eps;
    } else {
        out.verdict = VerdictKind::Inconclusive;
        diag << "increments neither Cauchy nor uniformly divergent";
    }
    out.diagnostics = diag.str();
    return out;
}

JacobiUniformityTable jacobi_hs_uniformity(std::span<const double> a_grid, long cutoff) {
    JacobiUniformityTable table;
    table.grid.assign(a_grid.begin(), a_grid.end());
    for (double a : table.grid)
        if (!(a > -1.0)) throw std::invalid_argument("jacobi_hs_uniformity: a must exceed -1");
    const std::size_t g = table.grid.size();
    table.S = Eigen::MatrixXd::Zero(g, g);
    std::vector<KernelFunctionPtr> kernels;
    for (double a : table.grid) {
        auto k = discrete_jacobi_symmetric(a, HalfLineSide::Plus);
        k->ensure_tables(cutoff + 1);
        kernels.push_back(std::move(k));
    }
    std::vector<long> cut{cutoff};
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j) {
            double s = hs_partial_sums(*kernels[i], *kernels[j], cut).partial_sums[0];
            table.S(i, j) = s;
            table.S(j, i) = s;
        }
    return table;
}

double jacobi_asymptotic_ratio(double a, long n, long m) {
    if (!(a > -1.0)) throw std::invalid_argument("jacobi_asymptotic_ratio: a must exceed -1");
    if (n < 0 || m < 0) throw std::invalid_argument("jacobi_asymptotic_ratio: n, m >= 0");
    auto kernel = discrete_jacobi_symmetric(a, HalfLineSide::Plus);
    long x = 2 * n + 1, y = 2 * m;
    // Recover the odd/even product from the kernel entry by undoing the
    // rational factors; the product evaluates to 2 * the signed norm product,
    // whose asymptote is (-1)^{n+m} (4/pi) (n+1).
    double entry = kernel->entry(x, y);
    double product = entry * 2.0 * static_cast<double>(x - y) *
                     (static_cast<double>(x + y) + 2.0 * a + 1.0);
    double signed_ratio = product * M_PI / (8.0 * static_cast<double>(n + 1));
    return ((n + m) % 2 == 0) ? signed_ratio : -signed_ratio;
}

}  // namespace detquas
