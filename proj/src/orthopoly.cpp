#include "detquas/orthopoly.hpp"

#include <cmath>

#include "detquas/kernels.hpp"

namespace detquas {

WeightFunction::WeightFunction(WindowPtr win, std::vector<double> values)
    : window(std::move(win)), w(std::move(values)) {
    if (w.size() != window->size())
        throw std::invalid_argument("WeightFunction: one value per site required");
    for (double v : w)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("WeightFunction: weights must be strictly positive");
}

double WeightFunction::check_moment_bound(std::size_t N) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += std::pow(window->site(i), 2.0 * static_cast<double>(N)) * w[i];
    if (!std::isfinite(s))
        throw std::runtime_error("WeightFunction: truncated moment overflows");
    moment_bound_checked = true;
    return s;
}

WeightFunction uniform_weight(WindowPtr window) {
    std::vector<double> w(window->size(), 1.0);
    return WeightFunction(std::move(window), std::move(w));
}

WeightFunction charlier_weight(WindowPtr window, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("charlier: theta must be positive");
    std::vector<double> w(window->size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = window->site(i);
        if (x < 0 || x != std::floor(x))
            throw std::invalid_argument("charlier: sites must be nonnegative integers");
        w[i] = std::exp(x * std::log(theta) - std::lgamma(x + 1.0));
    }
    return WeightFunction(window, std::move(w));
}

WeightFunction meixner_weight(WindowPtr window, double beta, double c) {
    if (!(beta > 0.0) || !(c > 0.0) || !(c < 1.0))
        throw std::invalid_argument("meixner: need beta > 0 and 0 < c < 1");
    std::vector<double> w(window->size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = window->site(i);
        if (x < 0 || x != std::floor(x))
            throw std::invalid_argument("meixner: sites must be nonnegative integers");
        // (beta)_x c^x / x!
        w[i] = std::exp(std::lgamma(beta + x) - std::lgamma(beta) + x * std::log(c) -
                        std::lgamma(x + 1.0));
    }
    return WeightFunction(window, std::move(w));
}

WeightFunction krawtchouk_weight(WindowPtr window, long M, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("krawtchouk: need 0 < p < 1");
    std::vector<double> w(window->size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = window->site(i);
        if (x < 0 || x > static_cast<double>(M) || x != std::floor(x))
            throw std::invalid_argument("krawtchouk: sites must lie in {0..M}");
        w[i] = std::exp(std::lgamma(M + 1.0) - std::lgamma(x + 1.0) - std::lgamma(M - x + 1.0) +
                        x * std::log(p) + (M - x) * std::log1p(-p));
    }
    return WeightFunction(window, std::move(w));
}

OPSystem::OPSystem(WeightFunction weight, std::size_t n_max)
    : weight_(std::move(weight)), n_max_(n_max) {
    const std::size_t m = weight_.window->size();
    // On an m-site window only degrees < m carry positive norms; a larger
    // declared bound clamps there.
    const std::size_t kmax = std::min(n_max_, m - 1);

    const auto& w = weight_.w;
    std::vector<double> prev(m, 0.0), cur(m, 1.0), next(m);
    alpha_.resize(kmax + 1);
    beta_.assign(kmax + 1, 0.0);
    h_.resize(kmax + 1);

    for (std::size_t k = 0; k <= kmax; ++k) {
        double hk = 0.0, xk = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double c = cur[i] * cur[i] * w[i];
            hk += c;
            xk += weight_.window->site(i) * c;
        }
        if (!(hk > 0.0) || !std::isfinite(hk))
            throw std::runtime_error("OPSystem: squared norm degenerate at degree " +
                                     std::to_string(k));
        h_[k] = hk;
        alpha_[k] = xk / hk;
        if (k > 0) beta_[k] = h_[k] / h_[k - 1];
        if (k < kmax) {
            for (std::size_t i = 0; i < m; ++i) {
                double x = weight_.window->site(i);
                next[i] = (x - alpha_[k]) * cur[i] - (k > 0 ? beta_[k] * prev[i] : 0.0);
            }
            prev.swap(cur);
            cur.swap(next);
        }
    }
}

double OPSystem::eval(std::size_t k, double x) const {
    // The recurrence coefficients reach one degree past the stored table.
    if (k > alpha_.size()) throw std::invalid_argument("OPSystem::eval: degree out of range");
    double prev = 0.0, cur = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        double next = (x - alpha_[j]) * cur - (j > 0 ? beta_[j] * prev : 0.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double OPSystem::eval_derivative(std::size_t k, double x) const {
    if (k > alpha_.size())
        throw std::invalid_argument("OPSystem::eval_derivative: degree out of range");
    double p_prev = 0.0, p_cur = 1.0, d_prev = 0.0, d_cur = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double b = (j > 0) ? beta_[j] : 0.0;
        double p_next = (x - alpha_[j]) * p_cur - b * p_prev;
        double d_next = p_cur + (x - alpha_[j]) * d_cur - b * d_prev;
        p_prev = p_cur; p_cur = p_next;
        d_prev = d_cur; d_cur = d_next;
    }
    return d_cur;
}

double OPSystem::orthogonality_residual() const {
    const std::size_t m = weight_.window->size();
    const std::size_t K = alpha_.size() - 1;
    // Re-evaluate the table of p_k at sites.
    std::vector<std::vector<double>> P(K + 1, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        double x = weight_.window->site(i);
        double prev = 0.0, cur = 1.0;
        for (std::size_t k = 0; k <= K; ++k) {
            P[k][i] = cur;
            double next = (x - alpha_[k]) * cur - (k > 0 ? beta_[k] * prev : 0.0);
            prev = cur;
            cur = next;
        }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j <= K; ++j)
        for (std::size_t k = j + 1; k <= K; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dot += P[j][i] * P[k][i] * weight_.w[i];
            worst = std::max(worst, std::abs(dot) / std::sqrt(h_[j] * h_[k]));
        }
    return worst;
}

EnsembleSpec::EnsembleSpec(OPSystem system, std::size_t n_particles)
    : ops(std::move(system)), N(n_particles) {
    if (N > ops.weight().window->size())
        throw std::invalid_argument("EnsembleSpec: N exceeds window size");
    if (N > ops.degree_bound())
        throw std::invalid_argument("EnsembleSpec: N exceeds the degree bound of the OPSystem");
}

KernelMatrix cd_kernel(const OPSystem& ops, std::size_t N) {
    if (N > ops.degree_bound())
        throw std::invalid_argument("cd_kernel: N exceeds degree bound");
    const auto& wf = ops.weight();
    const std::size_t m = wf.window->size();
    if (N > m) throw std::invalid_argument("cd_kernel: rank exceeds window size");
    // Phi(i,k) = p_k(x_i) sqrt(W(x_i) / h_k); K = Phi Phi^T.
    Eigen::MatrixXd phi(m, N);
    for (std::size_t i = 0; i < m; ++i) {
        double x = wf.window->site(i);
        double prev = 0.0, cur = 1.0;
        for (std::size_t k = 0; k < N; ++k) {
            phi(i, k) = cur * std::sqrt(wf.w[i] / ops.h(k));
            double next = (x - ops.alpha(k)) * cur - (k > 0 ? ops.beta(k) * prev : 0.0);
            prev = cur;
            cur = next;
        }
    }
    Eigen::MatrixXd K = phi * phi.transpose();
    return KernelMatrix(wf.window, std::move(K));
}

double cd_kernel_ratio_form(const OPSystem& ops, std::size_t N, double x, double y) {
    if (N == 0) return 0.0;
    if (N > ops.degree_bound())
        throw std::invalid_argument("cd_kernel_ratio_form: N exceeds degree bound");
    if (x == y) throw std::invalid_argument("cd_kernel_ratio_form: ratio form needs x != y");
    const auto& wf = ops.weight();
    double wx = wf.w[wf.window->require_index(x)];
    double wy = wf.w[wf.window->require_index(y)];
    double num = ops.eval(N, y) * ops.eval(N - 1, x) - ops.eval(N - 1, y) * ops.eval(N, x);
    return num / (y - x) / ops.h(N - 1) * std::sqrt(wx * wy);
}

double ensemble_mass(const EnsembleSpec& spec, const Configuration& omega) {
    if (omega.count() != spec.N)
        throw std::invalid_argument("ensemble_mass: configuration size differs from N");
    auto pts = omega.sites();
    const auto& wf = spec.ops.weight();
    double logw = 0.0;
    double vsq = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        logw += std::log(wf.w[wf.window->require_index(pts[i])]);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = pts[i] - pts[j];
            vsq *= d * d;
        }
    }
    double logz = 0.0;
    for (std::size_t k = 0; k < spec.N; ++k) logz += std::log(spec.ops.h(k));
    return vsq * std::exp(logw - logz);
}

double sf_closed_form(const OPSystem& ops, std::size_t N,
                      std::span<const double> X, std::span<const double> Y) {
    const std::size_t n = X.size();
    if (Y.size() != n) throw std::invalid_argument("sf_closed_form: |X| != |Y|");
    if (n > N) throw std::invalid_argument("sf_closed_form: n exceeds N");
    if (N > ops.degree_bound())
        throw std::invalid_argument("sf_closed_form: N exceeds degree bound");
    if (n == 0) return 1.0;

    double vx = 1.0, vy = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            vx *= X[i] - X[j];
            vy *= Y[i] - Y[j];
        }
    if (vx == 0.0 || vy == 0.0)
        throw std::invalid_argument("sf_closed_form: repeated entries inside a tuple");

    Eigen::MatrixXd D(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double x = X[i], y = Y[j];
            if (x != y) {
                D(i, j) = (ops.eval(N, x) * ops.eval(N - 1, y) -
                           ops.eval(N - 1, x) * ops.eval(N, y)) / (x - y);
            } else {
                // removable singularity: Wronskian-type confluent limit
                D(i, j) = ops.eval(N - 1, x) * ops.eval_derivative(N, x) -
                          ops.eval(N, x) * ops.eval_derivative(N - 1, x);
            }
        }

    double factor = 1.0;
    for (std::size_t k = N - n; k < N; ++k) factor *= ops.h(k);
    factor /= std::pow(ops.h(N - 1), static_cast<double>(n));
    return factor * D.determinant() / (vx * vy);
}

}  // namespace detquas
