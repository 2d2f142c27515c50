#include "detquas/ground.hpp"

#include <algorithm>
#include <bit>

namespace detquas {

GroundWindow::GroundWindow(AmbientModel model, std::vector<double> points, long nu_first)
    : model_(model), points_(std::move(points)), nu_first_(nu_first) {
    if (points_.empty())
        throw std::invalid_argument("GroundWindow: empty window");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i - 1] < points_[i]))
            throw std::invalid_argument("GroundWindow: sites must be strictly increasing");
    if (model_ == AmbientModel::HalfLine && points_.front() < 0.0)
        throw std::invalid_argument("GroundWindow: half-line window has a negative site");
}

WindowPtr GroundWindow::integer_interval(AmbientModel model, long lo, long hi) {
    if (hi < lo)
        throw std::invalid_argument("GroundWindow: hi < lo");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long x = lo; x <= hi; ++x) pts.push_back(static_cast<double>(x));
    long nu_first = (model == AmbientModel::Finite) ? 0 : lo;
    return std::make_shared<GroundWindow>(model, std::move(pts), nu_first);
}

std::optional<std::size_t> GroundWindow::index_of(double site) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), site);
    if (it == points_.end() || *it != site) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
}

std::size_t GroundWindow::require_index(double site) const {
    auto idx = index_of(site);
    if (!idx) throw std::invalid_argument("site not in window");
    return *idx;
}

std::size_t Configuration::count() const {
    return static_cast<std::size_t>(std::popcount(mask));
}

bool Configuration::contains_site(double site) const {
    auto idx = window->index_of(site);
    return idx && contains_index(*idx);
}

std::vector<double> Configuration::sites() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < window->size(); ++i)
        if (contains_index(i)) out.push_back(window->site(i));
    return out;
}

Configuration make_configuration(WindowPtr window, std::span<const double> occupied) {
    if (window->size() > 64)
        throw std::invalid_argument("configuration windows are capped at 64 sites");
    Configuration c{std::move(window), 0};
    for (double s : occupied) c.mask |= (std::uint64_t{1} << c.window->require_index(s));
    return c;
}

int sgn_pair(double x, double y) {
    if (x == y) throw std::invalid_argument("sgn_pair: equal sites");
    return x > y ? 1 : -1;
}

namespace {

void check_distinct(std::span<const double> t, const char* which) {
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j])
                throw std::invalid_argument(std::string("fermionic_sign: repeated entry in ") + which);
}

}  // namespace

int fermionic_sign(std::span<const double> X, std::span<const double> Y,
                   const Configuration& omega) {
    if (X.size() != Y.size() || X.empty())
        throw std::invalid_argument("fermionic_sign: tuples must have equal positive length");
    check_distinct(X, "X");
    check_distinct(Y, "Y");

    const GroundWindow& win = *omega.window;
    std::uint64_t ymask = 0, xmask = 0;
    for (double y : Y) ymask |= (std::uint64_t{1} << win.require_index(y));
    for (double x : X) xmask |= (std::uint64_t{1} << win.require_index(x));

    if ((omega.mask & ymask) != ymask) return 0;          // omega does not contain Y
    std::uint64_t rest = omega.mask & ~ymask;             // omega \ Y
    if (rest & xmask) return 0;                           // collision with X

    int sign = 1;
    for (std::size_t i = 0; i < win.size(); ++i) {
        if (!((rest >> i) & 1u)) continue;
        double u = win.site(i);
        for (std::size_t k = 0; k < X.size(); ++k)
            sign *= sgn_pair(X[k], u) * sgn_pair(Y[k], u);
    }
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j)
            sign *= sgn_pair(X[i], X[j]) * sgn_pair(Y[i], Y[j]);
    return sign;
}

bool cylinder_contains(const Configuration& omega, const CylinderSpec& spec) {
    for (double x : spec.occupied)
        for (double xp : spec.vacant)
            if (x == xp) throw std::invalid_argument("cylinder: X and X' overlap");
    for (double x : spec.occupied)
        if (!omega.contains_site(x)) return false;
    for (double xp : spec.vacant)
        if (omega.contains_site(xp)) return false;
    return true;
}

std::vector<Configuration> enumerate_configurations(const WindowPtr& window, std::size_t n) {
    const std::size_t m = window->size();
    if (m > 64) throw std::invalid_argument("configuration windows are capped at 64 sites");
    if (n > m) throw std::invalid_argument("enumerate_configurations: n exceeds window size");

    std::vector<Configuration> out;
    if (n == 0) {
        out.push_back(Configuration{window, 0});
        return out;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    while (true) {
        std::uint64_t mask = 0;
        for (std::size_t i : idx) mask |= (std::uint64_t{1} << i);
        out.push_back(Configuration{window, mask});

        // next n-subset in lexicographic order
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == m - n + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < n; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

}  // namespace detquas
