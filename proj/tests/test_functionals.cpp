#include <doctest.h>

#include <cmath>
#include <random>

#include "detquas/dpp.hpp"
#include "detquas/functionals.hpp"

using namespace detquas;

namespace {

WindowPtr win_0_to(long hi) {
    return GroundWindow::integer_interval(AmbientModel::HalfLine, 0, hi);
}

KernelMatrix random_projection(const WindowPtr& w, std::size_t rank, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd G(w->size(), rank);
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), rank);
    return KernelMatrix(w, Q * Q.transpose());
}

MultiplierFunction decaying_multiplier(const WindowPtr& w, double amp) {
    std::vector<double> alpha(w->size());
    for (std::size_t i = 0; i < alpha.size(); ++i)
        alpha[i] = 1.0 + amp * std::pow(0.5, static_cast<double>(i));
    return MultiplierFunction(w, std::move(alpha));
}

}  // namespace

TEST_CASE("multiplicative functional products") {
    auto w = win_0_to(1);
    MultiplierFunction alpha(w, {2.0, 3.0});
    CHECK(multiplicative_functional(alpha, Configuration{w, 0}) == 1.0);
    CHECK(multiplicative_functional(alpha, Configuration{w, 0b11}) == doctest::Approx(6.0));

    MultiplierFunction ones(w, {1.0, 1.0});
    for (std::uint64_t mask = 0; mask < 4; ++mask)
        CHECK(multiplicative_functional(ones, Configuration{w, mask}) == 1.0);

    CHECK_THROWS_AS(MultiplierFunction(w, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("regularized determinant") {
    CHECK(det2(Eigen::MatrixXd::Zero(4, 4)) == doctest::Approx(1.0));

    Eigen::VectorXd lam(3);
    lam << 0.3, -0.2, 1.1;
    Eigen::MatrixXd D = lam.asDiagonal();
    double expect = 1.0;
    for (int i = 0; i < 3; ++i) expect *= (1.0 + lam(i)) * std::exp(-lam(i));
    CHECK(det2(D) == doctest::Approx(expect).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd G(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) G(i, j) = 0.3 * gauss(rng);
    Eigen::MatrixXd S = 0.5 * (G + G.transpose());
    CHECK(det2(S) == doctest::Approx(det2_symmetric_eigen(S)).epsilon(1e-10));
}

TEST_CASE("expected sqrt of the normalized multiplicative functional") {
    std::mt19937_64 rng(9);
    auto w = win_0_to(7);
    KernelMatrix K = random_projection(w, 3, rng);

    MultiplierFunction ones(w, std::vector<double>(8, 1.0));
    CHECK(expected_sqrt_multiplicative(K, ones) == doctest::Approx(1.0).epsilon(1e-12));

    KernelMatrix zero(w, Eigen::MatrixXd::Zero(8, 8));
    MultiplierFunction alpha = decaying_multiplier(w, 0.3);
    CHECK(expected_sqrt_multiplicative(zero, alpha) == doctest::Approx(1.0).epsilon(1e-12));

    // det2 route vs plain determinant route vs enumeration
    double closed = expected_sqrt_multiplicative(K, alpha);
    CHECK(closed == doctest::Approx(expected_sqrt_multiplicative_direct(K, alpha))
                        .epsilon(1e-11));
    FullMeasure mu = full_measure(K);
    double e_sqrt = 0.0, e_full = 0.0;
    for (std::uint64_t mask = 0; mask < mu.mass.size(); ++mask) {
        Configuration c{w, mask};
        e_sqrt += std::sqrt(multiplicative_functional(alpha, c)) * mu.mass[mask];
        e_full += multiplicative_functional(alpha, c) * mu.mass[mask];
    }
    CHECK(closed == doctest::Approx(e_sqrt / std::sqrt(e_full)).epsilon(1e-10));
}

TEST_CASE("density identity for multiplied ranges") {
    std::mt19937_64 rng(21);
    auto w = win_0_to(5);
    KernelMatrix K = random_projection(w, 2, rng);

    MultiplierFunction ones(w, std::vector<double>(6, 1.0));
    CHECK(density_ratio_check(K, ones) <= 1e-12);

    MultiplierFunction a = decaying_multiplier(w, 0.2);
    CHECK(density_ratio_check(K, a) <= 1e-9);
}

TEST_CASE("truncation exhaustion converges monotonically") {
    auto w = win_0_to(39);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(0.2, 2.0);
    std::vector<double> wv(40);
    for (auto& v : wv) v = dist(rng);
    OPSystem ops(WeightFunction(w, wv), 5);
    KernelMatrix K = cd_kernel(ops, 5);

    std::vector<double> alpha(40);
    for (std::size_t i = 0; i < 40; ++i)
        alpha[i] = 1.0 + 0.4 / std::pow(static_cast<double>(i) + 1.0, 1.2);
    MultiplierFunction full(w, alpha);
    double limit = expected_sqrt_multiplicative(K, full);

    double prev_gap = std::numeric_limits<double>::infinity();
    for (std::size_t cut : {5u, 10u, 20u, 30u, 40u}) {
        std::vector<double> truncated(40, 1.0);
        for (std::size_t i = 0; i < cut; ++i) truncated[i] = alpha[i];
        double value = expected_sqrt_multiplicative(K, MultiplierFunction(w, truncated));
        double gap = std::abs(value - limit);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-14);
}
