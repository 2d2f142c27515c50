#include <doctest.h>

#include <cmath>
#include <random>

#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

using namespace detquas;

namespace {

WindowPtr win_0_to(long hi) {
    return GroundWindow::integer_interval(AmbientModel::HalfLine, 0, hi);
}

std::vector<double> random_weights(std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.2, 2.0);
    std::vector<double> w(m);
    for (auto& v : w) v = dist(rng);
    return w;
}

}  // namespace

TEST_CASE("stieltjes recurrence on two uniform sites") {
    OPSystem ops(uniform_weight(win_0_to(1)), 1);
    CHECK(ops.h(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ops.alpha(0) == doctest::Approx(0.5).epsilon(1e-15));  // p_1 = x - 1/2
    CHECK(ops.h(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ops.eval(1, 0.0) == doctest::Approx(-0.5));
    CHECK(ops.eval(0, 17.0) == 1.0);
}

TEST_CASE("charlier h0 equals the truncated exponential series") {
    auto w = win_0_to(20);
    OPSystem ops(charlier_weight(w, 1.0), 3);
    double series = 0.0;  // independent direct summation
    double term = 1.0;
    for (int k = 0; k <= 20; ++k) {
        series += term;
        term /= (k + 1.0);
    }
    CHECK(ops.h(0) == doctest::Approx(series).epsilon(1e-15));
    CHECK(ops.h(0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("single-site system") {
    auto w = GroundWindow::integer_interval(AmbientModel::HalfLine, 3, 3);
    WeightFunction wf(w, {0.7});
    OPSystem ops(wf, 0);
    CHECK(ops.h(0) == doctest::Approx(0.7));
    CHECK(ops.eval(0, 3.0) == 1.0);
    // a larger declared bound clamps at the window size
    OPSystem clamped(wf, 4);
    CHECK(clamped.h(0) == doctest::Approx(0.7));
    CHECK_THROWS(clamped.h(1));
}

TEST_CASE("orthogonality residual stays within tolerance on a 200-site window") {
    std::mt19937_64 rng(7);
    auto w = win_0_to(199);
    OPSystem ops(WeightFunction(w, random_weights(200, rng)), 12);
    CHECK(ops.orthogonality_residual() <= 1e-10);
}

TEST_CASE("moment bound check") {
    auto w = win_0_to(10);
    WeightFunction wf = uniform_weight(w);
    CHECK(!wf.moment_bound_checked);
    double s = wf.check_moment_bound(1);
    CHECK(wf.moment_bound_checked);
    double direct = 0.0;
    for (int x = 0; x <= 10; ++x) direct += x * x;
    CHECK(s == doctest::Approx(direct));
}

TEST_CASE("cd kernel examples") {
    OPSystem ops(uniform_weight(win_0_to(1)), 2);
    KernelMatrix K1 = cd_kernel(ops, 1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(K1.entry(i, j) == doctest::Approx(0.5).epsilon(1e-14));

    KernelMatrix K0 = cd_kernel(ops, 0);
    CHECK(K0.entries().cwiseAbs().maxCoeff() == 0.0);

    KernelMatrix K2 = cd_kernel(ops, 2);
    CHECK((K2.entries() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(cd_kernel(ops, 3), std::invalid_argument);
}

TEST_CASE("cd kernels are projections and match the ratio form") {
    std::mt19937_64 rng(11);
    for (std::size_t m : {12u, 40u}) {
        auto w = win_0_to(static_cast<long>(m) - 1);
        OPSystem ops(WeightFunction(w, random_weights(m, rng)), 12);
        for (std::size_t N : {1u, 5u, 12u}) {
            KernelMatrix K = cd_kernel(ops, N);
            CHECK(K.projection_defect() <= 1e-10);
            CHECK(std::abs(K.trace() - static_cast<double>(N)) <= 1e-10);
            for (std::size_t i = 0; i < m; i += 5)
                for (std::size_t j = 0; j < m; j += 7) {
                    if (i == j) continue;
                    double sum_form = K.entry(j, i);
                    double ratio = cd_kernel_ratio_form(ops, N, w->site(i), w->site(j));
                    CHECK(std::abs(sum_form - ratio) <= 1e-9 * std::max(1.0, std::abs(ratio)));
                }
        }
    }
}

TEST_CASE("ensemble_mass examples") {
    auto w = win_0_to(1);
    OPSystem ops(uniform_weight(w), 1);
    EnsembleSpec one(ops, 1);
    for (const auto& omega : enumerate_configurations(w, 1))
        CHECK(ensemble_mass(one, omega) == doctest::Approx(0.5).epsilon(1e-14));

    OPSystem ops2(uniform_weight(w), 2);
    EnsembleSpec two(ops2, 2);
    CHECK(ensemble_mass(two, enumerate_configurations(w, 2)[0]) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(ensemble_mass(two, enumerate_configurations(w, 1)[0]),
                    std::invalid_argument);

    WeightFunction skew(w, {1.0, 3.0});
    OPSystem ops3(skew, 1);
    EnsembleSpec spec3(ops3, 1);
    auto singletons = enumerate_configurations(w, 1);
    CHECK(ensemble_mass(spec3, singletons[0]) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ensemble_mass(spec3, singletons[1]) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("characteristic polynomial averages, small closed forms") {
    auto w = win_0_to(1);
    OPSystem ops(uniform_weight(w), 1);
    std::vector<double> X{0.0}, Y{1.0};
    CHECK(sf_closed_form(ops, 1, X, Y) == doctest::Approx(1.0).epsilon(1e-13));

    // N = n: the average runs over the single empty configuration
    OPSystem ops2(uniform_weight(win_0_to(3)), 2);
    std::vector<double> X2{0.0, 2.0}, Y2{1.0, 3.0};
    double closed = sf_closed_form(ops2, 2, X2, Y2);
    CHECK(closed == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> Xbad{0.0, 0.0};
    CHECK_THROWS_AS(sf_closed_form(ops2, 2, Xbad, Y2), std::invalid_argument);
}

TEST_CASE("characteristic polynomial average matches enumeration") {
    // N=2, n=1, uniform weight on three sites: sum over singleton ensembles
    auto w = win_0_to(2);
    OPSystem ops(uniform_weight(w), 2);
    std::vector<double> X{0.0}, Y{2.0};
    double closed = sf_closed_form(ops, 2, X, Y);
    EnsembleSpec sub(ops, 1);
    double brute = 0.0;
    for (const auto& omega : enumerate_configurations(w, 1)) {
        double u = omega.sites()[0];
        brute += ensemble_mass(sub, omega) * (X[0] - u) * (Y[0] - u);
    }
    CHECK(closed == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("coincident arguments use the confluent limit") {
    std::mt19937_64 rng(23);
    auto w = win_0_to(5);
    OPSystem ops(WeightFunction(w, random_weights(6, rng)), 3);
    std::vector<double> X{2.0, 4.0}, Y{2.0, 5.0};  // x_1 == y_1
    double closed = sf_closed_form(ops, 3, X, Y);
    EnsembleSpec sub(ops, 1);
    double brute = 0.0;
    for (const auto& omega : enumerate_configurations(w, 1)) {
        double u = omega.sites()[0];
        double prod = 1.0;
        for (std::size_t i = 0; i < 2; ++i) prod *= (X[i] - u) * (Y[i] - u);
        brute += ensemble_mass(sub, omega) * prod;
    }
    CHECK(closed == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("degenerate weights are rejected") {
    auto w = win_0_to(3);
    CHECK_THROWS_AS(WeightFunction(w, {1.0, 0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction(w, {1.0, -0.5, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction(w, {1.0, 1.0}), std::invalid_argument);
}
