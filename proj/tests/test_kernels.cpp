#include <doctest.h>

#include <cmath>
#include <random>

#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

using namespace detquas;

TEST_CASE("sine kernel") {
    auto k = sine_kernel(M_PI / 2);
    CHECK(k->entry(7, 7) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k->entry(0, 1) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
    CHECK(std::abs(k->entry(0, 2)) <= 1e-15);
    CHECK_THROWS_AS(sine_kernel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(sine_kernel(M_PI), std::invalid_argument);
}

TEST_CASE("discrete hermite structure") {
    auto plus = discrete_hermite(HalfLineSide::Plus, 0.0);
    auto minus = discrete_hermite(HalfLineSide::Minus, 0.0);

    // r = 0: same-parity off-diagonal entries vanish identically
    CHECK(plus->entry(0, 2) == 0.0);
    CHECK(plus->entry(1, 5) == 0.0);
    CHECK(plus->entry(3, 3) == doctest::Approx(0.5).epsilon(1e-11));

    for (long x : {0L, 1L, 4L}) {
        CHECK(plus->entry(x, x) + minus->entry(x, x) == doctest::Approx(1.0).epsilon(1e-11));
    }
    // off-diagonal: the two halves are opposite
    auto plus7 = discrete_hermite(HalfLineSide::Plus, 0.7);
    auto minus7 = discrete_hermite(HalfLineSide::Minus, 0.7);
    CHECK(plus7->entry(2, 5) == doctest::Approx(-minus7->entry(2, 5)).epsilon(1e-13));

    CHECK_THROWS_AS(plus->entry(-1, 2), std::invalid_argument);
}

TEST_CASE("discrete hermite closed form vs quadrature spot checks") {
    for (double r : {0.0, 0.7}) {
        auto k = discrete_hermite(HalfLineSide::Plus, r);
        for (auto [x, y] : {std::pair<long, long>{0, 1}, {2, 5}, {10, 3}, {7, 7}}) {
            double quad = hermite_entry_quadrature(HalfLineSide::Plus, r, x, y, 1);
            CHECK(k->entry(x, y) == doctest::Approx(quad).epsilon(5e-10));
        }
    }
}

TEST_CASE("discrete jacobi structure and closed form") {
    auto k = discrete_jacobi_symmetric(0.0, HalfLineSide::Plus);
    CHECK(k->entry(4, 4) == 0.5);
    CHECK(k->entry(0, 2) == 0.0);  // vanishes at equal parity
    CHECK(k->entry(1, 0) ==
          doctest::Approx(jacobi_entry_quadrature(0.0, HalfLineSide::Plus, 1, 0, 1))
              .epsilon(1e-11));
    CHECK_THROWS_AS(discrete_jacobi_symmetric(-1.0, HalfLineSide::Plus), std::invalid_argument);

    for (double a : {-0.5, 2.5}) {
        auto kp = discrete_jacobi_symmetric(a, HalfLineSide::Plus);
        auto km = discrete_jacobi_symmetric(a, HalfLineSide::Minus);
        CHECK(kp->entry(3, 6) == doctest::Approx(-km->entry(3, 6)).epsilon(1e-13));
        CHECK(kp->entry(2, 7) ==
              doctest::Approx(jacobi_entry_quadrature(a, HalfLineSide::Plus, 2, 7)).epsilon(1e-9));
    }
}

TEST_CASE("discrete laguerre: partition and independent rules") {
    auto plus = discrete_laguerre(0.5, 1.0, HalfLineSide::Plus);
    auto minus = discrete_laguerre(0.5, 1.0, HalfLineSide::Minus);
    for (long x : {0L, 3L})
        CHECK(plus->entry(x, x) + minus->entry(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plus->entry(2, 5) + minus->entry(2, 5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plus->entry(2, 5) ==
          doctest::Approx(laguerre_entry_quadrature(0.5, 1.0, HalfLineSide::Plus, 2, 5, 1))
              .epsilon(1e-10));
    CHECK_THROWS_AS(discrete_laguerre(-1.5, 1.0, HalfLineSide::Plus), std::invalid_argument);
    CHECK_THROWS_AS(discrete_laguerre(0.5, 0.0, HalfLineSide::Plus), std::invalid_argument);
}

TEST_CASE("materialized kernels are symmetric contractions") {
    auto w_half = GroundWindow::integer_interval(AmbientModel::HalfLine, 0, 59);
    auto w_full = GroundWindow::integer_interval(AmbientModel::FullLine, -30, 29);

    std::vector<KernelFunctionPtr> kernels{
        discrete_hermite(HalfLineSide::Plus, 0.7),
        discrete_jacobi_symmetric(1.0, HalfLineSide::Minus),
        discrete_laguerre(0.0, 2.0, HalfLineSide::Plus),
    };
    for (const auto& kf : kernels) {
        KernelMatrix K = materialize(*kf, w_half);  // ctor enforces the spectrum gate
        CHECK((K.entries() - K.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    KernelMatrix S = materialize(*sine_kernel(1.0), w_full);
    CHECK((S.entries() - S.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(materialize(*sine_kernel(1.0), w_half), std::invalid_argument);
}

TEST_CASE("particle/hole transform") {
    auto w = GroundWindow::integer_interval(AmbientModel::HalfLine, 0, 4);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd G(5, 2);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(5, 2);
    KernelMatrix K(w, Q * Q.transpose());

    KernelMatrix Kc = particle_hole(K);
    for (int i = 0; i < 5; ++i)
        CHECK(Kc.entry(i, i) == doctest::Approx(1.0 - K.entry(i, i)).epsilon(1e-15));

    KernelMatrix Kcc = particle_hole(Kc);
    CHECK((Kcc.entries() - K.entries()).cwiseAbs().maxCoeff() <= 1e-15);

    // closed-form adapter: double application returns the base entries
    auto kf = particle_hole(particle_hole(discrete_jacobi_symmetric(0.5, HalfLineSide::Plus)));
    auto base = discrete_jacobi_symmetric(0.5, HalfLineSide::Plus);
    for (long x : {0L, 3L})
        for (long y : {1L, 6L})
            CHECK(kf->entry(x, y) == doctest::Approx(base->entry(x, y)).epsilon(1e-15));

    // symmetric Jacobi self-duality holds entrywise
    auto wj = GroundWindow::integer_interval(AmbientModel::HalfLine, 0, 15);
    KernelMatrix J = materialize(*base, wj);
    KernelMatrix Jc = particle_hole(J);
    CHECK((Jc.entries() - J.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("charlier shift and scaled kernel") {
    CHECK(charlier_shift(400, M_PI / 2) == 400);
    for (double phi : {0.4, 1.2, 2.8})
        for (std::size_t N = 2; N < 40; ++N)
            CHECK(charlier_shift(N + 1, phi) >= charlier_shift(N, phi));

    // N = 1 stays usable as long as the window respects the shift
    // (s_1 = floor(1 + 2cos(2.8)) = -1, so sites must be >= 1)
    auto w1 = GroundWindow::integer_interval(AmbientModel::FullLine, 1, 3);
    KernelMatrix k1 = charlier_scaled_kernel(1, 2.8, w1);
    CHECK(k1.size() == 3);

    auto wbad = GroundWindow::integer_interval(AmbientModel::FullLine, -100, -90);
    CHECK_THROWS_AS(charlier_scaled_kernel(4, M_PI / 2, wbad), std::invalid_argument);

    // agreement with the generic discrete-Stieltjes route
    std::size_t N = 6;
    long s = charlier_shift(N, M_PI / 2);
    auto win = GroundWindow::integer_interval(AmbientModel::FullLine, -s, -s + 10);
    KernelMatrix scaled = charlier_scaled_kernel(N, M_PI / 2, win);
    auto hwin = GroundWindow::integer_interval(AmbientModel::HalfLine, 0, 30);
    OPSystem ops(charlier_weight(hwin, 1.0), N);
    KernelMatrix cd = cd_kernel(ops, N);
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
            worst = std::max(worst, std::abs(scaled.entry(i, j) - cd.entry(i, j)));
    CHECK(worst <= 1e-12);

    // degree/argument duality keeps deep-forbidden evaluations stable
    auto wide = GroundWindow::integer_interval(AmbientModel::FullLine, -50, 100);
    KernelMatrix big = charlier_scaled_kernel(50, M_PI / 2, wide);
    CHECK(big.projection_defect() <= 1e-16 * 100);
    CHECK(big.trace() == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("kernel matrix gate rejects non-contractions") {
    auto w = GroundWindow::integer_interval(AmbientModel::Finite, 0, 1);
    Eigen::MatrixXd bad(2, 2);
    bad << 1.5, 0.0, 0.0, 0.2;
    CHECK_THROWS_AS(KernelMatrix(w, bad), std::invalid_argument);
    Eigen::MatrixXd asym(2, 2);
    asym << 0.5, 0.2, 0.3, 0.5;
    CHECK_THROWS_AS(KernelMatrix(w, asym), std::invalid_argument);
}
