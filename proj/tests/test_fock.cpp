#include <doctest.h>

#include <cmath>
#include <random>

#include "detquas/fock.hpp"
#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

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

}  // namespace

TEST_CASE("creation and annihilation basics") {
    auto w = GroundWindow::integer_interval(AmbientModel::HalfLine, 1, 2);  // sites {1,2}
    FockVector vac = FockVector::basis_vector(w, 0);

    FockVector e1 = apply_creation(1.0, vac);
    CHECK(e1.coeff(0b01) == 1.0);

    // a^+_1 e_{2} = -e_{1,2}: the site 2 above 1 contributes one inversion
    FockVector e2 = apply_creation(2.0, vac);
    FockVector e12 = apply_creation(1.0, e2);
    CHECK(e12.coeff(0b11) == -1.0);

    CHECK(apply_annihilation(1.0, vac).coeffs().empty());
    CHECK(apply_creation(1.0, e1).coeffs().empty());  // a^+ a^+ = 0
}

TEST_CASE("monomial action matches ladder composition") {
    auto w = win_0_to(3);
    std::vector<double> X{3.0, 0.0}, Y{1.0, 2.0};
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        FockVector v = FockVector::basis_vector(w, mask);
        FockVector lhs = apply_monomial(X, Y, v);
        FockVector rhs = v;
        for (std::size_t i = Y.size(); i-- > 0;) rhs = apply_annihilation(Y[i], rhs);
        for (std::size_t i = 0; i < X.size(); ++i) rhs = apply_creation(X[i], rhs);
        rhs *= -1.0;
        lhs += rhs;
        CHECK(lhs.max_abs() == 0.0);
    }

    // number operator and the annihilating case
    std::vector<double> Xn{2.0};
    FockVector occupied = FockVector::basis_vector(w, 0b0100);
    CHECK(apply_monomial(Xn, Xn, occupied).coeff(0b0100) == 1.0);
    FockVector empty_site = FockVector::basis_vector(w, 0b0001);
    CHECK(apply_monomial(Xn, Xn, empty_site).coeffs().empty());
}

TEST_CASE("quasifree state values") {
    auto w = win_0_to(2);
    Eigen::MatrixXd m(3, 3);
    m << 0.5, 0.2, 0.1, 0.2, 0.4, 0.0, 0.1, 0.0, 0.3;
    KernelMatrix K(w, m);
    std::vector<double> X{1.0}, Y{2.0};
    CHECK(quasifree_state(K, X, Y) == doctest::Approx(K.entry_at(2.0, 1.0)));
    CHECK(quasifree_state(K, {}, {}) == 1.0);
    std::vector<double> X2{0.0, 0.0}, Y2{1.0, 2.0};
    CHECK(quasifree_state(K, X2, Y2) == doctest::Approx(0.0));
}

TEST_CASE("tau state on the one-particle uniform ensemble") {
    auto w = win_0_to(1);
    OPSystem ops(uniform_weight(w), 1);
    EnsembleSpec spec(ops, 1);
    FullMeasure mu = ensemble_measure(spec);
    std::vector<double> X{0.0}, Y{1.0};
    CHECK(tau_state(mu, X, Y) == doctest::Approx(0.5).epsilon(1e-14));
    KernelMatrix K = cd_kernel(ops, 1);
    CHECK(K.entry_at(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));

    // X = Y reduces to the occupation expectation
    std::vector<double> X0{0.0};
    CHECK(tau_state(mu, X0, X0) == doctest::Approx(0.5).epsilon(1e-14));

    FullMeasure bad{w, {0.3, 0.3, 0.3, 0.3}};
    CHECK_THROWS_AS(tau_state(bad, X, Y), std::invalid_argument);
}

TEST_CASE("hyperoctahedral images") {
    auto w = win_0_to(3);
    GicarOperator eps = p_epsilon(1.0, w);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        FockVector image = eps.apply(FockVector::basis_vector(w, mask));
        double expect = ((mask >> 1) & 1u) ? -1.0 : 1.0;
        CHECK(image.coeff(mask) == expect);
    }

    GicarOperator s = p_transposition(0.0, 2.0, w);
    GicarOperator id = identity_op(w);
    CHECK((s * s - id).max_abs() <= 1e-14);

    // fixed basis vectors when both sites are occupied
    FockVector both = FockVector::basis_vector(w, 0b0101);
    FockVector moved = s.apply(both);
    CHECK(moved.coeff(0b0101) == doctest::Approx(1.0));

    CHECK_THROWS_AS(p_transposition(1.0, 1.0, w), std::invalid_argument);
}

TEST_CASE("ideal generators vanish") {
    auto w = win_0_to(3);
    for (auto variant : {IdealVariant::Minus, IdealVariant::Plus}) {
        GicarOperator g = ideal_generator_image(0.0, 3.0, w, variant);
        CHECK(g.max_abs() <= 1e-14);
    }
}

TEST_CASE("pfaffian") {
    Eigen::MatrixXd a2(2, 2);
    a2 << 0, 1.7, -1.7, 0;
    CHECK(pfaffian(a2) == doctest::Approx(1.7));

    CHECK(pfaffian(Eigen::MatrixXd::Zero(4, 4)) == 0.0);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) g(i, j) = gauss(rng);
    Eigen::MatrixXd skew = 0.5 * (g - g.transpose());
    double pf = pfaffian(skew);
    CHECK(pf * pf == doctest::Approx(skew.determinant()).epsilon(1e-10));

    CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
    Eigen::MatrixXd notskew(2, 2);
    notskew << 0, 1, 1, 0;
    CHECK_THROWS_AS(pfaffian(notskew), std::invalid_argument);
}

TEST_CASE("quasifree values agree with the pfaffian functional") {
    std::mt19937_64 rng(17);
    for (std::size_t m : {3u, 5u}) {
        auto w = win_0_to(static_cast<long>(m) - 1);
        KernelMatrix K = random_projection(w, m / 2 + 1, rng);
        for (std::size_t n : {1u, 2u}) {
            std::vector<std::size_t> xi(n), yi(n);
            // sweep a few site tuples
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) {
                    if (n == 1) {
                        std::vector<double> X{w->site(a)}, Y{w->site(b)};
                        CHECK(quasifree_state(K, X, Y) ==
                              doctest::Approx(quasifree_state_pfaffian(K, X, Y)).epsilon(1e-12));
                    } else {
                        std::vector<double> X{w->site(a), w->site((a + 1) % m)};
                        std::vector<double> Y{w->site(b), w->site((b + 2) % m)};
                        if (X[0] == X[1] || Y[0] == Y[1]) continue;
                        CHECK(quasifree_state(K, X, Y) ==
                              doctest::Approx(quasifree_state_pfaffian(K, X, Y))
                                  .epsilon(1e-12));
                    }
                }
        }
    }
}

TEST_CASE("hole-reversed ensemble matches the particle/hole kernel") {
    auto w = GroundWindow::integer_interval(AmbientModel::Finite, 0, 4);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> dist(0.2, 2.0);
    std::vector<double> weights(5);
    for (auto& v : weights) v = dist(rng);
    OPSystem ops(WeightFunction(w, weights), 2);
    EnsembleSpec spec(ops, 2);
    FullMeasure mu = ensemble_measure(spec);
    KernelMatrix K = cd_kernel(ops, 2);

    FullMeasure reversed{w, std::vector<double>(mu.mass.size())};
    std::uint64_t all = mu.mass.size() - 1;
    for (std::uint64_t mask = 0; mask < mu.mass.size(); ++mask)
        reversed.mass[mask] = mu.mass[all & ~mask];
    KernelMatrix Kc = particle_hole(K);

    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            std::vector<double> X{w->site(a)}, Y{w->site(b)};
            CHECK(tau_state(reversed, X, Y) ==
                  doctest::Approx(quasifree_state(Kc, X, Y)).epsilon(1e-11));
        }
    std::vector<double> X2{0.0, 3.0}, Y2{1.0, 4.0};
    CHECK(tau_state(reversed, X2, Y2) ==
          doctest::Approx(quasifree_state(Kc, X2, Y2)).epsilon(1e-11));
}
