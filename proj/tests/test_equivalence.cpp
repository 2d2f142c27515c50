#include <doctest.h>

#include <cmath>
#include <random>

#include "detquas/equivalence.hpp"

using namespace detquas;

namespace {

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

TEST_CASE("partial sums: basics and symmetry") {
    auto s1 = sine_kernel(1.0);
    auto s2 = sine_kernel(2.0);
    std::vector<long> cuts{0, 1, 4};

    HSSummary same = hs_partial_sums(*s1, *s1, cuts);
    for (double v : same.partial_sums) CHECK(v == 0.0);

    HSSummary ab = hs_partial_sums(*s1, *s2, cuts);
    HSSummary ba = hs_partial_sums(*s2, *s1, cuts);
    for (std::size_t i = 0; i < cuts.size(); ++i)
        CHECK(ab.partial_sums[i] == ba.partial_sums[i]);

    // direct box-sum oracle on Z
    for (std::size_t ci = 0; ci < cuts.size(); ++ci) {
        long M = cuts[ci];
        double direct = 0.0;
        for (long x = -M; x <= M; ++x)
            for (long y = -M; y <= M; ++y) {
                double d = s1->entry(x, y) - s2->entry(x, y);
                direct += d * d;
            }
        CHECK(ab.partial_sums[ci] == doctest::Approx(direct).epsilon(1e-14));
    }

    auto j = discrete_jacobi_symmetric(0.0, HalfLineSide::Plus);
    CHECK_THROWS_AS(hs_partial_sums(*s1, *j, cuts), std::invalid_argument);
}

TEST_CASE("half-line boxes and the jacobi parity structure") {
    auto j0 = discrete_jacobi_symmetric(0.0, HalfLineSide::Plus);
    auto j1 = discrete_jacobi_symmetric(1.0, HalfLineSide::Plus);
    std::vector<long> cuts{8};
    HSSummary s = hs_partial_sums(*j0, *j1, cuts);
    double direct = 0.0;
    for (long x = 0; x <= 8; ++x)
        for (long y = 0; y <= 8; ++y) {
            double d = j0->entry(x, y) - j1->entry(x, y);
            direct += d * d;
            // same parity: both entries vanish or coincide exactly
            if (((x + y) % 2) == 0) CHECK(d == 0.0);
        }
    CHECK(s.partial_sums[0] == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("index estimate") {
    auto w = GroundWindow::integer_interval(AmbientModel::Finite, 0, 3);
    std::mt19937_64 rng(15);
    KernelMatrix K = random_projection(w, 2, rng);
    CHECK(index_estimate(K, K) == 0);

    // orthogonal ranges: span{e0,e1} vs span{e2}
    Eigen::MatrixXd P1 = Eigen::MatrixXd::Zero(4, 4);
    P1(0, 0) = P1(1, 1) = 1.0;
    Eigen::MatrixXd P2 = Eigen::MatrixXd::Zero(4, 4);
    P2(2, 2) = 1.0;
    CHECK(index_estimate(KernelMatrix(w, P1), KernelMatrix(w, P2)) == 1);
    CHECK(index_estimate(KernelMatrix(w, P2), KernelMatrix(w, P1)) == -1);

    // nearby projections have index 0
    KernelMatrix A = random_projection(w, 2, rng);
    Eigen::MatrixXd V = A.range_basis();
    Eigen::MatrixXd G = V + 0.05 * Eigen::MatrixXd::Random(4, 2);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(4, 2);
    KernelMatrix B(w, Q * Q.transpose());
    CHECK((A.entries() - B.entries()).cwiseAbs().maxCoeff() < 1.0);
    CHECK(index_estimate(A, B) == 0);

    Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(index_estimate(KernelMatrix(w, half), K), std::invalid_argument);

    // invariance under simultaneous permutation conjugation
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
    perm.setIdentity();
    std::swap(perm.indices()(0), perm.indices()(3));
    KernelMatrix Ap(w, perm.transpose() * A.entries() * perm);
    KernelMatrix Bp(w, perm.transpose() * B.entries() * perm);
    CHECK(index_estimate(Ap, Bp) == index_estimate(A, B));

    auto angles = principal_angle_cosines(A, B);
    CHECK(angles.size() == 2);
    for (double c : angles) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("verdicts") {
    auto j0 = discrete_jacobi_symmetric(0.0, HalfLineSide::Plus);
    std::vector<long> cuts{64, 128, 256};

    VerdictPolicy policy;
    policy.norm_window = 256;
    EquivalenceVerdict same = verdict(*j0, *j0, cuts, policy);
    CHECK(same.verdict == VerdictKind::Equivalent);
    CHECK(same.cauchy_gap == 0.0);
    CHECK(same.norm_gap == 0.0);
    CHECK(same.index.has_value());
    CHECK(*same.index == 0);

    auto j1 = discrete_jacobi_symmetric(1.0, HalfLineSide::Plus);
    EquivalenceVerdict near = verdict(*j0, *j1, std::vector<long>{256, 512, 1024}, policy);
    CHECK(near.verdict == VerdictKind::Equivalent);
    CHECK(near.norm_gap < 1.0);

    CHECK_THROWS_AS(verdict(*j0, *j1, std::vector<long>{64}, policy), std::invalid_argument);
}

TEST_CASE("jacobi uniformity table") {
    std::vector<double> grid{0.0, 0.01, 1.0, 2.5};
    JacobiUniformityTable table = jacobi_hs_uniformity(grid, 128);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(table.S(i, i) == 0.0);
    CHECK(table.S(0, 2) == table.S(2, 0));

    // grid continuity: a 0.01 step moves the partial sum by O(step)
    double step_change = std::abs(table.S(0, 2) - table.S(1, 2));
    CHECK(step_change <= 5.0 * 0.01);

    // asymptote ratio approaches 1 inside O(1/n)+O(1/m) envelopes
    for (long n : {20L, 60L, 200L})
        for (long m : {20L, 60L, 200L}) {
            double ratio = jacobi_asymptotic_ratio(0.0, n, m);
            double envelope = 2.0 * (1.0 / (n + 1.0) + 1.0 / (m + 1.0));
            CHECK(std::abs(ratio - 1.0) <= envelope);
        }
    CHECK(std::abs(jacobi_asymptotic_ratio(0.0, 100, 100) - 1.0) <= 0.05);

    std::vector<double> bad{-1.5};
    CHECK_THROWS_AS(jacobi_hs_uniformity(bad, 64), std::invalid_argument);
}
