#include <doctest.h>

#include "detquas/ground.hpp"

using namespace detquas;

namespace {

WindowPtr win_0_to(long hi) {
    return GroundWindow::integer_interval(AmbientModel::HalfLine, 0, hi);
}

Configuration config_of(const WindowPtr& w, std::initializer_list<double> sites) {
    std::vector<double> s(sites);
    return make_configuration(w, s);
}

}  // namespace

TEST_CASE("window construction and enumeration invariants") {
    auto w = GroundWindow::integer_interval(AmbientModel::HalfLine, 2, 5);
    CHECK(w->size() == 4);
    CHECK(w->site(0) == 2.0);
    CHECK(w->nu(0) == 2);  // half-line enumeration is anchored at the origin
    CHECK(w->nu(3) == 5);

    auto f = GroundWindow::integer_interval(AmbientModel::Finite, 3, 6);
    CHECK(f->nu(0) == 0);

    auto z = GroundWindow::integer_interval(AmbientModel::FullLine, -2, 2);
    CHECK(z->nu(0) == -2);
    CHECK(z->nu(2) == 0);  // anchor nu(0) = 0

    CHECK_THROWS_AS(GroundWindow::integer_interval(AmbientModel::HalfLine, -1, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(GroundWindow(AmbientModel::Finite, {1.0, 1.0, 2.0}, 0),
                    std::invalid_argument);

    CHECK(w->index_of(3.0) == 1);
    CHECK(!w->index_of(2.5).has_value());
    CHECK_THROWS_AS(w->require_index(7.0), std::invalid_argument);
}

TEST_CASE("sgn_pair") {
    CHECK(sgn_pair(3, 1) == 1);
    CHECK(sgn_pair(1, 3) == -1);
    CHECK(sgn_pair(0, -2) == 1);
    CHECK_THROWS_AS(sgn_pair(2, 2), std::invalid_argument);

    for (double x : {-2.0, 0.0, 1.0, 5.5})
        for (double y : {-3.0, 0.5, 2.0})
            CHECK(sgn_pair(x, y) * sgn_pair(y, x) == -1);
}

TEST_CASE("fermionic_sign examples") {
    auto w = win_0_to(5);
    std::vector<double> X{5}, Y{1};
    CHECK(fermionic_sign(X, Y, config_of(w, {1, 3})) == -1);
    CHECK(fermionic_sign(X, Y, config_of(w, {2})) == 0);

    std::vector<double> X2{4}, Y2{2};
    CHECK(fermionic_sign(X2, Y2, config_of(w, {2})) == 1);  // both products empty

    std::vector<double> Xr{3, 3}, Yr{1, 2};
    CHECK_THROWS_AS(fermionic_sign(Xr, Yr, config_of(w, {1, 2})), std::invalid_argument);
}

TEST_CASE("fermionic_sign antisymmetry and zero pattern") {
    auto w = win_0_to(5);
    auto all_masks = [&](std::size_t m) {
        std::vector<Configuration> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
            out.push_back(Configuration{w, mask});
        return out;
    };
    for (std::size_t n : {2u, 3u}) {
        std::vector<std::vector<double>> tuples;
        if (n == 2)
            tuples = {{0, 1}, {2, 5}, {4, 1}, {3, 0}};
        else
            tuples = {{0, 1, 2}, {5, 2, 4}, {1, 4, 0}};
        for (const auto& X : tuples)
            for (const auto& Y : tuples)
                for (const auto& omega : all_masks(6)) {
                    int base = fermionic_sign(X, Y, omega);

                    // zero exactly on the excluded cases
                    bool contains_y = true;
                    for (double y : Y)
                        if (!omega.contains_site(y)) contains_y = false;
                    bool collision = false;
                    for (double x : X) {
                        bool x_in_y = false;
                        for (double y : Y)
                            if (x == y) x_in_y = true;
                        if (!x_in_y && omega.contains_site(x)) collision = true;
                    }
                    CHECK((base == 0) == (!contains_y || collision));

                    // adjacent transpositions flip the sign
                    for (std::size_t k = 0; k + 1 < n; ++k) {
                        auto Xs = X;
                        std::swap(Xs[k], Xs[k + 1]);
                        CHECK(fermionic_sign(Xs, Y, omega) == -base);
                        auto Ys = Y;
                        std::swap(Ys[k], Ys[k + 1]);
                        CHECK(fermionic_sign(X, Ys, omega) == -base);
                    }
                }
    }
}

TEST_CASE("cylinder_contains") {
    auto w = win_0_to(4);
    CHECK(cylinder_contains(config_of(w, {1, 3}), CylinderSpec{{1}, {2}}));
    CHECK(!cylinder_contains(config_of(w, {1, 3}), CylinderSpec{{2}, {}}));
    CHECK(cylinder_contains(config_of(w, {}), CylinderSpec{{}, {}}));
    CHECK_THROWS_AS(cylinder_contains(config_of(w, {1}), CylinderSpec{{1}, {1}}),
                    std::invalid_argument);
}

TEST_CASE("enumerate_configurations") {
    auto w3 = win_0_to(2);
    auto pairs = enumerate_configurations(w3, 2);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].mask == 0b011);
    CHECK(pairs[1].mask == 0b101);
    CHECK(pairs[2].mask == 0b110);

    CHECK(enumerate_configurations(w3, 0).size() == 1);
    CHECK(enumerate_configurations(w3, 0)[0].mask == 0);

    auto w5 = win_0_to(4);
    CHECK(enumerate_configurations(w5, 3).size() == 10);
    CHECK_THROWS_AS(enumerate_configurations(w3, 4), std::invalid_argument);
}
