#include "doctest.h"

#include <stdexcept>

#include "ctrlpower/power_index.hpp"
#include "support.hpp"

using namespace ctrlpower;

namespace {

const std::vector<double> kTwoOneOne = {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};

void check_profile(const PowerProfile& p, const std::vector<double>& expected, double tol = 1e-12) {
    REQUIRE(p.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(p.spi[i] == doctest::Approx(expected[i]).epsilon(tol));
}

} // namespace

TEST_CASE("make_game builds a strict-majority game") {
    const auto g = make_game({0.30, 0.10, 0.05});
    CHECK(g.size() == 3);
    CHECK(g.total() == doctest::Approx(0.45));
    CHECK(g.threshold() == doctest::Approx(0.225));

    const auto single = make_game({0.51});
    CHECK(single.is_winning(0b1));
    check_profile(spi_subset(single), {1.0});

    SUBCASE("table row 2021 with top2-10 split equally") {
        std::vector<double> shares{0.278};
        for (int i = 0; i < 9; ++i) shares.push_back(0.293 / 9.0);
        const auto g10 = make_game(shares);
        CHECK(g10.size() == 10);
        CHECK(g10.total() == doctest::Approx(0.571));
    }
}

TEST_CASE("make_game rejects bad share lists") {
    CHECK_THROWS_AS(make_game({}), std::invalid_argument);
    CHECK_THROWS_AS(make_game({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_game({0.3, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(make_game(std::vector<double>(21, 0.01)), std::invalid_argument);
    CHECK_NOTHROW(make_game(std::vector<double>(20, 0.01)));
}

TEST_CASE("is_winning uses a strict majority") {
    const auto g = make_game({2, 1, 1});
    const std::size_t c0[] = {0};
    const std::size_t c01[] = {0, 1};
    CHECK_FALSE(is_winning(g, c0));
    CHECK(is_winning(g, c01));

    const auto sym = make_game({1, 1, 1});
    const std::size_t c2[] = {2};
    CHECK(is_winning(sym, c01));
    CHECK_FALSE(is_winning(sym, c2));

    const std::size_t bad[] = {3};
    CHECK_THROWS_AS(is_winning(g, bad), std::out_of_range);
    CHECK_THROWS_AS(g.is_winning(0b1000), std::out_of_range);
}

TEST_CASE("grand coalition wins and complements never both win") {
    support::Engine eng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const auto w = support::random_int_weights(eng, 1 + rep % 8, 6);
        const WeightedVotingGame g(support::as_double(w));
        const std::uint32_t full = (1u << g.size()) - 1;
        CHECK(g.is_winning(full));
        for (std::uint32_t m = 0; m <= full; ++m) CHECK_FALSE((g.is_winning(m) && g.is_winning(full & ~m)));
    }
}

TEST_CASE("permutation oracle examples") {
    check_profile(spi_permutation_oracle(make_game({1, 1, 1})), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    check_profile(spi_permutation_oracle(make_game({60, 40})), {1.0, 0.0});
    const auto p = spi_permutation_oracle(make_game({2, 1, 1}));
    check_profile(p, kTwoOneOne);
    CHECK(p.orderings == 6);
    CHECK(p.pivots == std::vector<std::uint64_t>{4, 1, 1});
    CHECK_THROWS_AS(spi_permutation_oracle(make_game(std::vector<double>(10, 1.0))), std::invalid_argument);
}

TEST_CASE("subset route examples") {
    check_profile(spi_subset(make_game({2, 1, 1})), kTwoOneOne);
    check_profile(spi_subset(make_game({1})), {1.0});
    const auto g = make_game({3, 2, 1, 1});
    check_profile(spi_subset(g), spi_permutation_oracle(g).spi);
    check_profile(spi_subset(g), support::brute_force_spi({3, 2, 1, 1}));
}

TEST_CASE("dp route examples") {
    check_profile(spi_dp(make_game({0.5, 0.5})), {0.5, 0.5});
    check_profile(spi_dp(make_game({2, 1, 1})), kTwoOneOne);

    std::vector<double> shares{0.278};
    for (int i = 0; i < 9; ++i) shares.push_back(0.293 / 9.0);
    const auto g = make_game(shares);
    const auto dp = spi_dp(g);
    const auto subset = spi_subset(g);
    CHECK(support::max_abs_diff(dp.spi, subset.spi) <= 1e-12);
    CHECK(spi_dp_player(g, 0) == doctest::Approx(dp.spi[0]).epsilon(1e-12));

    CHECK_THROWS_AS(spi_dp(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(spi_dp(make_game({1e12, 1.0})), std::overflow_error);
    CHECK_THROWS_AS(spi_dp_player(g, 10), std::out_of_range);
}

TEST_CASE("integerize rounds half to even on the grid") {
    const double w[] = {0.125, 0.375, 0.625, 1.0, 0.0};
    CHECK(integerize(w, 4) == std::vector<std::int64_t>{0, 2, 2, 4, 0});
    const double shares[] = {0.278, 0.0325};
    CHECK(integerize(shares, kDefaultGrid) == std::vector<std::int64_t>{278000, 32500});
    CHECK_THROWS_AS(integerize(w, 0), std::invalid_argument);
}

TEST_CASE("extend_with_residual appends a clipped player") {
    const auto base = make_game({0.30, 0.10, 0.05});
    const auto neg = extend_with_residual(base, -0.02);
    CHECK(neg.size() == 4);
    CHECK(neg.weight(3) == 0.0);
    CHECK(neg.total() == doctest::Approx(base.total()));

    const auto zero = spi_subset(extend_with_residual(base, 0.0));
    CHECK(zero.spi[3] == 0.0);
    const auto before = spi_subset(base);
    for (std::size_t i = 0; i < 3; ++i) CHECK(zero.spi[i] == doctest::Approx(before.spi[i]).epsilon(1e-12));

    const auto pos = extend_with_residual(base, 0.10);
    CHECK(pos.size() == 4);
    CHECK(pos.total() == doctest::Approx(0.55));
}

TEST_CASE("three routes agree with an integer brute force, ties included") {
    support::Engine eng(2024);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rep % 8);
        const auto w = support::random_int_weights(eng, n, 9);
        const auto g = make_game(support::as_double(w));
        const auto expect = support::brute_force_spi(w);
        CHECK(support::max_abs_diff(spi_permutation_oracle(g).spi, expect) <= 1e-12);
        CHECK(support::max_abs_diff(spi_subset(g).spi, expect) <= 1e-12);
        CHECK(support::max_abs_diff(spi_dp(g).spi, expect) <= 1e-12);
        CHECK(spi_permutation_oracle(g).pivots == support::brute_force_pivots(w));
    }
}

TEST_CASE("top-1 dictatorship holds exactly when it outweighs the rest") {
    support::Engine eng(5);
    int dictators = 0;
    for (int rep = 0; rep < 400; ++rep) {
        auto w = support::random_int_weights(eng, 2 + static_cast<std::size_t>(rep % 9), 40);
        std::sort(w.begin(), w.end(), std::greater<>());
        if (rep % 3 == 0) w[0] *= 4;
        const std::int64_t rest = std::accumulate(w.begin() + 1, w.end(), std::int64_t{0});
        const bool dictator = w[0] > rest;
        dictators += dictator;
        const auto p = spi_dp(make_game(support::as_double(w)));
        CHECK((p.spi[0] == 1.0) == dictator);
    }
    CHECK(dictators > 20);
}

TEST_CASE("pivot totals equal the number of orderings") {
    support::Engine eng(8);
    for (int rep = 0; rep < 50; ++rep) {
        const auto w = support::random_int_weights(eng, 1 + static_cast<std::size_t>(rep % 20), 1000);
        for (const auto& p : {spi_subset(make_game(support::as_double(w))), spi_dp(make_game(support::as_double(w)))}) {
            const auto sum = std::accumulate(p.pivots.begin(), p.pivots.end(), std::uint64_t{0});
            CHECK(sum == p.orderings);
        }
    }
}
