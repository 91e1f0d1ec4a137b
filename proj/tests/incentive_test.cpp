#include "support.hpp"

#include "esqoe/error.hpp"
#include "esqoe/incentive.hpp"

#include <doctest.h>

using namespace esqoe;
using esqoe::testing::reward_oracle;

TEST_SUITE("incentive") {

TEST_CASE("pref_rank looks up the slot") {
    ProviderTemporalPreferences ptp(1, {{2, 1}, {5, 2}});
    CHECK(incentive::pref_rank(ptp, 2) == 1u);
    CHECK(incentive::pref_rank(ptp, 5) == 2u);
    CHECK_FALSE(incentive::pref_rank(ptp, 7).has_value());
}

TEST_CASE("reward hand examples") {
    ProviderTemporalPreferences ptp(1, {{0, 1}, {1, 2}, {2, 3}});
    IncentiveModel im(2, 10);
    CHECK(incentive::reward(100, 2, ptp, im) == doctest::Approx(60).epsilon(1e-12));
    CHECK(incentive::reward(50, 1, ptp, im) == doctest::Approx(20).epsilon(1e-12));
    IncentiveModel unit(3.5, 7);
    CHECK(incentive::reward(7, 0, ptp, unit) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("reward errors") {
    ProviderTemporalPreferences ptp(1, {{2, 1}});
    CHECK_THROWS_AS(incentive::reward(10, 3, ptp, {}), Error);
    CHECK_THROWS_AS(incentive::reward(0, 2, ptp, {}), Error);
    CHECK_THROWS_AS(incentive::reward(-1, 2, ptp, {}), Error);
}

TEST_CASE("quote carries the looked-up rank") {
    ProviderTemporalPreferences ptp(4, {{3, 2}, {1, 1}});
    auto q = incentive::quote(77, 12.5, 3, ptp, IncentiveModel(2, 5));
    CHECK(q.service_id == 77);
    CHECK(q.slot == 3);
    CHECK(q.pref_rank == 2u);
    CHECK(q.credits == doctest::Approx(10.0));
}

TEST_CASE("random inputs: oracle, linearity, rank monotonicity, purity") {
    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const double amount = 0.5 + rng.uniform01() * 500;
        const double credit = 0.01 + rng.uniform01() * 10;
        const double rate = 0.01 + rng.uniform01() * 100;
        const auto m = static_cast<Rank>(rng.uniform_int(2, 8));
        std::vector<SlotRank> prefs;
        for (Rank k = 1; k <= m; ++k)
            prefs.push_back({k - 1, k});
        ProviderTemporalPreferences ptp(1, prefs);
        IncentiveModel im(credit, rate);
        const auto slot = static_cast<SlotIndex>(rng.uniform_int(0, m - 2));
        const auto rank = slot + 1;

        const double got = incentive::reward(amount, slot, ptp, im);
        CHECK(got == doctest::Approx(reward_oracle(amount, rate, credit, static_cast<unsigned>(rank))).epsilon(1e-9));
        CHECK(incentive::reward(2 * amount, slot, ptp, im) == doctest::Approx(2 * got).epsilon(1e-12));
        CHECK(incentive::reward(amount, slot + 1, ptp, im) > got);
        CHECK(incentive::reward(amount * 1.5, slot, ptp, im) > got);
        CHECK(incentive::reward(amount, slot, ptp, im) == got);
    }
}

}
