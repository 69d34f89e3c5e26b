// Built with RFCS_MUTATE_TW_BRANCH, which drops the deadline check from the
// split's time-window branch. The oracle must notice: this test is registered
// with WILL_FAIL, so ctest passes only if the equivalence check below fails.

#include <gtest/gtest.h>

#include "rfcs/oracle.hpp"
#include "rfcs/routefirst.hpp"
#include "rfcs/split.hpp"
#include "test_support.hpp"

namespace rfcs {
namespace {

TEST(Mutation, CorruptedTimeWindowBranchBreaksEquivalence) {
    std::uint64_t seed = 0;
    for (const auto& f : testing::all_variants()) {
        if (!f.time_window) continue;
        for (int rep = 0; rep < 50; ++rep) {
            const auto inst = generate_instance(10, f, ScaleProfile::n50(), ++seed);
            const auto tour = random_tour(10, seed);
            const double a = split(inst, tour).total_cost;
            const double b = brute_force_split(inst, tour);
            if (a == kInfinity || b == kInfinity) {
                ASSERT_EQ(a, b);
            } else {
                ASSERT_NEAR(a, b, 1e-9);
            }
        }
    }
}

}  // namespace
}  // namespace rfcs
