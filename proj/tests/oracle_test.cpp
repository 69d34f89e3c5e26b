#include <gtest/gtest.h>

#include <numeric>

#include "rfcs/oracle.hpp"
#include "rfcs/routefirst.hpp"
#include "rfcs/split.hpp"
#include "test_support.hpp"

namespace rfcs {
namespace {

TEST(BruteForceSplit, SingleCustomer) {
    Instance inst = make_instance(1, 10, {});
    inst.coords[1] = {0.3, 0.4};
    inst.demand[1] = 2;
    EXPECT_DOUBLE_EQ(brute_force_split(inst, {1}), 1.0);
}

TEST(BruteForceSplit, LooseCapacityKeepsOneRoute) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto inst = generate_instance(9, {}, ScaleProfile::custom(81), s);
        const auto tour = random_tour(9, s);
        EXPECT_DOUBLE_EQ(brute_force_split(inst, tour), route_length(inst, tour));
    }
}

TEST(BruteForceSplit, AgreesWithSplitAtTen) {
    std::uint64_t seed = 77;
    for (const auto& f : testing::all_variants_with_mixed())
        for (int rep = 0; rep < 5; ++rep) {
            const auto inst = generate_instance(10, f, ScaleProfile::custom(20), ++seed);
            const auto tour = random_tour(10, seed);
            const double a = brute_force_split(inst, tour);
            const double b = split(inst, tour).total_cost;
            if (a == kInfinity || b == kInfinity) {
                EXPECT_EQ(a, b);
            } else {
                EXPECT_NEAR(a, b, 1e-9) << variant_name(f);
                EXPECT_NEAR(b, a, 1e-9);
            }
        }
}

TEST(BruteForceSplit, RefusesLargeTours) {
    const auto inst = generate_instance(21, {}, ScaleProfile::n50(), 1);
    EXPECT_THROW(brute_force_split(inst, random_tour(21, 1)), RefusalError);
}

TEST(BruteForceSolve, SingleCustomer) {
    Instance inst = make_instance(1, 10, {});
    inst.coords[1] = {0.6, 0.8};
    inst.demand[1] = 4;
    const auto r = brute_force_solve(inst);
    ASSERT_TRUE(r.feasible);
    EXPECT_DOUBLE_EQ(r.optimal_cost, 2.0);
    EXPECT_EQ(r.optimal_solution.routes, (std::vector<std::vector<int>>{{1}}));
    EXPECT_EQ(r.search_space_size, 1u);
}

TEST(BruteForceSolve, SymmetricPair) {
    Instance inst = make_instance(2, 10, {});
    inst.coords = {{0.5, 0.5}, {0.2, 0.5}, {0.8, 0.5}};
    inst.demand = {0, 3, 3};
    const auto r = brute_force_solve(inst);
    const double both_orders = route_length(inst, {1, 2});
    EXPECT_DOUBLE_EQ(route_length(inst, {2, 1}), both_orders);
    EXPECT_DOUBLE_EQ(r.optimal_cost, both_orders);
    EXPECT_EQ(r.search_space_size, 2u);
}

TEST(BruteForceSolve, LowerBoundsEverySplit) {
    VariantFlags f;
    f.time_window = true;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto inst = generate_instance(7, f, ScaleProfile::custom(15), s);
        const auto r = brute_force_solve(inst);
        ASSERT_TRUE(r.feasible);
        EXPECT_EQ(r.search_space_size, 5040u);
        const auto v = validate_solution(inst, r.optimal_solution);
        EXPECT_TRUE(v.feasible());
        EXPECT_NEAR(v.cost, r.optimal_cost, 1e-9);

        GiantTour tour(7);
        std::iota(tour.begin(), tour.end(), 1);
        double best_split = kInfinity;
        do {
            const double c = split(inst, tour).total_cost;
            EXPECT_LE(r.optimal_cost, c + 1e-12);
            best_split = std::min(best_split, c);
        } while (std::next_permutation(tour.begin(), tour.end()));
        EXPECT_NEAR(best_split, r.optimal_cost, 1e-9);
    }
}

TEST(BruteForceSolve, AllInfeasible) {
    VariantFlags f;
    f.time_window = true;
    Instance inst = make_instance(2, 10, f);
    inst.coords = {{0, 0}, {0.3, 0.4}, {0.6, 0.8}};
    inst.demand = {0, 1, 1};
    inst.tw_end[1] = 0.1;  // unreachable in time
    const auto r = brute_force_solve(inst);
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.optimal_cost, kInfinity);
}

TEST(BruteForceSolve, RefusesLargeInstances) {
    EXPECT_THROW(brute_force_solve(generate_instance(10, {}, ScaleProfile::n50(), 1)), RefusalError);
}

}  // namespace
}  // namespace rfcs
