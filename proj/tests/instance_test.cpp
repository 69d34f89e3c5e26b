#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rfcs/instance.hpp"
#include "rfcs/io.hpp"
#include "test_support.hpp"

namespace rfcs {
namespace {

TEST(VariantNames, RoundTripAllSixteen) {
    std::set<std::string> seen;
    for (const auto& f : testing::all_variants()) {
        const auto name = variant_name(f);
        seen.insert(name);
        const auto back = parse_variant(name);
        ASSERT_TRUE(back.has_value()) << name;
        EXPECT_EQ(*back, f) << name;
    }
    EXPECT_EQ(seen.size(), 16u);
    for (auto name : variant_names()) EXPECT_TRUE(seen.count(std::string(name))) << name;
}

TEST(VariantNames, RejectsUnknown) {
    EXPECT_FALSE(parse_variant("XYZ"));
    EXPECT_FALSE(parse_variant("VRP"));
    EXPECT_FALSE(parse_variant("VRPTWL"));
    EXPECT_FALSE(parse_variant("cvrp"));
    auto mixed = parse_variant("OVRPMBTW");
    ASSERT_TRUE(mixed);
    EXPECT_TRUE(mixed->open && mixed->backhaul && mixed->mixed_backhaul && mixed->time_window);
}

TEST(Generate, Cvrp50UsesCapacity40AndSmallDemands) {
    const auto inst = generate_instance(50, {}, ScaleProfile::n50(), 7);
    EXPECT_EQ(inst.capacity, 40);
    EXPECT_EQ(inst.demand[0], 0);
    for (int i = 1; i <= 50; ++i) {
        EXPECT_GE(inst.demand[i], 1);
        EXPECT_LE(inst.demand[i], 9);
    }
    EXPECT_EQ(generate_instance(100, {}, ScaleProfile::n100(), 7).capacity, 50);
}

TEST(Generate, BackhaulNegatesTwentyPercent) {
    VariantFlags f;
    f.backhaul = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = generate_instance(50, f, ScaleProfile::n50(), seed);
        int negative = 0;
        for (int i = 1; i <= 50; ++i) negative += inst.demand[i] < 0;
        EXPECT_EQ(negative, 10);
    }
    EXPECT_EQ([&] {
        const auto inst = generate_instance(7, f, ScaleProfile::n50(), 3);
        int negative = 0;
        for (int i = 1; i <= 7; ++i) negative += inst.demand[i] < 0;
        return negative;
    }(), 1);  // round(1.4)
}

TEST(Generate, SingleCustomerCustomCapacity) {
    const auto inst = generate_instance(1, {}, ScaleProfile::custom(9), 11);
    EXPECT_EQ(inst.n, 1);
    EXPECT_EQ(inst.capacity, 9);
    EXPECT_LE(std::abs(inst.demand[1]), 9);
}

TEST(Generate, EmptyInstanceIsAnError) {
    EXPECT_THROW(generate_instance(0, {}, ScaleProfile::n50(), 1), ContractError);
}

TEST(Generate, PlaceholdersWhenConstraintsInactive) {
    const auto inst = generate_instance(20, {}, ScaleProfile::n50(), 5);
    EXPECT_EQ(inst.limit, kInfinity);
    for (int i = 0; i <= 20; ++i) {
        EXPECT_EQ(inst.tw_start[i], 0.0);
        EXPECT_EQ(inst.tw_end[i], inst.horizon);
        EXPECT_EQ(inst.service[i], 0.0);
    }
    EXPECT_DOUBLE_EQ(inst.horizon, 4.6);
}

TEST(Generate, DeterministicBytes) {
    VariantFlags f;
    f.backhaul = f.time_window = f.dist_limit = true;
    const auto a = serialize_instance(generate_instance(30, f, ScaleProfile::n50(), 99));
    const auto b = serialize_instance(generate_instance(30, f, ScaleProfile::n50(), 99));
    const auto c = serialize_instance(generate_instance(30, f, ScaleProfile::n50(), 100));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Generate, DistributionSanity) {
    VariantFlags f;
    f.time_window = f.dist_limit = true;
    long long demand_sum = 0;
    int customers = 0;
    for (std::uint64_t seed = 0; customers < 10000; ++seed) {
        const auto inst = generate_instance(50, f, ScaleProfile::n50(), seed);
        const double dmax = max_depot_distance(inst);
        EXPECT_GE(inst.limit, 2 * dmax);
        EXPECT_LE(inst.limit, 3.0);
        for (int i = 1; i <= inst.n; ++i) {
            demand_sum += inst.demand[i];
            ++customers;
            const double len = inst.tw_end[i] - inst.tw_start[i];
            EXPECT_GE(len, 0.18 - 1e-12);
            EXPECT_LE(len, 0.2 + 1e-12);
            EXPECT_GE(inst.service[i], 0.15);
            EXPECT_LE(inst.service[i], 0.18);
            EXPECT_GE(inst.coords[i].x, 0.0);
            EXPECT_LT(inst.coords[i].x, 1.0);
            // Reachable directly from the depot and back within the horizon.
            EXPECT_GE(inst.tw_start[i], distance(inst, 0, i));
            EXPECT_LE(inst.tw_end[i] + inst.service[i] + distance(inst, i, 0), inst.horizon + 1e-9);
        }
    }
    // U{1..9}: mean 5, sd sqrt(80/12).
    const double mean = static_cast<double>(demand_sum) / customers;
    const double sigma = std::sqrt(80.0 / 12.0 / customers);
    EXPECT_NEAR(mean, 5.0, 3 * sigma);
}

TEST(Distance, ThreeFourFive) {
    Instance inst = make_instance(1, 10, {});
    inst.coords[1] = {0.3, 0.4};
    EXPECT_DOUBLE_EQ(distance(inst, 0, 1), 0.5);
    EXPECT_EQ(distance(inst, 1, 1), 0.0);
    EXPECT_THROW(distance(inst, 0, 2), std::out_of_range);
    EXPECT_THROW(distance(inst, -1, 0), std::out_of_range);
}

TEST(Distance, MatchesHighPrecisionAndIsSymmetric) {
    const auto inst = generate_instance(40, {}, ScaleProfile::n50(), 3);
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            EXPECT_NEAR(distance(inst, i, j), static_cast<double>(testing::precise_distance(inst, i, j)),
                        1e-15);
            EXPECT_EQ(distance(inst, i, j), distance(inst, j, i));
        }
}

Instance line_instance() {
    // Depot at the origin, customers on the x axis.
    Instance inst = make_instance(4, 10, {});
    inst.coords = {{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0}, {0.4, 0}};
    inst.demand = {0, 4, 4, 4, 4};
    return inst;
}

TEST(Validate, FeasibleTwoRoutes) {
    const auto inst = line_instance();
    const Solution sol{{{1, 2}, {3, 4}}, 0.0};
    const auto rep = validate_solution(inst, sol);
    EXPECT_TRUE(rep.feasible());
    EXPECT_NEAR(rep.cost, 0.4 + 0.8, 1e-12);
    EXPECT_EQ(rep.cost, route_length(inst, {1, 2}) + route_length(inst, {3, 4}));
}

TEST(Validate, CapacityOverByOne) {
    auto inst = line_instance();
    inst.demand = {0, 4, 4, 3, 4};
    const Solution sol{{{1, 2, 3}, {4}}, 0.0};  // load 11 = Q + 1
    const auto rep = validate_solution(inst, sol);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].kind, Violation::Kind::linehaul_capacity);
    EXPECT_EQ(rep.violations[0].route, 0);
}

TEST(Validate, CoverageAndEmptyRoutes) {
    const auto inst = line_instance();
    const auto rep = validate_solution(inst, {{{1, 2}, {}, {2, 4}}, 0.0});
    std::multiset<Violation::Kind> kinds;
    for (const auto& v : rep.violations) kinds.insert(v.kind);
    EXPECT_EQ(kinds.count(Violation::Kind::missing_customer), 1u);
    EXPECT_EQ(kinds.count(Violation::Kind::duplicate_customer), 1u);
    EXPECT_EQ(kinds.count(Violation::Kind::empty_route), 1u);
    EXPECT_EQ(rep.violations.size(), 3u);
}

TEST(Validate, NonexistentCustomerIsStructural) {
    const auto inst = line_instance();
    EXPECT_THROW(validate_solution(inst, {{{1, 2, 3, 4, 5}}, 0.0}), StructuralError);
    EXPECT_THROW(validate_solution(inst, {{{0, 1, 2, 3, 4}}, 0.0}), StructuralError);
}

TEST(Validate, BackhaulPrecedenceAndMixedLoad) {
    VariantFlags f;
    f.backhaul = true;
    Instance inst = make_instance(3, 10, f);
    inst.coords = {{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0}};
    inst.demand = {0, 6, -8, 3};
    // Pickup then delivery.
    auto rep = validate_solution(inst, {{{1, 2, 3}}, 0.0});
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].kind, Violation::Kind::precedence);
    EXPECT_TRUE(validate_solution(inst, {{{1, 3, 2}}, 0.0}).feasible());

    // Mixed: start with 9 on board, deliver 6 -> 3, pick 8 -> 11 > 10.
    inst.flags.mixed_backhaul = true;
    rep = validate_solution(inst, {{{1, 2, 3}}, 0.0});
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].kind, Violation::Kind::mixed_load);
    // 9 -> deliver 6 -> 3 -> deliver 3 -> 0 -> pick 8 -> 8: fine.
    EXPECT_TRUE(validate_solution(inst, {{{1, 3, 2}}, 0.0}).feasible());
    // Interleaving is allowed when the load fits: 9 -> 6 (deliver 3) ...
    inst.demand = {0, 6, -2, 3};
    EXPECT_TRUE(validate_solution(inst, {{{3, 2, 1}}, 0.0}).feasible());
}

TEST(Validate, TimeWindowModesAndLimitModes) {
    VariantFlags f;
    f.time_window = true;
    Instance inst = make_instance(1, 10, f);
    inst.coords[1] = {0.3, 0.4};
    inst.demand[1] = 1;
    inst.tw_start[1] = 0.0;
    inst.tw_end[1] = 0.6;
    inst.service[1] = 0.15;
    using S = ConstraintSemantics;
    // Literal: finish 0.15 <= 0.6. Travel: 0.5 + 0.15 = 0.65 > 0.6.
    EXPECT_TRUE(validate_solution(inst, {{{1}}, 0}, {S::TimeWindow::paper_literal}).feasible());
    EXPECT_FALSE(validate_solution(inst, {{{1}}, 0}, {S::TimeWindow::travel_time}).feasible());

    inst.flags = {};
    inst.flags.dist_limit = true;
    inst.limit = 0.7;  // path 0.5, closed route 1.0
    EXPECT_TRUE(validate_solution(inst, {{{1}}, 0}, {S::TimeWindow::travel_time, S::Limit::path_only})
                    .feasible());
    EXPECT_FALSE(
        validate_solution(inst, {{{1}}, 0}, {S::TimeWindow::travel_time, S::Limit::include_return})
            .feasible());
    inst.flags.open = true;  // no return arc to count
    EXPECT_TRUE(
        validate_solution(inst, {{{1}}, 0}, {S::TimeWindow::travel_time, S::Limit::include_return})
            .feasible());
}

TEST(Validate, PureFunction) {
    VariantFlags f;
    f.time_window = f.backhaul = true;
    const auto inst = generate_instance(12, f, ScaleProfile::n50(), 4);
    Solution sol;
    for (int c = 1; c <= 12; ++c) sol.routes.push_back({c});
    const auto a = validate_solution(inst, sol);
    const auto b = validate_solution(inst, sol);
    EXPECT_EQ(a.cost, b.cost);
    EXPECT_EQ(a.violations.size(), b.violations.size());
    EXPECT_TRUE(a.feasible());
}

TEST(Profile, ParseNames) {
    for (auto p : {ScaleProfile::n50(), ScaleProfile::n100(), ScaleProfile::custom(450)})
        EXPECT_EQ(parse_profile(p.name())->capacity(), p.capacity());
    for (const char* bad : {"", "n75", "custom()", "custom(0)", "custom(-3)", "custom(12", "custom(1x)"})
        EXPECT_FALSE(parse_profile(bad).has_value()) << bad;
}

}  // namespace
}  // namespace rfcs
