#include <gtest/gtest.h>

#include "rfcs/bench.hpp"
#include "test_support.hpp"

namespace rfcs {
namespace {

BenchConfig small_config() {
    BenchConfig cfg;
    cfg.variants = {VariantFlags{}};
    cfg.methods = {*parse_method("nn"), *parse_method("nn+ls-split")};
    cfg.n = 15;
    cfg.count = 10;
    cfg.seed = 3;
    cfg.options.budget = 2000;
    return cfg;
}

TEST(Methods, ParseNames) {
    for (const char* s : {"nn", "nn+ls-split", "nn+ls-tsp", "oracle"}) {
        const auto m = parse_method(s);
        ASSERT_TRUE(m.has_value()) << s;
        EXPECT_EQ(m->name(), s);
    }
    const auto p = parse_method("policy:w.json");
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->kind, Method::Kind::policy);
    EXPECT_EQ(p->param_file, "w.json");
    EXPECT_FALSE(parse_method("policy:").has_value());
    EXPECT_FALSE(parse_method("ls").has_value());
}

TEST(Bench, TwoMethodsTenInstances) {
    const auto rep = run_bench(small_config());
    ASSERT_TRUE(rep.ok) << rep.failure;
    EXPECT_EQ(rep.rows.size(), 20u);
    ASSERT_EQ(rep.aggregates.size(), 2u);
    EXPECT_EQ(rep.aggregates[0].method, "nn");
    EXPECT_EQ(rep.aggregates[0].mean_gap_pct, 0.0);
    EXPECT_EQ(rep.aggregates[0].count, 10);
    EXPECT_LE(rep.aggregates[1].mean_cost, rep.aggregates[0].mean_cost);
    double mean = 0.0;
    for (const auto& r : rep.rows) {
        EXPECT_TRUE(r.valid);
        if (r.method == "nn") mean += r.cost / 10;
    }
    EXPECT_NEAR(rep.aggregates[0].mean_cost, mean, 1e-12);
}

TEST(Bench, SelfGapIsZero) {
    auto cfg = small_config();
    cfg.reference = "nn+ls-split";
    const auto rep = run_bench(cfg);
    ASSERT_TRUE(rep.ok);
    EXPECT_EQ(rep.aggregates[1].mean_gap_pct, 0.0);
    EXPECT_GE(rep.aggregates[0].mean_gap_pct, 0.0);
    cfg.reference = "oracle";
    EXPECT_THROW(run_bench(cfg), ContractError);
}

TEST(Bench, DeterministicAcrossJobCounts) {
    auto cfg = small_config();
    cfg.variants = {VariantFlags{}, *parse_variant("VRPBTW"), *parse_variant("OVRPL")};
    const auto a = report_csv(run_bench(cfg), false);
    cfg.jobs = 3;
    const auto b = report_csv(run_bench(cfg), false);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind(std::string(kReportHeader), 0), 0u);
}

TEST(Bench, InvalidRowsAreNotAggregated) {
    RunReport rep;
    rep.rows = {{0, "CVRP", "nn", 1.0, true, true, 0.0, {}},
                {1, "CVRP", "nn", 2.0, true, false, 0.0, {}}};
    aggregate(rep, {"CVRP"}, {"nn"}, "nn");
    EXPECT_FALSE(rep.ok);
    EXPECT_TRUE(rep.aggregates.empty());
    EXPECT_NE(rep.failure.find("validation"), std::string::npos);

    RunReport inf;
    inf.rows = {{0, "CVRP", "nn", kInfinity, false, false, 0.0, {}}};
    aggregate(inf, {"CVRP"}, {"nn"}, "nn");
    EXPECT_FALSE(inf.ok);
}

TEST(Bench, OracleRefusalFailsTheRun) {
    auto cfg = small_config();
    cfg.methods = {*parse_method("oracle")};
    cfg.count = 1;
    const auto rep = run_bench(cfg);
    EXPECT_FALSE(rep.ok);
    EXPECT_TRUE(rep.aggregates.empty());
}

TEST(Solve, EveryMethodValidatesOnSmallInstances) {
    std::uint64_t seed = 0;
    PolicyParams trained;
    trained.weights[1] = -5.0;
    for (const auto& f : testing::all_variants_with_mixed()) {
        const auto inst = generate_instance(8, f, ScaleProfile::n50(), ++seed);
        const double opt = brute_force_solve(inst).optimal_cost;
        for (const char* name : {"nn", "nn+ls-split", "nn+ls-tsp", "oracle", "policy:x"}) {
            auto m = *parse_method(name);
            m.params = trained;
            SolveOptions opt_s;
            opt_s.policy_samples = 4;
            const auto out = solve_with_method(inst, m, opt_s);
            ASSERT_TRUE(out.feasible) << name << " " << variant_name(f);
            const auto v = validate_solution(inst, out.solution);
            EXPECT_TRUE(v.feasible()) << name;
            EXPECT_NEAR(v.cost, out.solution.cost, 1e-9);
            EXPECT_GE(v.cost, opt - 1e-9);
        }
    }
}

TEST(Report, TableListsAggregates) {
    const auto rep = run_bench(small_config());
    const auto table = report_table(rep);
    EXPECT_NE(table.find("nn+ls-split"), std::string::npos);
    EXPECT_NE(table.find("CVRP"), std::string::npos);
}

}  // namespace
}  // namespace rfcs
