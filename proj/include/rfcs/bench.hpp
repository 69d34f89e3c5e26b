#pragma once

// Solve pipelines by name and the benchmark report built from them.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rfcs/instance.hpp"
#include "rfcs/oracle.hpp"
#include "rfcs/policy.hpp"
#include "rfcs/routefirst.hpp"
#include "rfcs/split.hpp"

namespace rfcs {

struct Method {
    enum class Kind { nn, nn_ls_split, nn_ls_tsp, policy, oracle };
    Kind kind = Kind::nn;
    std::string param_file;  // policy only
    PolicyParams params;     // policy only, loaded by the caller

    std::string name() const {
        switch (kind) {
            case Kind::nn: return "nn";
            case Kind::nn_ls_split: return "nn+ls-split";
            case Kind::nn_ls_tsp: return "nn+ls-tsp";
            case Kind::policy: return "policy:" + param_file;
            case Kind::oracle: return "oracle";
        }
        return {};
    }
};

/// Parses a method name; policy parameters are not loaded here.
inline std::optional<Method> parse_method(std::string_view s) {
    Method m;
    if (s == "nn") m.kind = Method::Kind::nn;
    else if (s == "nn+ls-split") m.kind = Method::Kind::nn_ls_split;
    else if (s == "nn+ls-tsp") m.kind = Method::Kind::nn_ls_tsp;
    else if (s == "oracle") m.kind = Method::Kind::oracle;
    else if (s.starts_with("policy:") && s.size() > 7) {
        m.kind = Method::Kind::policy;
        m.param_file = std::string(s.substr(7));
    } else {
        return std::nullopt;
    }
    return m;
}

struct SolveOptions {
    ConstraintSemantics sem;
    std::uint64_t budget = 20000;
    std::uint64_t seed = 0;
    int policy_samples = 0;  // extra sampled rollouts on top of the greedy one
    bool try_reversed = false;
};

struct SolveOutcome {
    Solution solution;
    bool feasible = false;
};

inline SolveOutcome solve_tour(const Instance& inst, const GiantTour& tour,
                               const ConstraintSemantics& sem) {
    const auto res = split(inst, tour, sem);
    if (!res.feasible) return {{}, false};
    return {res.to_solution(tour), true};
}

/// Runs one pipeline. Throws RefusalError for the oracle on n > 9.
inline SolveOutcome solve_with_method(const Instance& inst, const Method& m,
                                      const SolveOptions& opt) {
    switch (m.kind) {
        case Method::Kind::oracle: {
            const auto r = brute_force_solve(inst, opt.sem);
            return {r.optimal_solution, r.feasible};
        }
        case Method::Kind::policy: {
            Rng rng(opt.seed, StreamTag::train_rollout);
            auto best = rollout(inst, m.params, DecodeMode::greedy, opt.sem, rng);
            for (int k = 0; k < opt.policy_samples; ++k) {
                auto t = rollout(inst, m.params, DecodeMode::sample, opt.sem, rng);
                if (t.reward > best.reward) best = std::move(t);
            }
            return solve_tour(inst, best.actions, opt.sem);
        }
        case Method::Kind::nn:
            return solve_tour(inst, nearest_neighbor_tour(inst, nearest_to_depot(inst)), opt.sem);
        case Method::Kind::nn_ls_split:
        case Method::Kind::nn_ls_tsp: {
            const auto obj = m.kind == Method::Kind::nn_ls_split ? TourObjective::split_cost
                                                                 : TourObjective::tsp_length;
            auto tour = nearest_neighbor_tour(inst, nearest_to_depot(inst));
            tour = local_search(inst, tour, obj, {opt.budget, opt.seed}, opt.sem);
            tour = rotate_best(inst, tour, opt.sem, opt.try_reversed);
            return solve_tour(inst, tour, opt.sem);
        }
    }
    return {};
}

// --------------------------------------------------------------------- report

inline constexpr std::string_view kReportHeader =
    "# rfcs-report v1\n"
    "kind,instance,variant,method,cost,feasible,valid,wall_ms,gap_pct\n";

struct ReportRow {
    int instance = 0;
    std::string variant;
    std::string method;
    double cost = kInfinity;
    bool feasible = false;
    bool valid = false;  // passed validate_solution
    double wall_ms = 0.0;
    Solution solution;
};

struct AggregateRow {
    std::string variant;
    std::string method;
    double mean_cost = 0.0;
    double mean_gap_pct = 0.0;  // vs the reference method, per-instance gaps averaged
    int count = 0;
};

struct RunReport {
    std::vector<ReportRow> rows;
    std::vector<AggregateRow> aggregates;
    bool ok = true;  // false when some row could not be aggregated
    std::string failure;
};

struct BenchConfig {
    std::vector<VariantFlags> variants;
    std::vector<Method> methods;
    std::string reference;  // method name used for gaps; defaults to the first method
    int n = 50;
    int count = 10;
    std::uint64_t seed = 0;
    std::optional<ScaleProfile> profile;  // default: n50 for n <= 75, else n100
    SolveOptions options;
    int jobs = 1;
};

inline ScaleProfile default_profile(int n) {
    return n <= 75 ? ScaleProfile::n50() : ScaleProfile::n100();
}

/// Gaps and means from rows; refuses when any row is infeasible or invalid.
inline void aggregate(RunReport& rep, const std::vector<std::string>& variants,
                      const std::vector<std::string>& methods, const std::string& reference) {
    rep.aggregates.clear();
    for (const auto& r : rep.rows)
        if (!r.feasible || !r.valid) {
            rep.ok = false;
            rep.failure = "instance " + std::to_string(r.instance) + " " + r.variant + " " +
                          r.method + (r.feasible ? ": solution failed validation"
                                                 : ": no feasible solution");
            return;
        }
    for (const auto& v : variants) {
        std::map<int, double> ref_cost;
        for (const auto& r : rep.rows)
            if (r.variant == v && r.method == reference) ref_cost[r.instance] = r.cost;
        for (const auto& m : methods) {
            AggregateRow a{v, m, 0.0, 0.0, 0};
            for (const auto& r : rep.rows) {
                if (r.variant != v || r.method != m) continue;
                a.mean_cost += r.cost;
                const double ref = ref_cost.at(r.instance);
                a.mean_gap_pct += 100.0 * (r.cost - ref) / ref;
                ++a.count;
            }
            if (a.count > 0) {
                a.mean_cost /= a.count;
                a.mean_gap_pct /= a.count;
            }
            rep.aggregates.push_back(a);
        }
    }
}

/// Instances are generated from (seed, instance index) and shared across
/// variants' coordinate and demand streams. Rows come out in
/// (variant, instance, method) order regardless of `jobs`.
inline RunReport run_bench(const BenchConfig& cfg) {
    if (cfg.methods.empty() || cfg.variants.empty()) throw ContractError("bench: nothing to run");
    std::vector<std::string> vnames, mnames;
    for (const auto& v : cfg.variants) vnames.push_back(variant_name(v));
    for (const auto& m : cfg.methods) mnames.push_back(m.name());
    const std::string reference = cfg.reference.empty() ? mnames.front() : cfg.reference;
    if (std::find(mnames.begin(), mnames.end(), reference) == mnames.end())
        throw ContractError("bench: reference method " + reference + " is not in the method list");
    const ScaleProfile profile = cfg.profile.value_or(default_profile(cfg.n));

    struct Task {
        std::size_t variant;
        int instance;
    };
    std::vector<Task> tasks;
    for (std::size_t v = 0; v < cfg.variants.size(); ++v)
        for (int i = 0; i < cfg.count; ++i) tasks.push_back({v, i});

    const std::size_t per_task = cfg.methods.size();
    std::vector<ReportRow> rows(tasks.size() * per_task);
    std::vector<std::string> errors(tasks.size());

    auto work = [&](std::size_t t) {
        const auto& task = tasks[t];
        const auto inst = generate_instance(
            cfg.n, cfg.variants[task.variant], profile,
            indexed_seed(cfg.seed, StreamTag::instance_index, static_cast<std::uint64_t>(task.instance)));
        for (std::size_t m = 0; m < per_task; ++m) {
            ReportRow& row = rows[t * per_task + m];
            row.instance = task.instance;
            row.variant = vnames[task.variant];
            row.method = mnames[m];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                auto out = solve_with_method(inst, cfg.methods[m], cfg.options);
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
                row.feasible = out.feasible;
                if (out.feasible) {
                    const auto rep = validate_solution(inst, out.solution, cfg.options.sem);
                    row.valid = rep.feasible();
                    row.cost = rep.cost;
                    row.solution = std::move(out.solution);
                }
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks.size(); t = next++) work(t);
            });
        for (auto& th : pool) th.join();
    }

    RunReport rep;
    rep.rows = std::move(rows);
    for (const auto& e : errors)
        if (!e.empty()) {
            rep.ok = false;
            rep.failure = e;
            return rep;
        }
    aggregate(rep, vnames, mnames, reference);
    return rep;
}

inline std::string report_csv(const RunReport& rep, bool include_wall_time = true) {
    std::ostringstream os;
    os << kReportHeader;
    for (const auto& r : rep.rows)
        os << "row," << r.instance << "," << r.variant << "," << r.method << ","
           << format_real(r.cost) << "," << (r.feasible ? 1 : 0) << "," << (r.valid ? 1 : 0)
           << "," << (include_wall_time ? format_real(r.wall_ms) : std::string("")) << ",\n";
    for (const auto& a : rep.aggregates)
        os << "aggregate,," << a.variant << "," << a.method << "," << format_real(a.mean_cost)
           << ",,,," << format_real(a.mean_gap_pct) << "\n";
    return os.str();
}

inline std::string report_table(const RunReport& rep) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "variant" << std::setw(28) << "method" << std::right
       << std::setw(8) << "count" << std::setw(14) << "mean cost" << std::setw(12) << "gap %"
       << "\n";
    os << std::fixed;
    for (const auto& a : rep.aggregates)
        os << std::left << std::setw(12) << a.variant << std::setw(28) << a.method << std::right
           << std::setw(8) << a.count << std::setw(14) << std::setprecision(4) << a.mean_cost
           << std::setw(12) << std::setprecision(2) << a.mean_gap_pct << "\n";
    if (!rep.ok) os << "FAILED: " << rep.failure << "\n";
    return os.str();
}

}  // namespace rfcs
