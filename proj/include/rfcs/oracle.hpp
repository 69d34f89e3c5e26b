#pragma once

// Exhaustive references for small instances. Nothing here calls into the
// split code: each candidate route is simulated on its own, arc by arc, and
// every combination of cut points (and, for brute_force_solve, every
// permutation) is enumerated.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "rfcs/instance.hpp"

namespace rfcs {

inline constexpr int kMaxBruteForceSplit = 20;
inline constexpr int kMaxBruteForceSolve = 9;

struct OracleResult {
    double optimal_cost = kInfinity;
    Solution optimal_solution;
    std::uint64_t search_space_size = 0;
    bool feasible = false;
};

namespace oracle_detail {

/// Serves `nodes` with one vehicle and returns its length, or kInfinity.
inline double simulate_route(const Instance& inst, const int* nodes, std::size_t count,
                             const ConstraintSemantics& sem) {
    const auto& f = inst.flags;
    const int cap = inst.capacity;

    int deliveries = 0, pickups = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const int q = inst.demand[nodes[k]];
        (q > 0 ? deliveries : pickups) += std::abs(q);
    }
    if (deliveries > cap || pickups > cap) return kInfinity;

    if (f.backhaul && f.mixed_backhaul) {
        int on_board = deliveries;
        for (std::size_t k = 0; k < count; ++k) {
            on_board -= inst.demand[nodes[k]];
            if (on_board < 0 || on_board > cap) return kInfinity;
        }
    } else if (f.backhaul) {
        // Every delivery must come before the first pickup.
        std::size_t first_pickup = count;
        for (std::size_t k = 0; k < count && first_pickup == count; ++k)
            if (inst.demand[nodes[k]] < 0) first_pickup = k;
        for (std::size_t k = first_pickup; k < count; ++k)
            if (inst.demand[nodes[k]] > 0) return kInfinity;
    }

    std::array<double, kMaxBruteForceSplit> legs{};
    int at = 0;
    for (std::size_t k = 0; k < count; ++k) {
        legs[k] = distance(inst, at, nodes[k]);
        at = nodes[k];
    }
    double path = 0.0;
    for (std::size_t k = 0; k < count; ++k) path += legs[k];
    const double total = f.open ? path : path + distance(inst, at, 0);

    if (f.time_window) {
        const bool travel = sem.tw_mode == ConstraintSemantics::TimeWindow::travel_time;
        double finish = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const int c = nodes[k];
            const double ready = travel ? finish + legs[k] : finish;
            finish = std::max(ready, inst.tw_start[c]) + inst.service[c];
            if (finish > inst.tw_end[c]) return kInfinity;
        }
    }

    if (f.dist_limit) {
        const bool with_return = sem.l_mode == ConstraintSemantics::Limit::include_return;
        if ((with_return ? total : path) > inst.limit) return kInfinity;
    }
    return total;
}

/// table[a][b] = cost of serving order[a, b) as one route (b > a).
inline std::vector<std::vector<double>> segment_table(const Instance& inst,
                                                      const std::vector<int>& order,
                                                      const ConstraintSemantics& sem) {
    const std::size_t n = order.size();
    std::vector<std::vector<double>> table(n, std::vector<double>(n + 1, kInfinity));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b <= n; ++b)
            table[a][b] = simulate_route(inst, order.data() + a, b - a, sem);
    return table;
}

struct BestCuts {
    double cost = kInfinity;
    std::uint32_t mask = 0;  // bit k set: a route ends after position k
};

/// Tries all 2^(n-1) cut sets; ties keep the smallest mask.
inline BestCuts enumerate_cuts(const std::vector<std::vector<double>>& table, std::size_t n) {
    BestCuts best;
    const std::uint32_t subsets = std::uint32_t{1} << (n - 1);
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        double total = 0.0;
        std::size_t begin = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool cut_here = k + 1 == n || (mask >> k & 1U);
            if (!cut_here) continue;
            total += table[begin][k + 1];
            begin = k + 1;
        }
        if (total < best.cost) best = {total, mask};
    }
    return best;
}

inline std::vector<std::vector<int>> cut_routes(const std::vector<int>& order, std::uint32_t mask) {
    std::vector<std::vector<int>> routes(1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        routes.back().push_back(order[k]);
        if (k + 1 < order.size() && (mask >> k & 1U)) routes.emplace_back();
    }
    return routes;
}

}  // namespace oracle_detail

/// Minimum split cost of `tour` by exhaustion, or kInfinity.
inline double brute_force_split(const Instance& inst, const GiantTour& tour,
                                const ConstraintSemantics& sem = {}) {
    if (tour.empty()) throw ContractError("brute_force_split: empty tour");
    if (tour.size() > static_cast<std::size_t>(kMaxBruteForceSplit))
        throw RefusalError("brute_force_split: refusing n > 20");
    const auto table = oracle_detail::segment_table(inst, tour, sem);
    return oracle_detail::enumerate_cuts(table, tour.size()).cost;
}

/// Global optimum over every permutation and every split of it.
inline OracleResult brute_force_solve(const Instance& inst, const ConstraintSemantics& sem = {}) {
    if (inst.n > kMaxBruteForceSolve) throw RefusalError("brute_force_solve: refusing n > 9");
    OracleResult res;
    std::vector<int> order(inst.n);
    std::iota(order.begin(), order.end(), 1);
    std::uint32_t best_mask = 0;
    std::vector<int> best_order;
    do {
        ++res.search_space_size;
        const auto table = oracle_detail::segment_table(inst, order, sem);
        const auto cuts = oracle_detail::enumerate_cuts(table, order.size());
        if (cuts.cost < res.optimal_cost) {
            res.optimal_cost = cuts.cost;
            best_mask = cuts.mask;
            best_order = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    res.feasible = res.optimal_cost != kInfinity;
    if (res.feasible)
        res.optimal_solution = {oracle_detail::cut_routes(best_order, best_mask), res.optimal_cost};
    return res;
}

}  // namespace rfcs
