#pragma once

// Cluster-second stage: optimal partition of a giant tour into feasible
// vehicle routes.
//
//   best[0] = 0
//   best[i] = min over j < i of best[j] + route_cost(tour[j..i))
//
// route_cost is +inf when the segment cannot be served by one vehicle. For
// each start j the segment is extended one customer at a time, carrying its
// loads, clock and path length, and the extension stops at the first
// violation that no longer segment can repair. O(n^2) extensions overall.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rfcs/instance.hpp"

namespace rfcs {

inline bool is_infeasible(double cost) { return cost == kInfinity; }

/// Incremental state of one candidate route starting at the depot.
class RouteExtender {
public:
    enum class Status {
        ok,        // route ending here is feasible, cost() is valid
        skip,      // infeasible here, but a longer route may still be feasible
        stop,      // infeasible here and for every extension
    };

    RouteExtender(const Instance& inst, const ConstraintSemantics& sem)
        : inst_(inst), sem_(sem) {}

    Status extend(int node) {
        const auto& f = inst_.flags;
        const int q = inst_.demand[node];
        if (q > 0) linehaul_ += q;
        else pickup_ -= q;
        if (linehaul_ > inst_.capacity || pickup_ > inst_.capacity) return Status::stop;

        if (f.backhaul && f.mixed_backhaul) {
            // Load on board after visiting prefix k is linehaul - sum(q[..k]);
            // the worst case is linehaul + max(-prefix sum).
            demand_sum_ += q;
            peak_pickup_ = std::max(peak_pickup_, -demand_sum_);
            if (linehaul_ + peak_pickup_ > inst_.capacity) return Status::stop;
        } else if (f.backhaul) {
            if (q < 0) pickup_seen_ = true;
            else if (pickup_seen_) return Status::stop;
        }

        const double arc = distance(inst_, last_, node);
        path_ += arc;

        if (f.time_window) {
#ifndef RFCS_MUTATE_TW_BRANCH
            if (sem_.tw_mode == ConstraintSemantics::TimeWindow::travel_time) clock_ += arc;
            clock_ = std::max(clock_, inst_.tw_start[node]) + inst_.service[node];
            if (clock_ > inst_.tw_end[node]) return Status::stop;
#else
            // Deliberately broken variant used by the mutation test.
            clock_ = std::max(clock_, inst_.tw_start[node]);
#endif
        }

        last_ = node;
        if (f.dist_limit && path_ > inst_.limit) return Status::stop;

        cost_ = f.open ? path_ : path_ + distance(inst_, node, 0);
        if (f.dist_limit && !f.open &&
            sem_.l_mode == ConstraintSemantics::Limit::include_return && cost_ > inst_.limit)
            return Status::skip;
        return Status::ok;
    }

    double cost() const { return cost_; }

private:
    const Instance& inst_;
    ConstraintSemantics sem_;
    int linehaul_ = 0;
    int pickup_ = 0;
    int demand_sum_ = 0;
    int peak_pickup_ = 0;
    bool pickup_seen_ = false;
    int last_ = 0;
    double path_ = 0.0;
    double clock_ = 0.0;
    double cost_ = 0.0;
};

/// Cost of serving tour[first, last) with one vehicle, or kInfinity.
inline double segment_route_cost(const Instance& inst, const GiantTour& tour, std::size_t first,
                                 std::size_t last, const ConstraintSemantics& sem = {}) {
    if (first >= last || last > tour.size())
        throw ContractError("segment_route_cost: empty or out-of-range segment");
    RouteExtender route(inst, sem);
    RouteExtender::Status st = RouteExtender::Status::stop;
    for (std::size_t k = first; k < last; ++k) {
        st = route.extend(tour[k]);
        if (st == RouteExtender::Status::stop) return kInfinity;
    }
    return st == RouteExtender::Status::ok ? route.cost() : kInfinity;
}

struct SplitResult {
    double total_cost = kInfinity;
    /// Exclusive end position of each route in the tour; the last entry is n.
    std::vector<std::size_t> boundaries;
    std::vector<double> route_costs;
    bool feasible = false;
    ConstraintSemantics sem;

    std::vector<std::vector<int>> routes(const GiantTour& tour) const {
        std::vector<std::vector<int>> out;
        std::size_t begin = 0;
        for (std::size_t end : boundaries) {
            out.emplace_back(tour.begin() + static_cast<std::ptrdiff_t>(begin),
                             tour.begin() + static_cast<std::ptrdiff_t>(end));
            begin = end;
        }
        return out;
    }

    Solution to_solution(const GiantTour& tour) const {
        return Solution{routes(tour), total_cost};
    }
};

/// Throws ContractError unless tour is a permutation of 1..n.
inline void check_tour(const Instance& inst, const GiantTour& tour) {
    if (tour.size() != static_cast<std::size_t>(inst.n))
        throw ContractError("giant tour length must equal n");
    std::vector<char> seen(tour.size() + 1, 0);
    for (int c : tour) {
        if (c < 1 || c > inst.n || seen[c])
            throw ContractError("giant tour is not a permutation of 1..n");
        seen[c] = 1;
    }
}

/// Optimal split. Ties go to the earliest predecessor (longest last route).
/// An unsplittable tour yields feasible = false and an infinite cost.
inline SplitResult split(const Instance& inst, const GiantTour& tour,
                         const ConstraintSemantics& sem = {}) {
    const std::size_t n = tour.size();
    std::vector<double> best(n + 1, kInfinity);
    std::vector<std::size_t> pred(n + 1, 0);
    std::vector<double> last_cost(n + 1, 0.0);
    best[0] = 0.0;

    for (std::size_t t = 0; t < n; ++t) {
        if (is_infeasible(best[t])) continue;
        RouteExtender route(inst, sem);
        for (std::size_t i = t; i < n; ++i) {
            const auto st = route.extend(tour[i]);
            if (st == RouteExtender::Status::stop) break;
            if (st == RouteExtender::Status::skip) continue;
            const double cand = best[t] + route.cost();
            if (cand < best[i + 1]) {
                best[i + 1] = cand;
                pred[i + 1] = t;
                last_cost[i + 1] = route.cost();
            }
        }
    }

    SplitResult res;
    res.sem = sem;
    res.total_cost = best[n];
    res.feasible = !is_infeasible(best[n]);
    if (!res.feasible) return res;
    for (std::size_t i = n; i > 0; i = pred[i]) {
        res.boundaries.push_back(i);
        res.route_costs.push_back(last_cost[i]);
    }
    std::reverse(res.boundaries.begin(), res.boundaries.end());
    std::reverse(res.route_costs.begin(), res.route_costs.end());
    return res;
}

/// Reward penalty for tours that cannot be split at all.
inline constexpr double kInfeasibleReward = -1e6;

inline double split_reward(const Instance& inst, const GiantTour& tour,
                           const ConstraintSemantics& sem = {}) {
    const auto res = split(inst, tour, sem);
    return res.feasible ? -res.total_cost : kInfeasibleReward;
}

}  // namespace rfcs
