#pragma once

// Heuristic giant-tour construction and improvement. Tours are judged either
// by their split cost or by their plain cyclic length over the customers.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rfcs/instance.hpp"
#include "rfcs/rng.hpp"
#include "rfcs/split.hpp"

namespace rfcs {

enum class TourObjective { split_cost, tsp_length };

struct SearchBudget {
    std::uint64_t max_evaluations = 20000;
    std::uint64_t seed = 0;
};

/// Greedy tour from `start`; ties go to the lowest customer id.
inline GiantTour nearest_neighbor_tour(const Instance& inst, int start) {
    if (start < 1 || start > inst.n) throw ContractError("nearest_neighbor_tour: bad start");
    GiantTour tour{start};
    std::vector<char> used(static_cast<std::size_t>(inst.n) + 1, 0);
    used[start] = 1;
    int cur = start;
    while (tour.size() < static_cast<std::size_t>(inst.n)) {
        int next = -1;
        double best = kInfinity;
        for (int c = 1; c <= inst.n; ++c) {
            if (used[c]) continue;
            const double d = distance(inst, cur, c);
            if (d < best) {
                best = d;
                next = c;
            }
        }
        used[next] = 1;
        tour.push_back(next);
        cur = next;
    }
    return tour;
}

/// Customer closest to the depot (lowest id on ties).
inline int nearest_to_depot(const Instance& inst) {
    int arg = 1;
    for (int c = 2; c <= inst.n; ++c)
        if (distance(inst, 0, c) < distance(inst, 0, arg)) arg = c;
    return arg;
}

/// Closed cycle a1 -> ... -> an -> a1 over customers only.
inline double cyclic_tour_length(const Instance& inst, const GiantTour& tour) {
    double len = 0.0;
    for (std::size_t k = 0; k < tour.size(); ++k)
        len += distance(inst, tour[k], tour[(k + 1) % tour.size()]);
    return len;
}

inline double tour_objective(const Instance& inst, const GiantTour& tour, TourObjective obj,
                             const ConstraintSemantics& sem) {
    return obj == TourObjective::split_cost ? split(inst, tour, sem).total_cost
                                            : cyclic_tour_length(inst, tour);
}

/// First-improvement 2-opt and Or-opt (segments of 1..3 customers) over the
/// giant tour. Every candidate move costs one objective evaluation; the search
/// stops at a local optimum or when the budget is spent. The seed only
/// shuffles the order in which anchor positions are scanned.
inline GiantTour local_search(const Instance& inst, GiantTour tour, TourObjective obj,
                              const SearchBudget& budget, const ConstraintSemantics& sem = {}) {
    const std::size_t n = tour.size();
    if (n < 2 || budget.max_evaluations < 1) return tour;

    std::uint64_t evals = 0;
    auto evaluate = [&](const GiantTour& t) {
        ++evals;
        return tour_objective(inst, t, obj, sem);
    };
    double current = evaluate(tour);

    // Accept only clear improvements so rounding noise cannot cycle.
    const auto improves = [](double cand, double cur) {
        return cand < cur && (cur == kInfinity || cur - cand > 1e-12 * std::max(1.0, cur));
    };

    Rng rng(budget.seed, StreamTag::search_order);
    std::vector<std::size_t> anchors(n);
    std::iota(anchors.begin(), anchors.end(), std::size_t{0});
    GiantTour cand(n);

    bool improved = true;
    while (improved && evals < budget.max_evaluations) {
        improved = false;
        for (std::size_t k = n - 1; k > 0; --k)
            std::swap(anchors[k], anchors[static_cast<std::size_t>(
                                      rng.uniform_int(0, static_cast<int>(k)))]);

        for (std::size_t i : anchors) {
            // 2-opt: reverse tour[i..j].
            for (std::size_t j = i + 1; j < n; ++j) {
                if (evals >= budget.max_evaluations) return tour;
                cand = tour;
                std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                             cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                const double v = evaluate(cand);
                if (improves(v, current)) {
                    tour.swap(cand);
                    current = v;
                    improved = true;
                }
            }
            // Or-opt: move tour[i, i+len) to position p of the remaining tour.
            for (std::size_t len = 1; len <= 3 && i + len <= n; ++len) {
                if (len == n) break;
                for (std::size_t p = 0; p + len <= n; ++p) {
                    if (p == i) continue;
                    if (evals >= budget.max_evaluations) return tour;
                    GiantTour rest;
                    rest.reserve(n);
                    rest.insert(rest.end(), tour.begin(),
                                tour.begin() + static_cast<std::ptrdiff_t>(i));
                    rest.insert(rest.end(), tour.begin() + static_cast<std::ptrdiff_t>(i + len),
                                tour.end());
                    cand.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(p));
                    cand.insert(cand.end(), tour.begin() + static_cast<std::ptrdiff_t>(i),
                                tour.begin() + static_cast<std::ptrdiff_t>(i + len));
                    cand.insert(cand.end(), rest.begin() + static_cast<std::ptrdiff_t>(p),
                                rest.end());
                    const double v = evaluate(cand);
                    if (improves(v, current)) {
                        tour.swap(cand);
                        current = v;
                        improved = true;
                    }
                }
            }
        }
    }
    return tour;
}

/// Best cyclic rotation by split cost (smallest offset on ties), optionally
/// also trying each rotation reversed.
inline GiantTour rotate_best(const Instance& inst, const GiantTour& tour,
                             const ConstraintSemantics& sem = {}, bool try_reversed = false) {
    GiantTour best = tour;
    double best_cost = split(inst, tour, sem).total_cost;
    GiantTour cand(tour.size());
    for (std::size_t off = 0; off < tour.size(); ++off) {
        std::rotate_copy(tour.begin(), tour.begin() + static_cast<std::ptrdiff_t>(off), tour.end(),
                         cand.begin());
        for (int pass = 0; pass < (try_reversed ? 2 : 1); ++pass) {
            if (pass == 1) std::reverse(cand.begin(), cand.end());
            const double c = split(inst, cand, sem).total_cost;
            if (c < best_cost) {
                best_cost = c;
                best = cand;
            }
        }
    }
    return best;
}

/// A uniformly random permutation of 1..n.
inline GiantTour random_tour(int n, std::uint64_t seed) {
    GiantTour tour(static_cast<std::size_t>(n));
    std::iota(tour.begin(), tour.end(), 1);
    Rng rng(seed, StreamTag::initial_tour);
    for (int k = n - 1; k > 0; --k) std::swap(tour[k], tour[rng.uniform_int(0, k)]);
    return tour;
}

}  // namespace rfcs
