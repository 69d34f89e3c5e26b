#pragma once

// Problem data for the sixteen capacitated VRP variants (open routes,
// backhauls, distance limit, time windows, each on or off) plus the mixed
// backhaul refinement, a seeded instance generator, and an independent
// solution validator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfcs/errors.hpp"
#include "rfcs/rng.hpp"

namespace rfcs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Scheduling horizon: depot window end and upper anchor of window offsets.
inline constexpr double kDefaultHorizon = 4.6;

struct VariantFlags {
    bool open = false;
    bool backhaul = false;
    bool mixed_backhaul = false;
    bool dist_limit = false;
    bool time_window = false;

    friend bool operator==(const VariantFlags&, const VariantFlags&) = default;
};

inline bool flags_valid(const VariantFlags& f) { return !f.mixed_backhaul || f.backhaul; }

/// Canonical name: CVRP for the base problem, otherwise
/// [O]VRP[B|MB][L][TW], e.g. OVRPBLTW or VRPMB.
inline std::string variant_name(const VariantFlags& f) {
    if (!f.open && !f.backhaul && !f.dist_limit && !f.time_window) return "CVRP";
    std::string s = f.open ? "OVRP" : "VRP";
    if (f.backhaul) s += f.mixed_backhaul ? "MB" : "B";
    if (f.dist_limit) s += "L";
    if (f.time_window) s += "TW";
    return s;
}

/// The sixteen benchmark variants in table order.
inline const std::array<std::string_view, 16>& variant_names() {
    static const std::array<std::string_view, 16> names = {
        "CVRP",  "OVRP",   "VRPB",   "VRPL",    "VRPTW",   "OVRPB",   "OVRPL",   "OVRPTW",
        "VRPBL", "VRPBTW", "VRPLTW", "OVRPBL",  "OVRPBTW", "OVRPLTW", "VRPBLTW", "OVRPBLTW"};
    return names;
}

inline std::optional<VariantFlags> parse_variant(std::string_view name) {
    VariantFlags f;
    if (name == "CVRP") return f;
    if (name.starts_with("OVRP")) {
        f.open = true;
        name.remove_prefix(4);
    } else if (name.starts_with("VRP")) {
        name.remove_prefix(3);
    } else {
        return std::nullopt;
    }
    if (name.starts_with("MB")) {
        f.backhaul = f.mixed_backhaul = true;
        name.remove_prefix(2);
    } else if (name.starts_with("B")) {
        f.backhaul = true;
        name.remove_prefix(1);
    }
    if (name.starts_with("L")) {
        f.dist_limit = true;
        name.remove_prefix(1);
    }
    if (name.starts_with("TW")) {
        f.time_window = true;
        name.remove_prefix(2);
    }
    // "VRP" alone is not a name; the base problem is spelled CVRP.
    if (!name.empty() || (!f.open && !f.backhaul && !f.dist_limit && !f.time_window))
        return std::nullopt;
    return f;
}

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Capacity profile for generated instances.
struct ScaleProfile {
    enum class Kind { n50, n100, custom };
    Kind kind = Kind::n50;
    int custom_capacity = 0;

    static ScaleProfile n50() { return {Kind::n50, 0}; }
    static ScaleProfile n100() { return {Kind::n100, 0}; }
    static ScaleProfile custom(int q) { return {Kind::custom, q}; }

    int capacity() const {
        switch (kind) {
            case Kind::n50: return 40;
            case Kind::n100: return 50;
            case Kind::custom: return custom_capacity;
        }
        return 0;
    }

    std::string name() const {
        switch (kind) {
            case Kind::n50: return "n50";
            case Kind::n100: return "n100";
            case Kind::custom: return "custom(" + std::to_string(custom_capacity) + ")";
        }
        return {};
    }
};

/// Accepts "n50", "n100" or "custom(Q)" with Q >= 1.
inline std::optional<ScaleProfile> parse_profile(std::string_view s) {
    if (s == "n50") return ScaleProfile::n50();
    if (s == "n100") return ScaleProfile::n100();
    if (s.starts_with("custom(") && s.ends_with(")") && s.size() > 8) {
        const auto digits = s.substr(7, s.size() - 8);
        int q = 0;
        for (char c : digits) {
            if (c < '0' || c > '9' || q > 100000000) return std::nullopt;
            q = q * 10 + (c - '0');
        }
        if (q >= 1) return ScaleProfile::custom(q);
    }
    return std::nullopt;
}

/// Provenance recorded in instance files.
struct SeedInfo {
    std::uint64_t seed = 0;
    std::string profile;

    friend bool operator==(const SeedInfo&, const SeedInfo&) = default;
};

/// Node 0 is the depot; customers are 1..n. Per-node vectors have n + 1
/// entries. Inactive constraints keep placeholder values: windows [0, horizon]
/// with zero service, and an infinite distance limit.
struct Instance {
    int n = 0;
    std::vector<Point> coords;
    std::vector<int> demand;  // > 0 linehaul, < 0 backhaul, 0 at the depot
    int capacity = 0;
    std::vector<double> tw_start;
    std::vector<double> tw_end;
    std::vector<double> service;
    double limit = kInfinity;
    double horizon = kDefaultHorizon;
    VariantFlags flags;
    SeedInfo seed_info;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Routes list customer ids only; the depot is implicit at both ends.
struct Solution {
    std::vector<std::vector<int>> routes;
    double cost = 0.0;
};

/// Giant tour: a permutation of 1..n.
using GiantTour = std::vector<int>;

/// How the two ambiguous constraint checks are interpreted. Immutable for the
/// duration of a solve.
struct ConstraintSemantics {
    enum class TimeWindow {
        paper_literal,  // clock = max(clock, r) + s, no travel time
        travel_time,    // clock = max(clock + c, r) + s
    };
    enum class Limit {
        path_only,       // depot -> ... -> last customer
        include_return,  // plus the arc back to the depot on closed routes
    };
    TimeWindow tw_mode = TimeWindow::travel_time;
    Limit l_mode = Limit::include_return;

    friend bool operator==(const ConstraintSemantics&, const ConstraintSemantics&) = default;
};

inline std::string to_string(ConstraintSemantics::TimeWindow m) {
    return m == ConstraintSemantics::TimeWindow::paper_literal ? "paper_literal" : "travel_time";
}
inline std::string to_string(ConstraintSemantics::Limit m) {
    return m == ConstraintSemantics::Limit::path_only ? "path_only" : "include_return";
}

inline double distance(const Instance& inst, int i, int j) {
    if (i < 0 || j < 0 || i > inst.n || j > inst.n)
        throw std::out_of_range("distance: node index out of range");
    const double dx = inst.coords[i].x - inst.coords[j].x;
    const double dy = inst.coords[i].y - inst.coords[j].y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Largest depot-to-customer distance.
inline double max_depot_distance(const Instance& inst) {
    double m = 0.0;
    for (int i = 1; i <= inst.n; ++i) m = std::max(m, distance(inst, 0, i));
    return m;
}

/// Empty instance shell with placeholder windows and limit.
inline Instance make_instance(int n, int capacity, VariantFlags flags,
                              double horizon = kDefaultHorizon) {
    if (n < 1) throw ContractError("instance must have at least one customer");
    if (capacity < 1) throw ContractError("capacity must be positive");
    if (!flags_valid(flags)) throw ContractError("mixed_backhaul requires backhaul");
    Instance inst;
    inst.n = n;
    inst.capacity = capacity;
    inst.flags = flags;
    inst.horizon = horizon;
    const auto nodes = static_cast<std::size_t>(n) + 1;
    inst.coords.assign(nodes, Point{});
    inst.demand.assign(nodes, 0);
    inst.tw_start.assign(nodes, 0.0);
    inst.tw_end.assign(nodes, horizon);
    inst.service.assign(nodes, 0.0);
    return inst;
}

/// Generates an instance with the standard distributions: unit-square
/// coordinates, demands U{1..9} (capped at Q for small custom capacities),
/// round(0.2 n) backhaul customers, service U[0.15, 0.18], window length
/// U[0.18, 0.2], distance limit U[2 Dmax, 3].
///
/// Window starts are drawn uniformly from [d0i, horizon - d0i - s_i - len_i]
/// so that every customer can be served by a dedicated vehicle under either
/// time-window semantics.
inline Instance generate_instance(int n, VariantFlags flags, ScaleProfile profile,
                                  std::uint64_t seed) {
    if (n < 1) throw ContractError("generate_instance: empty instance (n = 0)");
    Instance inst = make_instance(n, profile.capacity(), flags);
    inst.seed_info = {seed, profile.name()};

    Rng coords(seed, StreamTag::coords);
    for (auto& p : inst.coords) {
        p.x = coords.uniform();
        p.y = coords.uniform();
    }

    Rng demands(seed, StreamTag::demands);
    const int max_demand = std::min(9, inst.capacity);
    for (int i = 1; i <= n; ++i) inst.demand[i] = demands.uniform_int(1, max_demand);

    if (flags.backhaul) {
        Rng pick(seed, StreamTag::backhauls);
        const int k = static_cast<int>(std::lround(0.2 * n));
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = i + 1;
        for (int i = 0; i < k; ++i) {
            std::swap(ids[i], ids[pick.uniform_int(i, n - 1)]);
            inst.demand[ids[i]] = -inst.demand[ids[i]];
        }
    }

    if (flags.time_window) {
        Rng tw(seed, StreamTag::time_windows);
        for (int i = 1; i <= n; ++i) {
            const double s = tw.uniform(0.15, 0.18);
            const double len = tw.uniform(0.18, 0.2);
            const double d0 = distance(inst, 0, i);
            const double lo = d0;
            const double hi = std::max(lo, inst.horizon - d0 - s - len);
            inst.service[i] = s;
            inst.tw_start[i] = tw.uniform(lo, hi);
            inst.tw_end[i] = inst.tw_start[i] + len;
        }
    }

    if (flags.dist_limit) {
        Rng lim(seed, StreamTag::limit);
        inst.limit = lim.uniform(2.0 * max_depot_distance(inst), 3.0);
    }
    return inst;
}

/// Throws ContractError if the instance breaks a data invariant.
inline void check_instance(const Instance& inst) {
    if (inst.n < 1) throw ContractError("instance has no customers");
    if (inst.capacity < 1) throw ContractError("capacity must be positive");
    if (!flags_valid(inst.flags)) throw ContractError("mixed_backhaul requires backhaul");
    const auto nodes = static_cast<std::size_t>(inst.n) + 1;
    if (inst.coords.size() != nodes || inst.demand.size() != nodes ||
        inst.tw_start.size() != nodes || inst.tw_end.size() != nodes ||
        inst.service.size() != nodes)
        throw ContractError("per-node arrays must have n + 1 entries");
    if (inst.demand[0] != 0) throw ContractError("depot demand must be 0");
    for (int i = 1; i <= inst.n; ++i) {
        if (inst.demand[i] == 0) throw ContractError("customer demand must be nonzero");
        if (std::abs(inst.demand[i]) > inst.capacity)
            throw ContractError("customer demand exceeds capacity");
        if (inst.service[i] < 0.0 || inst.tw_start[i] < 0.0 || inst.tw_end[i] < 0.0)
            throw ContractError("time window fields must be nonnegative");
    }
    if (!(inst.limit >= 0.0)) throw ContractError("distance limit must be nonnegative");
}

/// Length of a route served from the depot; the return arc is dropped for
/// open routes.
inline double route_length(const Instance& inst, const std::vector<int>& route) {
    if (route.empty()) return 0.0;
    double len = 0.0;
    int prev = 0;
    for (int c : route) {
        len += distance(inst, prev, c);
        prev = c;
    }
    if (!inst.flags.open) len += distance(inst, prev, 0);
    return len;
}

struct Violation {
    enum class Kind {
        missing_customer,
        duplicate_customer,
        empty_route,
        linehaul_capacity,
        pickup_capacity,
        mixed_load,
        precedence,
        time_window,
        distance_limit,
    };
    Kind kind;
    int route = -1;     // -1 when not tied to a route
    int customer = -1;  // -1 when not tied to a customer
};

inline std::string_view to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::missing_customer: return "missing_customer";
        case Violation::Kind::duplicate_customer: return "duplicate_customer";
        case Violation::Kind::empty_route: return "empty_route";
        case Violation::Kind::linehaul_capacity: return "linehaul_capacity";
        case Violation::Kind::pickup_capacity: return "pickup_capacity";
        case Violation::Kind::mixed_load: return "mixed_load";
        case Violation::Kind::precedence: return "precedence";
        case Violation::Kind::time_window: return "time_window";
        case Violation::Kind::distance_limit: return "distance_limit";
    }
    return "unknown";
}

struct ValidationReport {
    std::vector<Violation> violations;
    double cost = 0.0;  // recomputed from coordinates
    ConstraintSemantics sem;

    bool feasible() const { return violations.empty(); }
};

/// Checks a solution against every active constraint without relying on the
/// split code. Throws StructuralError for nodes outside 1..n.
inline ValidationReport validate_solution(const Instance& inst, const Solution& sol,
                                          const ConstraintSemantics& sem = {}) {
    using K = Violation::Kind;
    ValidationReport rep;
    rep.sem = sem;

    std::vector<int> seen(static_cast<std::size_t>(inst.n) + 1, 0);
    for (std::size_t r = 0; r < sol.routes.size(); ++r)
        for (int c : sol.routes[r]) {
            if (c < 1 || c > inst.n)
                throw StructuralError("route " + std::to_string(r) +
                                      " references nonexistent customer " + std::to_string(c));
            ++seen[c];
        }
    for (int c = 1; c <= inst.n; ++c) {
        if (seen[c] == 0) rep.violations.push_back({K::missing_customer, -1, c});
        if (seen[c] > 1) rep.violations.push_back({K::duplicate_customer, -1, c});
    }

    const auto& f = inst.flags;
    for (std::size_t ri = 0; ri < sol.routes.size(); ++ri) {
        const auto& route = sol.routes[ri];
        const int r = static_cast<int>(ri);
        if (route.empty()) {
            rep.violations.push_back({K::empty_route, r, -1});
            continue;
        }

        int linehaul = 0, pickup = 0;
        for (int c : route) {
            if (inst.demand[c] > 0) linehaul += inst.demand[c];
            else pickup -= inst.demand[c];
        }
        if (linehaul > inst.capacity) rep.violations.push_back({K::linehaul_capacity, r, -1});
        if (pickup > inst.capacity) rep.violations.push_back({K::pickup_capacity, r, -1});

        if (f.backhaul && f.mixed_backhaul) {
            int load = linehaul;
            bool ok = load <= inst.capacity;
            for (int c : route) {
                load -= inst.demand[c];
                if (load < 0 || load > inst.capacity) ok = false;
            }
            if (!ok) rep.violations.push_back({K::mixed_load, r, -1});
        } else if (f.backhaul) {
            bool pickup_seen = false;
            for (int c : route) {
                if (inst.demand[c] < 0) pickup_seen = true;
                else if (pickup_seen) {
                    rep.violations.push_back({K::precedence, r, c});
                    break;
                }
            }
        }

        if (f.time_window) {
            double clock = 0.0;
            int prev = 0;
            for (int c : route) {
                if (sem.tw_mode == ConstraintSemantics::TimeWindow::travel_time)
                    clock += distance(inst, prev, c);
                clock = std::max(clock, inst.tw_start[c]) + inst.service[c];
                if (clock > inst.tw_end[c]) {
                    rep.violations.push_back({K::time_window, r, c});
                    break;
                }
                prev = c;
            }
        }

        double path = 0.0;
        int prev = 0;
        for (int c : route) {
            path += distance(inst, prev, c);
            prev = c;
        }
        const double len = f.open ? path : path + distance(inst, prev, 0);
        if (f.dist_limit) {
            const double checked =
                sem.l_mode == ConstraintSemantics::Limit::path_only ? path : len;
            if (checked > inst.limit) rep.violations.push_back({K::distance_limit, r, -1});
        }
        rep.cost += len;
    }
    return rep;
}

}  // namespace rfcs
