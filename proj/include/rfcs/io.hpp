#pragma once

// JSON instance and solution files.
//
// Instance:
//   {"version": 1, "n": N, "flags": {"o","b","mb","l","tw"}, "capacity": Q,
//    "horizon": H, "depot": [x, y],
//    "customers": [{"x","y","q","r","s","d"}, ...],
//    "limit": L | null, "seed_info": {"seed": S, "profile": "n50"}}
// Solution:
//   {"routes": [[...], ...], "cost": C | null}
//
// Reals are written with 17 significant digits; an infinite limit or cost is
// written as null.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rfcs/instance.hpp"

namespace rfcs {

inline constexpr int kFileVersion = 1;

inline std::string format_real(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string serialize_instance(const Instance& inst) {
    const auto b = [](bool v) { return v ? "true" : "false"; };
    std::ostringstream os;
    os << "{\n";
    os << "  \"version\": " << kFileVersion << ",\n";
    os << "  \"n\": " << inst.n << ",\n";
    os << "  \"flags\": {\"o\": " << b(inst.flags.open) << ", \"b\": " << b(inst.flags.backhaul)
       << ", \"mb\": " << b(inst.flags.mixed_backhaul) << ", \"l\": " << b(inst.flags.dist_limit)
       << ", \"tw\": " << b(inst.flags.time_window) << "},\n";
    os << "  \"capacity\": " << inst.capacity << ",\n";
    os << "  \"horizon\": " << format_real(inst.horizon) << ",\n";
    os << "  \"depot\": [" << format_real(inst.coords[0].x) << ", "
       << format_real(inst.coords[0].y) << "],\n";
    os << "  \"customers\": [\n";
    for (int i = 1; i <= inst.n; ++i) {
        os << "    {\"x\": " << format_real(inst.coords[i].x)
           << ", \"y\": " << format_real(inst.coords[i].y) << ", \"q\": " << inst.demand[i]
           << ", \"r\": " << format_real(inst.tw_start[i])
           << ", \"s\": " << format_real(inst.service[i])
           << ", \"d\": " << format_real(inst.tw_end[i]) << "}" << (i < inst.n ? "," : "")
           << "\n";
    }
    os << "  ],\n";
    os << "  \"limit\": " << format_real(inst.limit) << ",\n";
    os << "  \"seed_info\": {\"seed\": " << inst.seed_info.seed << ", \"profile\": "
       << nlohmann::json(inst.seed_info.profile).dump() << "}\n";
    os << "}\n";
    return os.str();
}

namespace io_detail {

inline std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed JSON at " + line_col(text, e.byte) + ": " + e.what());
    }
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                                   const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
    return *it;
}

inline double real(const nlohmann::json& v, const std::string& path, bool null_is_inf = false) {
    if (null_is_inf && v.is_null()) return kInfinity;
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
}

inline long long integer(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    return v.get<long long>();
}

inline bool boolean(const nlohmann::json& v, const std::string& path) {
    if (!v.is_boolean()) throw ParseError(path + ": expected true or false");
    return v.get<bool>();
}

}  // namespace io_detail

/// Parses and validates an instance file. Throws ParseError with the offending
/// line or field path.
inline Instance parse_instance(std::string_view text) {
    using namespace io_detail;
    const auto j = parse_json(text);
    const std::string root = "instance";

    if (integer(field(j, "version", root), root + ".version") != kFileVersion)
        throw ParseError(root + ".version: unsupported version");
    const auto n = integer(field(j, "n", root), root + ".n");
    if (n < 1) throw ParseError(root + ".n: must be at least 1");

    const auto& fl = field(j, "flags", root);
    VariantFlags flags;
    flags.open = boolean(field(fl, "o", root + ".flags"), root + ".flags.o");
    flags.backhaul = boolean(field(fl, "b", root + ".flags"), root + ".flags.b");
    flags.mixed_backhaul = boolean(field(fl, "mb", root + ".flags"), root + ".flags.mb");
    flags.dist_limit = boolean(field(fl, "l", root + ".flags"), root + ".flags.l");
    flags.time_window = boolean(field(fl, "tw", root + ".flags"), root + ".flags.tw");
    if (!flags_valid(flags)) throw ParseError(root + ".flags: mb requires b");

    const auto capacity = integer(field(j, "capacity", root), root + ".capacity");
    if (capacity < 1) throw ParseError(root + ".capacity: must be positive");
    const double horizon = real(field(j, "horizon", root), root + ".horizon");

    Instance inst = make_instance(static_cast<int>(n), static_cast<int>(capacity), flags, horizon);

    const auto& depot = field(j, "depot", root);
    if (!depot.is_array() || depot.size() != 2)
        throw ParseError(root + ".depot: expected [x, y]");
    inst.coords[0] = {real(depot[0], root + ".depot[0]"), real(depot[1], root + ".depot[1]")};

    const auto& cs = field(j, "customers", root);
    if (!cs.is_array()) throw ParseError(root + ".customers: expected an array");
    if (cs.size() != static_cast<std::size_t>(n))
        throw ParseError(root + ".customers: expected " + std::to_string(n) + " entries, found " +
                         std::to_string(cs.size()));
    for (int i = 1; i <= inst.n; ++i) {
        const auto& c = cs[static_cast<std::size_t>(i - 1)];
        const std::string p = root + ".customers[" + std::to_string(i - 1) + "]";
        inst.coords[i] = {real(field(c, "x", p), p + ".x"), real(field(c, "y", p), p + ".y")};
        const auto q = integer(field(c, "q", p), p + ".q");
        if (q == 0 || q > capacity || -q > capacity)
            throw ParseError(p + ".q: must be nonzero with |q| <= capacity");
        inst.demand[i] = static_cast<int>(q);
        inst.tw_start[i] = real(field(c, "r", p), p + ".r");
        inst.service[i] = real(field(c, "s", p), p + ".s");
        inst.tw_end[i] = real(field(c, "d", p), p + ".d");
    }

    inst.limit = real(field(j, "limit", root), root + ".limit", true);

    if (auto it = j.find("seed_info"); it != j.end() && it->is_object()) {
        if (auto s = it->find("seed"); s != it->end() && s->is_number_unsigned())
            inst.seed_info.seed = s->get<std::uint64_t>();
        if (auto p = it->find("profile"); p != it->end() && p->is_string())
            inst.seed_info.profile = p->get<std::string>();
    }

    try {
        check_instance(inst);
    } catch (const ContractError& e) {
        throw ParseError(root + ": " + e.what());
    }
    return inst;
}

inline std::string serialize_solution(const Solution& sol) {
    std::ostringstream os;
    os << "{\n  \"routes\": [";
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        os << (r ? ", " : "") << "[";
        for (std::size_t k = 0; k < sol.routes[r].size(); ++k)
            os << (k ? ", " : "") << sol.routes[r][k];
        os << "]";
    }
    os << "],\n  \"cost\": " << format_real(sol.cost) << "\n}\n";
    return os.str();
}

inline Solution parse_solution(std::string_view text) {
    using namespace io_detail;
    const auto j = parse_json(text);
    Solution sol;
    const auto& routes = field(j, "routes", "solution");
    if (!routes.is_array()) throw ParseError("solution.routes: expected an array");
    for (std::size_t r = 0; r < routes.size(); ++r) {
        const std::string p = "solution.routes[" + std::to_string(r) + "]";
        if (!routes[r].is_array()) throw ParseError(p + ": expected an array");
        auto& out = sol.routes.emplace_back();
        for (std::size_t k = 0; k < routes[r].size(); ++k)
            out.push_back(static_cast<int>(
                integer(routes[r][k], p + "[" + std::to_string(k) + "]")));
    }
    sol.cost = real(field(j, "cost", "solution"), "solution.cost", true);
    return sol;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    out << text;
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace rfcs
