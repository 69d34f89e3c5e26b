#pragma once

// Route-first environment and a linear softmax policy trained with REINFORCE.
//
// The environment only tracks what has been visited: the running delivered
// and picked-up totals, the current node, and the action mask. Feasibility is
// left entirely to the split, whose negated cost is the episode reward.
//
// Policy: logit(c) = temperature * <weights, features(state, c)> over
// unvisited customers; visited customers get probability exactly zero.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfcs/instance.hpp"
#include "rfcs/io.hpp"
#include "rfcs/rng.hpp"
#include "rfcs/split.hpp"

namespace rfcs {

// ---------------------------------------------------------------- environment

struct EnvState {
    const Instance* inst = nullptr;
    int n0 = 0;       // delivered so far
    int n1 = 0;       // picked up so far
    int current = 0;  // 0 before the first step
    std::vector<char> mask;  // mask[c] = 1 while customer c is unvisited (index 0 unused)
    VariantFlags flags;
    int step = 0;
    std::vector<int> visited;
};

inline EnvState env_reset(const Instance& inst) {
    EnvState s;
    s.inst = &inst;
    s.mask.assign(static_cast<std::size_t>(inst.n) + 1, 1);
    s.mask[0] = 0;
    s.flags = inst.flags;
    s.visited.reserve(static_cast<std::size_t>(inst.n));
    return s;
}

/// Visits `action`. No feasibility checks beyond the mask.
inline void env_step(EnvState& s, int action) {
    if (action < 1 || action > s.inst->n || !s.mask[action])
        throw ContractError("env_step: customer " + std::to_string(action) +
                            " is not selectable");
    const int q = s.inst->demand[action];
    s.mask[action] = 0;
    s.current = action;
    s.n0 += std::max(q, 0);
    s.n1 += std::max(-q, 0);
    ++s.step;
    s.visited.push_back(action);
}

inline bool env_done(const EnvState& s) { return s.step == s.inst->n; }

// ------------------------------------------------------------------- features

inline constexpr std::size_t kNumFeatures = 15;

inline const std::array<std::string_view, kNumFeatures>& feature_names() {
    static const std::array<std::string_view, kNumFeatures> names = {
        "bias",        "dist_current",  "dist_depot",     "demand",       "delivered_mod_q",
        "picked_mod_q", "is_pickup",    "window_length",  "window_start", "remaining",
        "flag_open",   "flag_backhaul", "flag_limit",     "flag_tw",      "dist_current_x_load"};
    return names;
}

using Features = std::array<double, kNumFeatures>;

inline Features featurize(const EnvState& s, int cand) {
    const Instance& in = *s.inst;
    const double q_cap = in.capacity;
    const double d_cur = distance(in, s.current, cand);
    const double load0 = static_cast<double>(s.n0 % in.capacity) / q_cap;
    const double load1 = static_cast<double>(s.n1 % in.capacity) / q_cap;
    const int q = in.demand[cand];
    return {1.0,
            d_cur,
            distance(in, cand, 0),
            q / q_cap,
            load0,
            load1,
            q < 0 ? 1.0 : 0.0,
            (in.tw_end[cand] - in.tw_start[cand]) / in.horizon,
            in.tw_start[cand] / in.horizon,
            static_cast<double>(in.n - s.step) / in.n,
            s.flags.open ? 1.0 : 0.0,
            s.flags.backhaul ? 1.0 : 0.0,
            s.flags.dist_limit ? 1.0 : 0.0,
            s.flags.time_window ? 1.0 : 0.0,
            d_cur * load0};
}

// --------------------------------------------------------------------- policy

struct PolicyParams {
    std::vector<double> weights = std::vector<double>(kNumFeatures, 0.0);
    double temperature = 1.0;
};

enum class DecodeMode { sample, greedy };

/// Chosen customer and its log-probability.
struct Decision {
    int action = 0;
    double log_prob = 0.0;
};

namespace policy_detail {

inline double dot(const std::vector<double>& w, const Features& x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) acc += w[k] * x[k];
    return acc;
}

/// Softmax over the unvisited customers. `score` (size F + 1), when given,
/// receives d log pi(action) / d(weights, temperature).
inline Decision decide(const EnvState& s, const PolicyParams& p, DecodeMode mode, Rng* rng,
                       std::vector<double>* score, int forced = 0) {
    const int n = s.inst->n;
    std::vector<int> cands;
    std::vector<Features> feats;
    std::vector<double> raw;
    for (int c = 1; c <= n; ++c) {
        if (!s.mask[c]) continue;
        cands.push_back(c);
        feats.push_back(featurize(s, c));
        raw.push_back(dot(p.weights, feats.back()));
    }
    if (cands.empty()) throw ContractError("policy_sample: no selectable customer");

    double top = -std::numeric_limits<double>::infinity();
    for (double r : raw) top = std::max(top, p.temperature * r);
    std::vector<double> prob(cands.size());
    double z = 0.0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
        prob[k] = std::exp(p.temperature * raw[k] - top);
        z += prob[k];
    }
    for (double& v : prob) v /= z;
    const double log_z = top + std::log(z);

    std::size_t pick = 0;
    if (forced != 0) {
        while (pick < cands.size() && cands[pick] != forced) ++pick;
        if (pick == cands.size()) throw ContractError("replayed action is not selectable");
    } else if (mode == DecodeMode::greedy) {
        for (std::size_t k = 1; k < cands.size(); ++k)
            if (raw[k] * p.temperature > raw[pick] * p.temperature) pick = k;
    } else {
        double u = rng->uniform();
        pick = cands.size() - 1;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (u < prob[k]) {
                pick = k;
                break;
            }
            u -= prob[k];
        }
    }

    if (score) {
        // d/dw = T (x_a - E[x]);  d/dT = <w, x_a> - E[<w, x>]
        double mean_raw = 0.0;
        for (std::size_t k = 0; k < cands.size(); ++k) mean_raw += prob[k] * raw[k];
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            double mean_f = 0.0;
            for (std::size_t k = 0; k < cands.size(); ++k) mean_f += prob[k] * feats[k][f];
            (*score)[f] += p.temperature * (feats[pick][f] - mean_f);
        }
        (*score)[kNumFeatures] += raw[pick] - mean_raw;
    }
    return {cands[pick], p.temperature * raw[pick] - log_z};
}

}  // namespace policy_detail

/// Samples (or takes the argmax, lowest id on ties) among unvisited customers.
inline Decision policy_sample(const EnvState& s, const PolicyParams& p, DecodeMode mode,
                              Rng& rng) {
    return policy_detail::decide(s, p, mode, &rng, nullptr);
}

struct Trajectory {
    std::vector<int> actions;
    std::vector<double> log_probs;
    double reward = 0.0;
    /// Sum over steps of the gradient of log pi; last entry is the temperature.
    std::vector<double> score = std::vector<double>(kNumFeatures + 1, 0.0);
};

inline Trajectory rollout(const Instance& inst, const PolicyParams& p, DecodeMode mode,
                          const ConstraintSemantics& sem, Rng& rng) {
    Trajectory tr;
    EnvState s = env_reset(inst);
    while (!env_done(s)) {
        const auto d = policy_detail::decide(s, p, mode, &rng, &tr.score);
        env_step(s, d.action);
        tr.actions.push_back(d.action);
        tr.log_probs.push_back(d.log_prob);
    }
    tr.reward = split_reward(inst, tr.actions, sem);
    return tr;
}

/// log pi(actions) under `p`, replaying the episode.
inline double trajectory_log_prob(const Instance& inst, const std::vector<int>& actions,
                                  const PolicyParams& p) {
    EnvState s = env_reset(inst);
    double total = 0.0;
    for (int a : actions) {
        total += policy_detail::decide(s, p, DecodeMode::greedy, nullptr, nullptr, a).log_prob;
        env_step(s, a);
    }
    return total;
}

/// Rollouts of one instance, sharing a baseline.
struct RolloutGroup {
    const Instance* inst = nullptr;
    std::vector<Trajectory> trajectories;
};

/// Mean of the rewards, computed so that identical rewards give exactly that
/// reward back.
inline double group_baseline(const std::vector<Trajectory>& ts) {
    const double ref = ts.front().reward;
    double acc = 0.0;
    for (const auto& t : ts) acc += t.reward - ref;
    return ref + acc / static_cast<double>(ts.size());
}

/// REINFORCE estimate: mean over trajectories of (R - b) * sum_t grad log pi.
/// Size F + 1; the last entry is the temperature component.
inline std::vector<double> policy_gradient(const std::vector<RolloutGroup>& groups) {
    std::vector<double> g(kNumFeatures + 1, 0.0);
    std::size_t count = 0;
    for (const auto& grp : groups) {
        const double b = group_baseline(grp.trajectories);
        for (const auto& t : grp.trajectories) {
            const double adv = t.reward - b;
            for (std::size_t k = 0; k < g.size(); ++k) g[k] += adv * t.score[k];
            ++count;
        }
    }
    for (double& v : g) v /= static_cast<double>(count);
    return g;
}

/// The function whose gradient policy_gradient estimates, with the
/// trajectories and baselines frozen.
inline double policy_surrogate(const std::vector<RolloutGroup>& groups, const PolicyParams& p) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& grp : groups) {
        const double b = group_baseline(grp.trajectories);
        for (const auto& t : grp.trajectories) {
            acc += (t.reward - b) * trajectory_log_prob(*grp.inst, t.actions, p);
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

// ------------------------------------------------------------------- training

struct TrainConfig {
    int n = 10;
    VariantFlags flags;
    ScaleProfile profile = ScaleProfile::n50();
    int rollouts_per_instance = 8;
    int batch_size = 64;
    int epochs = 50;
    double learning_rate = 1.0;
    double lr_decay = 0.1;
    std::vector<int> decay_epochs{40};  // lr *= lr_decay from each listed epoch on
    std::uint64_t seed = 0;
    ConstraintSemantics sem;
    int eval_instances = 100;
    bool train_temperature = false;
    double initial_temperature = 1.0;
};

inline double scheduled_lr(const TrainConfig& cfg, int epoch) {
    double lr = cfg.learning_rate;
    for (int e : cfg.decay_epochs)
        if (epoch >= e) lr *= cfg.lr_decay;
    return lr;
}

struct UpdateStats {
    double mean_reward = 0.0;
    double grad_norm = 0.0;
};

/// Collects K sampled rollouts per instance and returns them grouped.
inline std::vector<RolloutGroup> collect_rollouts(const std::vector<Instance>& batch,
                                                  const PolicyParams& p, int rollouts,
                                                  const ConstraintSemantics& sem, Rng& rng) {
    std::vector<RolloutGroup> groups;
    groups.reserve(batch.size());
    for (const auto& inst : batch) {
        RolloutGroup g{&inst, {}};
        for (int k = 0; k < rollouts; ++k)
            g.trajectories.push_back(rollout(inst, p, DecodeMode::sample, sem, rng));
        groups.push_back(std::move(g));
    }
    return groups;
}

/// Applies one ascent step from already collected rollouts.
inline UpdateStats apply_gradient(const std::vector<RolloutGroup>& groups, PolicyParams& p,
                                  double lr, bool train_temperature) {
    const auto g = policy_gradient(groups);
    UpdateStats st;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(g[k]))
            throw NumericError("reinforce_update: non-finite gradient component " +
                               std::to_string(k) + " (" +
                               (k < kNumFeatures ? std::string(feature_names()[k])
                                                 : std::string("temperature")) +
                               ")");
        if (k < kNumFeatures || train_temperature) norm2 += g[k] * g[k];
    }
    st.grad_norm = std::sqrt(norm2);
    for (std::size_t k = 0; k < kNumFeatures; ++k) p.weights[k] += lr * g[k];
    if (train_temperature) p.temperature = std::max(1e-3, p.temperature + lr * g[kNumFeatures]);

    double total = 0.0;
    std::size_t count = 0;
    for (const auto& grp : groups)
        for (const auto& t : grp.trajectories) {
            total += t.reward;
            ++count;
        }
    st.mean_reward = total / static_cast<double>(count);
    return st;
}

inline UpdateStats reinforce_update(const std::vector<Instance>& batch, PolicyParams& p,
                                    const TrainConfig& cfg, double lr, Rng& rng) {
    if (cfg.rollouts_per_instance < 2)
        throw ContractError("reinforce_update: need at least two rollouts per instance");
    const auto groups = collect_rollouts(batch, p, cfg.rollouts_per_instance, cfg.sem, rng);
    return apply_gradient(groups, p, lr, cfg.train_temperature);
}

/// Mean greedy split cost; an unsplittable tour counts as the penalty.
inline double evaluate_policy(const std::vector<Instance>& set, const PolicyParams& p,
                              const ConstraintSemantics& sem) {
    Rng unused(0);
    double total = 0.0;
    for (const auto& inst : set) total -= rollout(inst, p, DecodeMode::greedy, sem, unused).reward;
    return total / static_cast<double>(set.size());
}

inline std::vector<Instance> heldout_set(const TrainConfig& cfg) {
    std::vector<Instance> set;
    for (int k = 0; k < cfg.eval_instances; ++k)
        set.push_back(generate_instance(cfg.n, cfg.flags, cfg.profile,
                                        indexed_seed(cfg.seed, StreamTag::heldout, k)));
    return set;
}

struct CurvePoint {
    int epoch = 0;
    double mean_cost = 0.0;  // held-out greedy mean
    double grad_norm = 0.0;
};

struct TrainResult {
    PolicyParams params;
    std::vector<CurvePoint> curve;
};

inline TrainResult train(const TrainConfig& cfg) {
    if (cfg.n < 1 || cfg.batch_size < 1 || cfg.epochs < 0 || cfg.eval_instances < 1)
        throw ContractError("train: invalid configuration");
    if (cfg.rollouts_per_instance < 2)
        throw ContractError("train: need at least two rollouts per instance");
    if (!(cfg.initial_temperature > 0.0)) throw ContractError("train: temperature must be > 0");

    TrainResult res;
    res.params.temperature = cfg.initial_temperature;
    const auto heldout = heldout_set(cfg);
    Rng rollout_rng(cfg.seed, StreamTag::train_rollout);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<Instance> batch;
        batch.reserve(static_cast<std::size_t>(cfg.batch_size));
        for (int k = 0; k < cfg.batch_size; ++k)
            batch.push_back(generate_instance(
                cfg.n, cfg.flags, cfg.profile,
                indexed_seed(cfg.seed, StreamTag::train_batch,
                             static_cast<std::uint64_t>(epoch) * cfg.batch_size + k)));
        const auto st = reinforce_update(batch, res.params, cfg, scheduled_lr(cfg, epoch),
                                         rollout_rng);
        res.curve.push_back({epoch, evaluate_policy(heldout, res.params, cfg.sem), st.grad_norm});
    }
    return res;
}

// ---------------------------------------------------------------------- files

inline std::string config_digest(const TrainConfig& cfg) {
    nlohmann::json j = {
        {"n", cfg.n},
        {"variant", variant_name(cfg.flags)},
        {"profile", cfg.profile.name()},
        {"rollouts", cfg.rollouts_per_instance},
        {"batch", cfg.batch_size},
        {"epochs", cfg.epochs},
        {"lr", cfg.learning_rate},
        {"lr_decay", cfg.lr_decay},
        {"decay_epochs", cfg.decay_epochs},
        {"seed", cfg.seed},
        {"tw_mode", to_string(cfg.sem.tw_mode)},
        {"l_mode", to_string(cfg.sem.l_mode)},
        {"eval_instances", cfg.eval_instances},
        {"train_temperature", cfg.train_temperature},
    };
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string serialize_params(const PolicyParams& p, const std::string& digest) {
    nlohmann::json names = nlohmann::json::array();
    for (auto n : feature_names()) names.push_back(std::string(n));
    nlohmann::json j = {{"version", kFileVersion},
                        {"feature_names", names},
                        {"weights", p.weights},
                        {"temperature", p.temperature},
                        {"train_config_digest", digest}};
    return j.dump(2) + "\n";
}

inline PolicyParams parse_params(std::string_view text) {
    using namespace io_detail;
    const auto j = parse_json(text);
    if (integer(field(j, "version", "params"), "params.version") != kFileVersion)
        throw ParseError("params.version: unsupported version");
    const auto& names = field(j, "feature_names", "params");
    if (!names.is_array() || names.size() != kNumFeatures)
        throw ParseError("params.feature_names: expected " + std::to_string(kNumFeatures) +
                         " names");
    for (std::size_t k = 0; k < kNumFeatures; ++k)
        if (!names[k].is_string() || names[k].get<std::string>() != feature_names()[k])
            throw ParseError("params.feature_names[" + std::to_string(k) + "]: expected \"" +
                             std::string(feature_names()[k]) + "\"");
    const auto& w = field(j, "weights", "params");
    if (!w.is_array() || w.size() != kNumFeatures)
        throw ParseError("params.weights: expected " + std::to_string(kNumFeatures) + " numbers");
    PolicyParams p;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
        p.weights[k] = real(w[k], "params.weights[" + std::to_string(k) + "]");
        if (!std::isfinite(p.weights[k])) throw ParseError("params.weights: non-finite value");
    }
    p.temperature = real(field(j, "temperature", "params"), "params.temperature");
    if (!(p.temperature > 0.0) || !std::isfinite(p.temperature))
        throw ParseError("params.temperature: must be positive");
    return p;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream os;
    os << "epoch,mean_cost,grad_norm\n";
    for (const auto& c : curve)
        os << c.epoch << "," << format_real(c.mean_cost) << "," << format_real(c.grad_norm)
           << "\n";
    return os.str();
}

}  // namespace rfcs
