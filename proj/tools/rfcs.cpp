// rfcs: generate instances, solve, train, validate and benchmark.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 infeasible or refused,
// 4 internal invariant breach.

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rfcs/rfcs.hpp"

namespace fs = std::filesystem;
using namespace rfcs;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kRefused = 3, kInternal = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// --seed wins, then RFCS_SEED, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    const char* env = std::getenv("RFCS_SEED");
    if (!env || !*env) return 0;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-')
        throw UsageError(std::string("RFCS_SEED is not an unsigned integer: ") + env);
    return v;
}

VariantFlags variant_or_usage(const std::string& name) {
    if (auto f = parse_variant(name)) return *f;
    std::string msg = "unknown variant '" + name + "'; expected one of:";
    for (auto v : variant_names()) msg += " " + std::string(v);
    msg += " (a backhaul variant may add MB for mixed backhaul, e.g. VRPMB)";
    throw UsageError(msg);
}

ScaleProfile profile_or_usage(const std::string& s) {
    if (auto p = parse_profile(s)) return *p;
    throw UsageError("unknown profile '" + s + "'; expected n50, n100 or custom(Q)");
}

Method method_or_usage(const std::string& s) {
    auto m = parse_method(s);
    if (!m)
        throw UsageError("unknown method '" + s +
                         "'; expected nn, nn+ls-split, nn+ls-tsp, oracle or policy:<file>");
    if (m->kind == Method::Kind::policy) m->params = parse_params(read_file(m->param_file));
    return *m;
}

const std::map<std::string, ConstraintSemantics::TimeWindow> kTwModes = {
    {"travel_time", ConstraintSemantics::TimeWindow::travel_time},
    {"paper_literal", ConstraintSemantics::TimeWindow::paper_literal}};
const std::map<std::string, ConstraintSemantics::Limit> kLimitModes = {
    {"include_return", ConstraintSemantics::Limit::include_return},
    {"path_only", ConstraintSemantics::Limit::path_only}};

void add_semantics(CLI::App* cmd, ConstraintSemantics& sem) {
    cmd->add_option("--tw-mode", sem.tw_mode, "Time-window clock rule")
        ->transform(CLI::CheckedTransformer(kTwModes, CLI::ignore_case));
    cmd->add_option("--l-mode", sem.l_mode, "Distance-limit rule")
        ->transform(CLI::CheckedTransformer(kLimitModes, CLI::ignore_case));
}

std::string instance_file_name(const std::string& variant, int n, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-n%d-%04d.json", variant.c_str(), n, index);
    return buf;
}

// ----------------------------------------------------------------------- gen

struct GenArgs {
    int n = 50;
    std::string variant = "CVRP";
    int count = 1;
    std::optional<std::uint64_t> seed;
    std::string profile;
    std::string out = ".";
};

int cmd_gen(const GenArgs& a) {
    const auto flags = variant_or_usage(a.variant);
    if (a.n < 1) throw UsageError("--n must be at least 1");
    if (a.count < 1) throw UsageError("--count must be at least 1");
    const auto profile = a.profile.empty() ? default_profile(a.n) : profile_or_usage(a.profile);
    const auto seed = resolve_seed(a.seed);

    fs::create_directories(a.out);
    nlohmann::json files = nlohmann::json::array();
    for (int i = 0; i < a.count; ++i) {
        const auto s = indexed_seed(seed, StreamTag::instance_index, static_cast<std::uint64_t>(i));
        const auto inst = generate_instance(a.n, flags, profile, s);
        const auto name = instance_file_name(variant_name(flags), a.n, i);
        write_file((fs::path(a.out) / name).string(), serialize_instance(inst));
        files.push_back({{"file", name}, {"seed", s}});
    }
    const nlohmann::json manifest = {{"version", kFileVersion},
                                     {"variant", variant_name(flags)},
                                     {"n", a.n},
                                     {"profile", profile.name()},
                                     {"seed", seed},
                                     {"count", a.count},
                                     {"instances", files}};
    write_file((fs::path(a.out) / "manifest.json").string(), manifest.dump(2) + "\n");
    std::cout << "wrote " << a.count << " instance(s) to " << a.out << "\n";
    return kOk;
}

// --------------------------------------------------------------------- solve

struct SolveArgs {
    std::string instance;
    std::string method = "nn+ls-split";
    ConstraintSemantics sem;
    std::uint64_t budget = 20000;
    std::optional<std::uint64_t> seed;
    int samples = 0;
    bool reversed = false;
    std::string out;
};

int cmd_solve(const SolveArgs& a) {
    const auto m = method_or_usage(a.method);
    const auto inst = parse_instance(read_file(a.instance));
    SolveOptions opt;
    opt.sem = a.sem;
    opt.budget = a.budget;
    opt.seed = resolve_seed(a.seed);
    opt.policy_samples = a.samples;
    opt.try_reversed = a.reversed;

    const auto t0 = std::chrono::steady_clock::now();
    const auto out = solve_with_method(inst, m, opt);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!out.feasible) {
        std::cerr << "rfcs: no feasible solution found for " << a.instance << "\n";
        return kRefused;
    }
    const auto check = validate_solution(inst, out.solution, a.sem);
    if (!check.feasible()) {
        std::cerr << "rfcs: internal error: " << m.name() << " produced a solution with "
                  << check.violations.size() << " violation(s)\n";
        return kInternal;
    }

    const auto text = serialize_solution(out.solution);
    if (a.out.empty()) std::cout << text;
    else write_file(a.out, text);
    std::cerr << kReportHeader << "row,0," << variant_name(inst.flags) << "," << m.name() << ","
              << format_real(check.cost) << ",1,1," << format_real(ms) << ",\n";
    return kOk;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
    TrainConfig cfg;
    std::string variant = "CVRP";
    std::string profile;
    std::optional<std::uint64_t> seed;
    std::string out = "params.json";
    std::string curve;
    bool quiet = false;
};

int cmd_train(TrainArgs a) {
    a.cfg.flags = variant_or_usage(a.variant);
    a.cfg.profile = a.profile.empty() ? default_profile(a.cfg.n) : profile_or_usage(a.profile);
    a.cfg.seed = resolve_seed(a.seed);
    if (a.cfg.rollouts_per_instance < 2) throw UsageError("--rollouts must be at least 2");

    const double untrained = evaluate_policy(heldout_set(a.cfg), PolicyParams{}, a.cfg.sem);
    const auto res = train(a.cfg);
    if (!a.quiet)
        for (const auto& c : res.curve)
            std::cerr << "epoch " << c.epoch << "  mean_cost " << c.mean_cost << "  grad_norm "
                      << c.grad_norm << "\n";

    write_file(a.out, serialize_params(res.params, config_digest(a.cfg)));
    const std::string curve =
        a.curve.empty() ? fs::path(a.out).replace_extension(".curve.csv").string() : a.curve;
    write_file(curve, curve_csv(res.curve));

    std::cout << "untrained held-out mean cost " << untrained << "\n";
    if (!res.curve.empty())
        std::cout << "trained held-out mean cost   " << res.curve.back().mean_cost << "\n";
    std::cout << "wrote " << a.out << " and " << curve << "\n";
    return kOk;
}

// --------------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<std::string> methods = {"nn", "nn+ls-split", "nn+ls-tsp"};
    std::vector<std::string> variants = {"CVRP"};
    int n = 50;
    int count = 10;
    std::optional<std::uint64_t> seed;
    std::string reference;
    std::string profile;
    ConstraintSemantics sem;
    std::uint64_t budget = 20000;
    int samples = 0;
    int jobs = 1;
    std::string out;
    std::string solutions;
};

int cmd_bench(const BenchArgs& a) {
    BenchConfig cfg;
    if (a.variants.size() == 1 && a.variants[0] == "all") {
        for (auto v : variant_names()) cfg.variants.push_back(*parse_variant(v));
    } else {
        for (const auto& v : a.variants) cfg.variants.push_back(variant_or_usage(v));
    }
    for (const auto& m : a.methods) cfg.methods.push_back(method_or_usage(m));
    if (a.n < 1 || a.count < 1) throw UsageError("--n and --count must be at least 1");
    cfg.n = a.n;
    cfg.count = a.count;
    cfg.seed = resolve_seed(a.seed);
    cfg.reference = a.reference;
    if (!a.profile.empty()) cfg.profile = profile_or_usage(a.profile);
    cfg.options.sem = a.sem;
    cfg.options.budget = a.budget;
    cfg.options.seed = cfg.seed;
    cfg.options.policy_samples = a.samples;
    cfg.jobs = a.jobs;
    if (!cfg.reference.empty()) {
        bool known = false;
        for (const auto& m : cfg.methods) known = known || m.name() == cfg.reference;
        if (!known) throw UsageError("--reference must be one of the --methods");
    }

    const auto rep = run_bench(cfg);
    if (!a.out.empty()) write_file(a.out, report_csv(rep));
    if (!a.solutions.empty()) {
        fs::create_directories(a.solutions);
        for (const auto& r : rep.rows) {
            if (!r.feasible) continue;
            std::string method = r.method;
            for (char& c : method)
                if (c == '/' || c == ':' || c == '+') c = '_';
            const auto name = r.variant + "-" + std::to_string(r.instance) + "-" + method + ".json";
            write_file((fs::path(a.solutions) / name).string(), serialize_solution(r.solution));
        }
    }
    std::cout << report_table(rep);
    if (rep.ok) return kOk;
    for (const auto& r : rep.rows)
        if (r.feasible && !r.valid) return kInternal;
    return kRefused;
}

// ------------------------------------------------------------------ validate

struct ValidateArgs {
    std::string instance;
    std::string solution;
    ConstraintSemantics sem;
};

int cmd_validate(const ValidateArgs& a) {
    const auto inst = parse_instance(read_file(a.instance));
    const auto sol = parse_solution(read_file(a.solution));
    ValidationReport rep;
    try {
        rep = validate_solution(inst, sol, a.sem);
    } catch (const StructuralError& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return kRefused;
    }
    for (const auto& v : rep.violations) {
        std::cout << "violation " << to_string(v.kind);
        if (v.route >= 0) std::cout << " route " << v.route;
        if (v.customer >= 0) std::cout << " customer " << v.customer;
        std::cout << "\n";
    }
    if (std::isfinite(sol.cost) && std::abs(sol.cost - rep.cost) > 1e-6 * std::max(1.0, rep.cost))
        std::cout << "note: recorded cost " << format_real(sol.cost) << " differs from recomputed "
                  << format_real(rep.cost) << "\n";
    if (!rep.feasible()) {
        std::cout << "infeasible: " << rep.violations.size() << " violation(s)\n";
        return kRefused;
    }
    std::cout << "feasible cost " << format_real(rep.cost) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Route-first, cluster-second toolkit for capacitated VRP variants"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate seeded instances");
    g->add_option("--n", gen.n, "Customers per instance")->required();
    g->add_option("--variant", gen.variant, "Variant name, e.g. CVRP or OVRPBLTW")->required();
    g->add_option("--count", gen.count, "Number of instances")->capture_default_str();
    g->add_option("--seed", gen.seed, "Base seed (default: RFCS_SEED or 0)");
    g->add_option("--profile", gen.profile, "n50, n100 or custom(Q)");
    g->add_option("--out", gen.out, "Output directory")->capture_default_str();

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve one instance file");
    s->add_option("instance", solve.instance, "Instance JSON")->required();
    s->add_option("--method", solve.method,
                  "nn, nn+ls-split, nn+ls-tsp, oracle or policy:<params.json>")
        ->capture_default_str();
    add_semantics(s, solve.sem);
    s->add_option("--budget", solve.budget, "Local-search evaluations")->capture_default_str();
    s->add_option("--seed", solve.seed, "Search seed (default: RFCS_SEED or 0)");
    s->add_option("--samples", solve.samples, "Extra sampled policy rollouts")->capture_default_str();
    s->add_flag("--reversed", solve.reversed, "Also try reversed rotations before splitting");
    s->add_option("--out", solve.out, "Solution file (default: stdout)");

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train the linear policy with REINFORCE");
    t->add_option("--n", tr.cfg.n, "Customers per instance")->capture_default_str();
    t->add_option("--variant", tr.variant, "Variant name")->capture_default_str();
    t->add_option("--profile", tr.profile, "n50, n100 or custom(Q)");
    t->add_option("--epochs", tr.cfg.epochs, "Epochs (one batch each)")->capture_default_str();
    t->add_option("--batch", tr.cfg.batch_size, "Instances per batch")->capture_default_str();
    t->add_option("--rollouts", tr.cfg.rollouts_per_instance, "Sampled rollouts per instance")
        ->capture_default_str();
    t->add_option("--lr", tr.cfg.learning_rate, "Initial learning rate")->capture_default_str();
    t->add_option("--lr-decay", tr.cfg.lr_decay, "Factor applied at each decay epoch")
        ->capture_default_str();
    t->add_option("--decay-epochs", tr.cfg.decay_epochs, "Epochs at which the rate decays")
        ->delimiter(',');
    t->add_option("--eval", tr.cfg.eval_instances, "Held-out instances")->capture_default_str();
    t->add_flag("--train-temperature", tr.cfg.train_temperature, "Also learn the temperature");
    t->add_option("--temperature", tr.cfg.initial_temperature, "Initial temperature")
        ->capture_default_str();
    add_semantics(t, tr.cfg.sem);
    t->add_option("--seed", tr.seed, "Training seed (default: RFCS_SEED or 0)");
    t->add_option("--out", tr.out, "Parameter file")->capture_default_str();
    t->add_option("--curve", tr.curve, "Learning-curve CSV (default: next to --out)");
    t->add_flag("--quiet", tr.quiet, "No per-epoch log");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Run a method x variant benchmark");
    b->add_option("--methods", bench.methods, "Comma-separated methods")->delimiter(',');
    b->add_option("--variants", bench.variants, "Comma-separated variants, or all")
        ->delimiter(',');
    b->add_option("--n", bench.n, "Customers per instance")->capture_default_str();
    b->add_option("--count", bench.count, "Instances per variant")->capture_default_str();
    b->add_option("--seed", bench.seed, "Base seed (default: RFCS_SEED or 0)");
    b->add_option("--reference", bench.reference, "Method used for gaps (default: first)");
    b->add_option("--profile", bench.profile, "n50, n100 or custom(Q)");
    add_semantics(b, bench.sem);
    b->add_option("--budget", bench.budget, "Local-search evaluations")->capture_default_str();
    b->add_option("--samples", bench.samples, "Extra sampled policy rollouts");
    b->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
    b->add_option("--out", bench.out, "Report CSV");
    b->add_option("--solutions", bench.solutions, "Directory for per-row solution files");

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "Check a solution against an instance");
    v->add_option("instance", val.instance, "Instance JSON")->required();
    v->add_option("solution", val.solution, "Solution JSON")->required();
    add_semantics(v, val.sem);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*s) return cmd_solve(solve);
        if (*t) return cmd_train(tr);
        if (*b) return cmd_bench(bench);
        if (*v) return cmd_validate(val);
    } catch (const UsageError& e) {
        std::cerr << "rfcs: " << e.what() << "\n";
        return kUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "rfcs: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "rfcs: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "rfcs: " << e.what() << "\n";
        return kIo;
    } catch (const RefusalError& e) {
        std::cerr << "rfcs: refused: " << e.what() << "\n";
        return kRefused;
    } catch (const ContractError& e) {
        std::cerr << "rfcs: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "rfcs: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
