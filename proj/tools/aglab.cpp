#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aglab/axml.hpp"
#include "aglab/config.hpp"
#include "aglab/errors.hpp"
#include "aglab/evalkit.hpp"
#include "aglab/trainer.hpp"

namespace {

using namespace aglab;

// 0 ok, 1 unexpected, 2 bad config/usage, 3 generation over budget,
// 4 non-finite training value, 5 checkpoint mismatch.
constexpr int kExitConfig = 2;
constexpr int kExitOverBudget = 3;
constexpr int kExitNonFinite = 4;
constexpr int kExitCheckpoint = 5;

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("invalid JSON in " + path);
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

// --workers flag > AGLB_WORKERS > config value.
void apply_workers_override(TrainConfig& cfg, int flag_workers) {
    if (flag_workers > 0) {
        cfg.workers = flag_workers;
        return;
    }
    if (const char* env = std::getenv("AGLB_WORKERS")) {
        try {
            size_t used = 0;
            int v = std::stoi(env, &used);
            if (used != std::string(env).size() || v < 1) throw std::invalid_argument("");
            cfg.workers = v;
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad AGLB_WORKERS value \"") + env + "\"");
        }
    }
}

struct GenSuiteArgs {
    std::string config_path;
    std::string out_path;
    uint64_t seed = 0;
};

int cmd_gen_suite(const GenSuiteArgs& args) {
    SuiteConfig cfg = suite_config_from_json(load_json_file(args.config_path));
    Suite suite = generate_suite(cfg, args.seed);
    save_suite(args.out_path, suite);

    std::map<std::string, int> per_tier;
    for (const SuiteTask& t : suite.tasks) per_tier[std::string(tier_name(t.task.tier))]++;
    std::cout << "wrote " << suite.tasks.size() << " tasks to " << args.out_path << " (";
    bool first = true;
    for (const auto& [tier, count] : per_tier) {
        std::cout << (first ? "" : ", ") << tier << "=" << count;
        first = false;
    }
    std::cout << ")\n";
    return 0;
}

struct TrainArgs {
    std::string config_path;
    std::string suite_path;
    std::string out_dir;
    std::vector<std::string> ablations;
    uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    bool log_trajectories = false;
};

int cmd_train(const TrainArgs& args) {
    TrainConfig cfg = args.config_path.empty()
                          ? TrainConfig{}
                          : train_config_from_json(load_json_file(args.config_path));
    if (args.seed_given) cfg.global_seed = args.seed;
    apply_workers_override(cfg, args.workers);
    if (args.log_trajectories) cfg.log_trajectories = true;
    for (const std::string& name : args.ablations)
        apply_ablation(cfg, ablation_from_name(name));

    Suite suite = load_suite(args.suite_path);

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path out(args.out_dir);

    nlohmann::json resolved = train_config_to_json(cfg);
    resolved["suite_file"] = args.suite_path;
    resolved["ablations"] = args.ablations;
    const std::string hash = config_hash(resolved);
    resolved["config_hash"] = hash;
    write_text(out / "resolved_config.json", resolved.dump(2) + "\n");

    std::ofstream metrics(out / "metrics.jsonl", std::ios::binary);
    std::ofstream timings(out / "timings.jsonl", std::ios::binary);
    std::ofstream rollouts;
    if (cfg.log_trajectories) rollouts.open(out / "rollouts.jsonl", std::ios::binary);

    Trainer trainer(suite, cfg);
    for (int i = 0; i < cfg.iterations; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        IterationMetrics m = trainer.run_iteration();
        auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        metrics << m.to_json_line() << '\n';
        timings << nlohmann::json{{"iter", m.iter}, {"wall_ms", wall}}.dump() << '\n';
        if (cfg.log_trajectories) {
            for (const Trajectory& t : trainer.last_fresh())
                rollouts << trajectory_log_line(t) << '\n';
            for (const Trajectory& t : trainer.last_replayed())
                rollouts << trajectory_log_line(t) << '\n';
        }
        std::cout << "iter " << m.iter << "/" << cfg.iterations << " success=" << m.success_rate
                  << " loss=" << m.loss << " buffer=" << m.buffer_size
                  << " removed=" << m.removed_tasks << "\n";

        if (cfg.checkpoint_every > 0 && m.iter % cfg.checkpoint_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "checkpoint_%06d.bin", m.iter);
            save_checkpoint(out / name, trainer.params(), cfg.policy(), cfg.global_seed, hash);
        }
    }
    save_checkpoint(out / "checkpoint_final.bin", trainer.params(), cfg.policy(),
                    cfg.global_seed, hash);
    std::cout << "done: " << (out / "checkpoint_final.bin").string() << "\n";
    return 0;
}

struct EvalArgs {
    std::string checkpoint_path;
    std::string suite_path;
    std::string report_path;
    int trials = 8;
    double temperature = 1.0;
    uint64_t seed = 0;
    int workers = 0;
    int horizon = 50;
};

int cmd_eval(const EvalArgs& args) {
    Checkpoint ck = load_checkpoint(args.checkpoint_path);
    Suite suite = load_suite(args.suite_path);

    PolicyConfig cfg;
    cfg.feature_dim = ck.feature_dim;
    cfg.features_per_candidate = ck.features_per_candidate;

    TrainConfig workers_helper;
    workers_helper.workers = args.workers;
    apply_workers_override(workers_helper, args.workers);

    EvalReport report = evaluate(suite, ck.params, cfg, args.trials, args.temperature,
                                 args.seed, workers_helper.resolved_workers(), args.horizon);
    std::string text = eval_report_json(report);
    if (!args.report_path.empty()) write_text(args.report_path, text + "\n");

    std::cout << "pass@1 " << pass_at_k(report.per_task, 1);
    if (args.trials >= 8) std::cout << "  pass@8 " << pass_at_k(report.per_task, 8);
    std::cout << "  (" << report.per_task.size() << " tasks, " << args.trials << " trials)\n";
    return 0;
}

struct CompareArgs {
    std::string a_path;
    std::string b_path;
    std::string suite_path;
    std::string report_path;
    int horizon = 50;
};

int cmd_compare(const CompareArgs& args) {
    Checkpoint a = load_checkpoint(args.a_path);
    Checkpoint b = load_checkpoint(args.b_path);
    if (a.feature_dim != b.feature_dim ||
        a.features_per_candidate != b.features_per_candidate)
        throw CheckpointMismatch("checkpoints use different feature spaces");
    Suite suite = load_suite(args.suite_path);

    PolicyConfig cfg;
    cfg.feature_dim = a.feature_dim;
    cfg.features_per_candidate = a.features_per_candidate;

    CompareReport rep = compare_policies(suite, a.params, b.params, cfg, args.horizon);
    std::string text = compare_report_json(rep);
    if (!args.report_path.empty()) write_text(args.report_path, text + "\n");

    std::cout << "both_correct " << rep.both_correct << " (a_wins " << rep.a_wins << ", b_wins "
              << rep.b_wins << ", ties " << rep.ties << ")  both_wrong " << rep.both_wrong
              << "  others " << rep.others << "\n";
    return 0;
}

struct CompressArgs {
    std::string in_path;
    int width = 1080;
    int height = 2400;
    bool keep_offscreen = false;
};

int cmd_compress_xml(const CompressArgs& args) {
    std::string xml;
    if (args.in_path.empty() || args.in_path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        xml = ss.str();
    } else {
        std::ifstream in(args.in_path, std::ios::binary);
        if (!in) throw ConfigError("cannot read " + args.in_path);
        std::stringstream ss;
        ss << in.rdbuf();
        xml = ss.str();
    }
    std::vector<axml::UiNode> roots = axml::parse_hierarchy_dump(xml);
    axml::CompressedUi ui =
        axml::compress_forest(roots, args.width, args.height, args.keep_offscreen);
    std::string text = ui.to_text();
    if (!text.empty()) std::cout << text << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic mobile-GUI RL lab: task generation, GRPO-style training with "
                 "length-shaped advantages, adaptive replay and task filtering, evaluation."};
    app.require_subcommand(1);

    GenSuiteArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-suite", "Generate a task suite JSON file");
    gen_cmd->add_option("--config", gen.config_path, "Suite config JSON")->required();
    gen_cmd->add_option("--seed", gen.seed, "Suite seed");
    gen_cmd->add_option("--out", gen.out_path, "Output suite file")->required();

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "Train a policy on a task suite");
    train_cmd->add_option("--config", train.config_path, "Train config JSON (defaults apply)");
    train_cmd->add_option("--suite", train.suite_path, "Task suite file")->required();
    train_cmd->add_option("--out", train.out_dir, "Run directory")->required();
    train_cmd->add_option("--seed", train.seed, "Override global seed")
        ->each([&](const std::string&) { train.seed_given = true; });
    train_cmd->add_option("--ablate", train.ablations, "Disable mechanisms: spa|adapr|fcf|all");
    train_cmd->add_option("--workers", train.workers, "Rollout worker threads");
    train_cmd->add_flag("--log-trajectories", train.log_trajectories,
                        "Write rollouts.jsonl with every sampled trajectory");

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint with pass@k");
    eval_cmd->add_option("--checkpoint", eval.checkpoint_path, "Policy checkpoint")->required();
    eval_cmd->add_option("--suite", eval.suite_path, "Task suite file")->required();
    eval_cmd->add_option("--report", eval.report_path, "Write the full report JSON here");
    eval_cmd->add_option("--trials", eval.trials, "Trials per task")
        ->check(CLI::Range(1, 1024));
    eval_cmd->add_option("--temperature", eval.temperature, "Sampling temperature");
    eval_cmd->add_option("--seed", eval.seed, "Evaluation seed");
    eval_cmd->add_option("--workers", eval.workers, "Rollout worker threads");
    eval_cmd->add_option("--horizon", eval.horizon, "Step limit per episode");

    CompareArgs compare;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Greedy head-to-head comparison of two checkpoints");
    compare_cmd->add_option("--a", compare.a_path, "Checkpoint A")->required();
    compare_cmd->add_option("--b", compare.b_path, "Checkpoint B")->required();
    compare_cmd->add_option("--suite", compare.suite_path, "Task suite file")->required();
    compare_cmd->add_option("--report", compare.report_path, "Write the report JSON here");
    compare_cmd->add_option("--horizon", compare.horizon, "Step limit per episode");

    CompressArgs compress;
    CLI::App* compress_cmd =
        app.add_subcommand("compress-xml", "Compress a view-hierarchy XML dump to text");
    compress_cmd->add_option("--in", compress.in_path, "Input XML ('-' or empty for stdin)");
    compress_cmd->add_option("--width", compress.width, "Screen width");
    compress_cmd->add_option("--height", compress.height, "Screen height");
    compress_cmd->add_flag("--keep-offscreen", compress.keep_offscreen,
                           "Skip the offscreen filter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen_suite(gen);
        if (train_cmd->parsed()) return cmd_train(train);
        if (eval_cmd->parsed()) return cmd_eval(eval);
        if (compare_cmd->parsed()) return cmd_compare(compare);
        if (compress_cmd->parsed()) return cmd_compress_xml(compress);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GenerationOverBudget& e) {
        std::cerr << "generation over budget: " << e.what() << "\n";
        return kExitOverBudget;
    } catch (const NonFiniteValue& e) {
        std::cerr << "non-finite value at iteration " << e.iteration << ": " << e.what()
                  << "\n";
        return kExitNonFinite;
    } catch (const CheckpointMismatch& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return kExitCheckpoint;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
