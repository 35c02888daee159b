#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "aglab/policy.hpp"
#include "aglab/screen_graph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Scratch directory per test case; rerun-safe.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) {
        dir = fs::temp_directory_path() / ("aglab-cli-" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    fs::path operator/(const std::string& p) const { return dir / p; }
};

std::string bin() {
    const char* b = std::getenv("AGLAB_BIN");
    REQUIRE_MESSAGE(b != nullptr, "AGLAB_BIN must point at the CLI binary");
    return b;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Runs the binary through the shell, capturing exit code and both streams.
// `prefix` lets a test set environment variables for one invocation.
RunResult run(const Scratch& s, const std::string& args, const std::string& prefix = "") {
    fs::path out = s / "stdout.txt", err = s / "stderr.txt";
    std::string cmd = prefix + " \"" + bin() + "\" " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const char* kSuiteConfig =
    R"({"counts": {"trivial": 2, "easy": 2}, "screens_range": [3, 8]})";
const char* kTrainConfig =
    R"({"iterations": 3, "tasks_per_iteration": 4, "group_size": 8,
        "feature_dim": 1024, "workers": 1, "global_seed": 9})";

// Generates the standard 4-task suite into the scratch dir.
fs::path make_suite(const Scratch& s) {
    spit(s / "s.json", kSuiteConfig);
    RunResult r = run(s, "gen-suite --config " + (s / "s.json").string() + " --seed 7 --out " +
                             (s / "tasks.json").string());
    REQUIRE(r.exit_code == 0);
    return s / "tasks.json";
}

}  // namespace

TEST_CASE("suite generation is deterministic and reports tier counts") {
    Scratch s("gen");
    spit(s / "s.json", kSuiteConfig);
    std::string base = "gen-suite --config " + (s / "s.json").string() + " --seed 7 --out ";
    RunResult r1 = run(s, base + (s / "a.json").string());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("trivial=2") != std::string::npos);
    CHECK(r1.out.find("easy=2") != std::string::npos);

    RunResult r2 = run(s, base + (s / "b.json").string());
    CHECK(r2.exit_code == 0);
    CHECK(slurp(s / "a.json") == slurp(s / "b.json"));

    // The file is a loadable suite with the requested composition.
    aglab::Suite suite = aglab::load_suite(s / "a.json");
    REQUIRE(suite.tasks.size() == 4);
    int trivial = 0, easy = 0;
    for (const aglab::SuiteTask& t : suite.tasks) {
        trivial += t.task.tier == aglab::Tier::Trivial;
        easy += t.task.tier == aglab::Tier::Easy;
    }
    CHECK(trivial == 2);
    CHECK(easy == 2);

    // A different seed produces a different suite.
    RunResult r3 = run(s, "gen-suite --config " + (s / "s.json").string() +
                              " --seed 8 --out " + (s / "c.json").string());
    CHECK(r3.exit_code == 0);
    CHECK(slurp(s / "c.json") != slurp(s / "a.json"));
}

TEST_CASE("configuration errors exit 2 and name the offending field") {
    Scratch s("cfgerr");
    spit(s / "neg.json", R"({"counts": {"easy": -1}})");
    RunResult neg = run(s, "gen-suite --config " + (s / "neg.json").string() + " --out " +
                               (s / "x.json").string());
    CHECK(neg.exit_code == 2);
    CHECK(neg.err.find("counts.easy") != std::string::npos);

    spit(s / "unk.json", R"({"counts": {"easy": 1}, "brnching_range": [2, 3]})");
    RunResult unk = run(s, "gen-suite --config " + (s / "unk.json").string() + " --out " +
                               (s / "x.json").string());
    CHECK(unk.exit_code == 2);
    CHECK(unk.err.find("brnching_range") != std::string::npos);

    RunResult missing = run(s, "gen-suite --config " + (s / "nope.json").string() +
                                   " --out " + (s / "x.json").string());
    CHECK(missing.exit_code == 2);

    // Train-side config validation and the worker env override share the code.
    fs::path suite = make_suite(s);
    spit(s / "t.json", kTrainConfig);
    std::string train = "train --config " + (s / "t.json").string() + " --suite " +
                        suite.string() + " --out " + (s / "run").string();
    RunResult ablate = run(s, train + " --ablate nothing");
    CHECK(ablate.exit_code == 2);
    CHECK(ablate.err.find("nothing") != std::string::npos);

    RunResult badenv = run(s, train, "AGLB_WORKERS=three");
    CHECK(badenv.exit_code == 2);
    CHECK(badenv.err.find("AGLB_WORKERS") != std::string::npos);

    spit(s / "bad.json", R"({"clip_epsilon": 2.5})");
    RunResult bad = run(s, "train --config " + (s / "bad.json").string() + " --suite " +
                               suite.string() + " --out " + (s / "run2").string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("clip_epsilon") != std::string::npos);
}

TEST_CASE("infeasible tier targets exit 3") {
    Scratch s("budget");
    // Hard tasks need 13+ oracle steps; 4 screens cannot host one.
    spit(s / "s.json", R"({"counts": {"hard": 1}, "screens_range": [2, 4]})");
    RunResult r = run(s, "gen-suite --config " + (s / "s.json").string() + " --out " +
                             (s / "x.json").string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("attempts") != std::string::npos);
}

TEST_CASE("training writes a self-describing, reproducible run directory") {
    Scratch s("train");
    fs::path suite = make_suite(s);
    spit(s / "t.json", kTrainConfig);
    std::string base = "train --config " + (s / "t.json").string() + " --suite " +
                       suite.string() + " --out ";

    RunResult r = run(s, base + (s / "run").string());
    CHECK(r.exit_code == 0);

    // metrics.jsonl: exactly `iterations` parseable lines, numbered 1..N.
    std::istringstream metrics(slurp(s / "run/metrics.jsonl"));
    std::string line;
    int lines = 0;
    while (std::getline(metrics, line)) {
        ++lines;
        json j = json::parse(line);
        CHECK(j["iter"].get<int>() == lines);
        CHECK(j["wall_ms"].get<long long>() == 0);
    }
    CHECK(lines == 3);

    // resolved_config.json echoes the effective config plus run identity.
    json cfg = json::parse(slurp(s / "run/resolved_config.json"));
    CHECK(cfg["group_size"].get<int>() == 8);
    CHECK(cfg["iterations"].get<int>() == 3);
    CHECK(cfg["learning_rate"].get<double>() == 0.05);  // default applied and echoed
    CHECK(cfg["suite_file"].get<std::string>() == suite.string());
    std::string hash = cfg["config_hash"].get<std::string>();
    CHECK(hash.size() == 16);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);

    // The final checkpoint loads and matches the configured feature space.
    aglab::Checkpoint ck = aglab::load_checkpoint(s / "run/checkpoint_final.bin");
    CHECK(ck.feature_dim == 1024);
    CHECK(ck.sidecar_config_hash == hash);
    CHECK(ck.sidecar_seed == 9);

    // Reruns and worker overrides cannot change the metrics stream.
    RunResult again = run(s, base + (s / "run_b").string());
    CHECK(again.exit_code == 0);
    CHECK(slurp(s / "run_b/metrics.jsonl") == slurp(s / "run/metrics.jsonl"));
    RunResult forked = run(s, base + (s / "run_c").string(), "AGLB_WORKERS=3");
    CHECK(forked.exit_code == 0);
    CHECK(slurp(s / "run_c/metrics.jsonl") == slurp(s / "run/metrics.jsonl"));

    // Real wall-clock timings live in the sidecar, one entry per iteration.
    std::istringstream timings(slurp(s / "run/timings.jsonl"));
    int timing_lines = 0;
    while (std::getline(timings, line)) {
        json j = json::parse(line);
        CHECK(j["iter"].get<int>() == ++timing_lines);
        CHECK(j["wall_ms"].get<long long>() >= 0);
    }
    CHECK(timing_lines == 3);
}

TEST_CASE("ablation flags disable exactly the chosen mechanisms") {
    Scratch s("ablate");
    fs::path suite = make_suite(s);
    spit(s / "t.json", kTrainConfig);
    std::string base = "train --config " + (s / "t.json").string() + " --suite " +
                       suite.string() + " --out ";

    RunResult spa = run(s, base + (s / "no_spa").string() + " --ablate spa");
    CHECK(spa.exit_code == 0);
    json cfg = json::parse(slurp(s / "no_spa/resolved_config.json"));
    CHECK(cfg["spa_alpha"].get<double>() == 0.0);
    CHECK(cfg["replay_fraction"].get<double>() == 0.25);
    CHECK(cfg["fcf_enabled"].get<bool>());
    CHECK(cfg["ablations"] == json::array({"spa"}));

    RunResult all = run(s, base + (s / "plain").string() + " --ablate all");
    CHECK(all.exit_code == 0);
    json plain = json::parse(slurp(s / "plain/resolved_config.json"));
    CHECK(plain["spa_alpha"].get<double>() == 0.0);
    CHECK(plain["replay_fraction"].get<double>() == 0.0);
    CHECK_FALSE(plain["fcf_enabled"].get<bool>());

    // Different effective config, different hash, different run.
    json full = json::parse(slurp(s / "no_spa/resolved_config.json"));
    CHECK(plain["config_hash"] != full["config_hash"]);
}

TEST_CASE("a non-finite training abort exits 4 with the iteration number") {
    Scratch s("nonfinite");
    spit(s / "s.json", R"({"counts": {"trivial": 4}, "screens_range": [3, 6]})");
    RunResult gen = run(s, "gen-suite --config " + (s / "s.json").string() +
                               " --seed 3 --out " + (s / "tasks.json").string());
    REQUIRE(gen.exit_code == 0);

    // kl_beta at the edge of double range: iteration 1 is exactly on-policy
    // (KL = 0), the first update drifts the policy, and iteration 2 overflows
    // the KL penalty into infinity.
    spit(s / "t.json",
         R"({"iterations": 4, "tasks_per_iteration": 4, "group_size": 8,
             "feature_dim": 1024, "workers": 1, "kl_beta": 1e308, "global_seed": 1})");
    RunResult r = run(s, "train --config " + (s / "t.json").string() + " --suite " +
                             (s / "tasks.json").string() + " --out " + (s / "run").string());
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("iteration 2") != std::string::npos);
}

TEST_CASE("evaluation and comparison consume checkpoints coherently") {
    Scratch s("eval");
    fs::path suite = make_suite(s);
    spit(s / "t.json", kTrainConfig);
    RunResult train = run(s, "train --config " + (s / "t.json").string() + " --suite " +
                                 suite.string() + " --out " + (s / "run").string());
    REQUIRE(train.exit_code == 0);
    std::string ckpt = (s / "run/checkpoint_final.bin").string();

    std::string eval_cmd = "eval --checkpoint " + ckpt + " --suite " + suite.string() +
                           " --trials 4 --seed 3 --report ";
    RunResult e1 = run(s, eval_cmd + (s / "r1.json").string());
    CHECK(e1.exit_code == 0);
    json rep = json::parse(slurp(s / "r1.json"));
    CHECK(rep["trials"].get<int>() == 4);
    CHECK(rep["tasks"].size() == 4);
    double prev = 0.0;
    for (const char* k : {"1", "2", "4"}) {
        double p = rep["aggregates"]["overall"]["pass_at"][k].get<double>();
        CHECK(p >= prev);
        prev = p;
    }

    RunResult e2 = run(s, eval_cmd + (s / "r2.json").string());
    CHECK(e2.exit_code == 0);
    CHECK(slurp(s / "r1.json") == slurp(s / "r2.json"));

    // Self-comparison: categories partition the suite, no one-sided results.
    RunResult cmp = run(s, "compare --a " + ckpt + " --b " + ckpt + " --suite " +
                               suite.string() + " --report " + (s / "cmp.json").string());
    CHECK(cmp.exit_code == 0);
    json c = json::parse(slurp(s / "cmp.json"));
    int bc = c["categories"]["both_correct"]["count"].get<int>();
    int bw = c["categories"]["both_wrong"]["count"].get<int>();
    int others = c["categories"]["others"]["count"].get<int>();
    CHECK(bc + bw + others == 4);
    CHECK(others == 0);

    // A checkpoint from a different feature space is rejected with exit 5.
    spit(s / "t2.json",
         R"({"iterations": 1, "tasks_per_iteration": 2, "group_size": 4,
             "feature_dim": 2048, "workers": 1, "global_seed": 9})");
    RunResult train2 = run(s, "train --config " + (s / "t2.json").string() + " --suite " +
                                  suite.string() + " --out " + (s / "other").string());
    REQUIRE(train2.exit_code == 0);
    RunResult mism = run(s, "compare --a " + ckpt + " --b " +
                                (s / "other/checkpoint_final.bin").string() + " --suite " +
                                suite.string() + " --report " + (s / "bad.json").string());
    CHECK(mism.exit_code == 5);

    RunResult gone = run(s, "eval --checkpoint " + (s / "ghost.bin").string() + " --suite " +
                                suite.string() + " --report " + (s / "r3.json").string());
    CHECK(gone.exit_code == 5);
}

TEST_CASE("xml compression reads files or stdin and prints the compressed view") {
    Scratch s("xml");
    const char* xml =
        "<hierarchy>"
        "<node class='android.widget.FrameLayout' bounds='[0,0][1080,2400]'"
        " text='' content-desc=''>"
        "<node class='android.widget.TextView' bounds='[221,1095][858,1222]'"
        " text='Audio Recorder' content-desc='' clickable='true'/>"
        "</node>"
        "</hierarchy>";
    spit(s / "page.xml", xml);

    RunResult r = run(s, "compress-xml --in " + (s / "page.xml").string() +
                             " --width 1080 --height 2400");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("TextView;;Audio Recorder;[221,1095][858,1222];clickable") !=
          std::string::npos);

    // '-' reads the document from stdin.
    RunResult piped = run(s, "compress-xml --in -",
                          "cat " + (s / "page.xml").string() + " |");
    CHECK(piped.exit_code == 0);
    CHECK(piped.out == r.out);

    RunResult missing = run(s, "compress-xml --in " + (s / "ghost.xml").string());
    CHECK(missing.exit_code == 2);

    spit(s / "broken.xml", "<hierarchy><node bounds='[0,0][10,10]'></hierarchy>");
    RunResult broken = run(s, "compress-xml --in " + (s / "broken.xml").string());
    CHECK(broken.exit_code != 0);
}
