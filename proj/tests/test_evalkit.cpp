#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "json.hpp"

#include "aglab/evalkit.hpp"
#include "aglab/trainer.hpp"

using namespace aglab;

namespace {

EvalTaskResult task_with_mask(std::string id, std::initializer_list<int> mask) {
    EvalTaskResult r;
    r.task_id = std::move(id);
    for (int m : mask) r.trials.push_back({m != 0, 5});
    return r;
}

Suite eval_suite(uint64_t seed) {
    SuiteConfig cfg;
    cfg.counts = {3, 2, 0, 0, 1};
    cfg.screens_range = {3, 10};
    return generate_suite(cfg, seed);
}

}  // namespace

TEST_CASE("pass@k counts a task once any of its first k trials succeeds") {
    std::vector<EvalTaskResult> one = {task_with_mask("t", {0, 0, 1, 0, 0, 0, 0, 0})};
    CHECK(pass_at_k(one, 1) == 0.0);
    CHECK(pass_at_k(one, 2) == 0.0);
    CHECK(pass_at_k(one, 3) == 1.0);
    CHECK(pass_at_k(one, 4) == 1.0);
    CHECK(pass_at_k(one, 8) == 1.0);

    std::vector<EvalTaskResult> three = {task_with_mask("a", {1, 0, 0, 0, 0, 0, 0, 0}),
                                         task_with_mask("b", {0, 0, 0, 0, 0, 0, 0, 0}),
                                         task_with_mask("c", {0, 1, 0, 0, 0, 0, 0, 0})};
    CHECK(pass_at_k(three, 1) == doctest::Approx(1.0 / 3));
    CHECK(pass_at_k(three, 2) == doctest::Approx(2.0 / 3));
    CHECK(pass_at_k(three, 8) == doctest::Approx(2.0 / 3));

    // Monotone in k for arbitrary masks.
    Rng rng(0xE7A1ull);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<EvalTaskResult> tasks;
        int n = 1 + (int)rng.uniform_int(0, 9);
        for (int i = 0; i < n; ++i) {
            EvalTaskResult r;
            r.task_id = std::to_string(i);
            for (int j = 0; j < 8; ++j) r.trials.push_back({rng.uniform01() < 0.3, j + 1});
            tasks.push_back(std::move(r));
        }
        double prev = 0.0;
        int any = 0;
        for (const EvalTaskResult& t : tasks) {
            bool s = false;
            for (const EvalTrial& tr : t.trials) s = s || tr.success;
            any += s;
        }
        for (int k = 1; k <= 8; ++k) {
            double p = pass_at_k(tasks, k);
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(prev == doctest::Approx(double(any) / n));
    }
}

TEST_CASE("evaluation runs the configured trials deterministically") {
    Suite suite = eval_suite(0xEAAull);
    PolicyConfig cfg;
    cfg.feature_dim = 4096;
    PolicyParams params = make_params(cfg);
    Rng wrng(0x91ull);
    for (double& w : params.weights) w = (wrng.uniform01() - 0.5) * 0.2;

    EvalReport rep = evaluate(suite, params, cfg, 8, 1.0, 42, 1, 50);
    CHECK(rep.trials == 8);
    CHECK(rep.temperature == 1.0);
    REQUIRE(rep.per_task.size() == suite.tasks.size());
    for (size_t i = 0; i < rep.per_task.size(); ++i) {
        const EvalTaskResult& r = rep.per_task[i];
        CHECK(r.task_id == suite.tasks[i].task.task_id);
        CHECK(r.tier == suite.tasks[i].task.tier);
        REQUIRE(r.trials.size() == 8);
        for (const EvalTrial& t : r.trials) {
            CHECK(t.steps >= 1);
            CHECK(t.steps <= 50);
        }
        if (r.tier == Tier::Unsolvable)
            for (const EvalTrial& t : r.trials) CHECK_FALSE(t.success);
    }

    // Same call twice and across worker counts: byte-identical report.
    std::string json = eval_report_json(rep);
    CHECK(eval_report_json(evaluate(suite, params, cfg, 8, 1.0, 42, 1, 50)) == json);
    CHECK(eval_report_json(evaluate(suite, params, cfg, 8, 1.0, 42, 4, 50)) == json);

    // A different eval seed gives a different sampling history somewhere.
    CHECK(eval_report_json(evaluate(suite, params, cfg, 8, 1.0, 43, 1, 50)) != json);

    // Report JSON exposes monotone pass@k consistent with pass_at_k.
    nlohmann::json j = nlohmann::json::parse(json);
    const nlohmann::json& overall = j["aggregates"]["overall"];
    double prev = 0.0;
    for (int k : {1, 2, 4, 8}) {
        double p = overall["pass_at"][std::to_string(k)].get<double>();
        CHECK(p == doctest::Approx(pass_at_k(rep.per_task, k)));
        CHECK(p >= prev);
        prev = p;
    }
    // Tier buckets partition the task set.
    size_t tier_total = 0;
    for (const auto& [name, block] : j["aggregates"]["tiers"].items())
        tier_total += block["task_count"].get<size_t>();
    CHECK(tier_total == suite.tasks.size());
}

TEST_CASE("near-zero temperature collapses every trial to the greedy episode") {
    Suite suite = eval_suite(0xEBBull);
    PolicyConfig cfg;
    cfg.feature_dim = 4096;
    PolicyParams params = make_params(cfg);
    Rng wrng(0x92ull);
    for (double& w : params.weights) w = (wrng.uniform01() - 0.5) * 0.4;

    EvalReport rep = evaluate(suite, params, cfg, 4, 1e-6, 7, 1, 50);
    for (const EvalTaskResult& r : rep.per_task) {
        REQUIRE(r.trials.size() == 4);
        for (const EvalTrial& t : r.trials) {
            CHECK(t.success == r.trials[0].success);
            CHECK(t.steps == r.trials[0].steps);
        }
    }
    for (int k = 1; k <= 4; ++k)
        CHECK(pass_at_k(rep.per_task, k) == pass_at_k(rep.per_task, 1));
}

TEST_CASE("policy comparison partitions tasks and scores wins by strict step count") {
    SuiteConfig scfg;
    scfg.counts = {4, 4, 0, 0, 2};
    scfg.screens_range = {3, 10};
    Suite suite = generate_suite(scfg, 0xCC0ull);

    // A briefly trained policy against the untrained initialization.
    TrainConfig tcfg;
    tcfg.feature_dim = 4096;
    tcfg.workers = 1;
    tcfg.tasks_per_iteration = 10;
    tcfg.global_seed = 11;
    Trainer trainer(suite, tcfg);
    for (int i = 0; i < 8; ++i) trainer.run_iteration();
    PolicyParams trained = trainer.params();
    PolicyParams blank = make_params(tcfg.policy());

    CompareReport rep = compare_policies(suite, trained, blank, tcfg.policy(), 50);
    REQUIRE(rep.tasks.size() == suite.tasks.size());
    CHECK(rep.both_correct + rep.both_wrong + rep.others == (int)suite.tasks.size());
    CHECK(rep.a_only + rep.b_only == rep.others);
    CHECK(rep.a_wins + rep.b_wins + rep.ties == rep.both_correct);

    // Recount every category from the raw per-task outcomes.
    int bc = 0, bw = 0, aw = 0, bwins = 0, ties = 0, aonly = 0, bonly = 0;
    double a_steps = 0, b_steps = 0;
    for (const CompareTaskResult& t : rep.tasks) {
        if (t.a_success && t.b_success) {
            ++bc;
            a_steps += t.a_steps;
            b_steps += t.b_steps;
            if (t.a_steps < t.b_steps)
                ++aw;
            else if (t.b_steps < t.a_steps)
                ++bwins;
            else
                ++ties;
        } else if (!t.a_success && !t.b_success) {
            ++bw;
        } else {
            t.a_success ? ++aonly : ++bonly;
        }
    }
    CHECK(bc == rep.both_correct);
    CHECK(bw == rep.both_wrong);
    CHECK(aw == rep.a_wins);
    CHECK(bwins == rep.b_wins);
    CHECK(ties == rep.ties);
    CHECK(aonly == rep.a_only);
    CHECK(bonly == rep.b_only);
    if (bc > 0) {
        CHECK(rep.a_mean_bc_steps == doctest::Approx(a_steps / bc));
        CHECK(rep.b_mean_bc_steps == doctest::Approx(b_steps / bc));
    }
    // Training should let the tuned policy solve something the blank one may
    // not; at minimum it must solve at least one task greedily.
    int a_successes = 0;
    for (const CompareTaskResult& t : rep.tasks) a_successes += t.a_success;
    CHECK(a_successes >= 1);

    // Unsolvable tasks can only land in both-wrong.
    for (const CompareTaskResult& t : rep.tasks) {
        if (t.tier == Tier::Unsolvable) {
            CHECK_FALSE(t.a_success);
            CHECK_FALSE(t.b_success);
        }
    }

    // A policy against itself: every solved task is a tie.
    CompareReport self = compare_policies(suite, trained, trained, tcfg.policy(), 50);
    CHECK(self.others == 0);
    CHECK(self.a_wins == 0);
    CHECK(self.b_wins == 0);
    CHECK(self.ties == self.both_correct);
    CHECK(self.a_mean_bc_steps == doctest::Approx(self.b_mean_bc_steps));

    // The JSON mirror carries the same counters.
    nlohmann::json j = nlohmann::json::parse(compare_report_json(rep));
    const nlohmann::json& cat = j["categories"];
    CHECK(cat["both_correct"]["count"].get<int>() == rep.both_correct);
    CHECK(cat["both_correct"]["a_wins"].get<int>() == rep.a_wins);
    CHECK(cat["both_correct"]["ties"].get<int>() == rep.ties);
    CHECK(cat["both_wrong"]["count"].get<int>() == rep.both_wrong);
    CHECK(cat["others"]["count"].get<int>() == rep.others);
    CHECK(j["tasks"].size() == rep.tasks.size());
}
