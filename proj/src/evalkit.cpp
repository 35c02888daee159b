#include "aglab/evalkit.hpp"

#include <map>

#include "json.hpp"

namespace aglab {

using nlohmann::json;

EvalReport evaluate(const Suite& suite, const PolicyParams& params, const PolicyConfig& cfg,
                    int trials, double temperature, uint64_t seed, int workers, int horizon) {
    EvalReport report;
    report.trials = trials;
    report.temperature = temperature;
    report.seed = seed;

    std::vector<const SuiteTask*> tasks;
    for (const SuiteTask& t : suite.tasks) tasks.push_back(&t);

    PolicyConfig eval_cfg = cfg;
    eval_cfg.temperature = temperature;
    auto groups = run_rollouts(tasks, params, eval_cfg, trials, workers, seed, horizon);

    for (size_t i = 0; i < tasks.size(); ++i) {
        EvalTaskResult r;
        r.task_id = tasks[i]->task.task_id;
        r.tier = tasks[i]->task.tier;
        for (const Trajectory& t : groups[i]) r.trials.push_back({t.success(), t.length()});
        report.per_task.push_back(std::move(r));
    }
    return report;
}

double pass_at_k(const std::vector<EvalTaskResult>& tasks, int k) {
    if (tasks.empty()) return 0.0;
    int solved = 0;
    for (const EvalTaskResult& t : tasks) {
        int upto = std::min<int>(k, static_cast<int>(t.trials.size()));
        for (int i = 0; i < upto; ++i) {
            if (t.trials[static_cast<size_t>(i)].success) {
                ++solved;
                break;
            }
        }
    }
    return static_cast<double>(solved) / static_cast<double>(tasks.size());
}

namespace {

json aggregate_block(const std::vector<EvalTaskResult>& tasks, int trials) {
    json pass = json::object();
    for (int k : {1, 2, 4, 8})
        if (k <= trials) pass[std::to_string(k)] = pass_at_k(tasks, k);
    long long steps_sum = 0;
    int successes = 0;
    for (const EvalTaskResult& t : tasks) {
        for (const EvalTrial& tr : t.trials) {
            if (tr.success) {
                steps_sum += tr.steps;
                ++successes;
            }
        }
    }
    return json{{"task_count", tasks.size()},
                {"pass_at", std::move(pass)},
                {"mean_success_steps",
                 successes > 0 ? static_cast<double>(steps_sum) / successes : 0.0}};
}

}  // namespace

std::string eval_report_json(const EvalReport& report) {
    json tasks = json::array();
    std::map<std::string, std::vector<EvalTaskResult>> by_tier;
    for (const EvalTaskResult& t : report.per_task) {
        json trials = json::array();
        for (const EvalTrial& tr : t.trials)
            trials.push_back({{"success", tr.success}, {"steps", tr.steps}});
        tasks.push_back({{"task_id", t.task_id},
                         {"tier", std::string(tier_name(t.tier))},
                         {"trials", std::move(trials)}});
        by_tier[std::string(tier_name(t.tier))].push_back(t);
    }

    json tiers = json::object();
    for (const auto& [name, tier_tasks] : by_tier)
        tiers[name] = aggregate_block(tier_tasks, report.trials);

    json root = {{"trials", report.trials},
                 {"temperature", report.temperature},
                 {"seed", report.seed},
                 {"tasks", std::move(tasks)},
                 {"aggregates",
                  {{"overall", aggregate_block(report.per_task, report.trials)},
                   {"tiers", std::move(tiers)}}}};
    return root.dump(2);
}

CompareReport compare_policies(const Suite& suite, const PolicyParams& a,
                               const PolicyParams& b, const PolicyConfig& cfg, int horizon) {
    CompareReport rep;
    Featurizer feat_a(cfg), feat_b(cfg);
    long long a_bc_steps = 0, b_bc_steps = 0;

    for (const SuiteTask& t : suite.tasks) {
        Trajectory ta = run_episode(t.graph, t.task, a, feat_a, 0, horizon, cfg.temperature,
                                    /*greedy=*/true);
        Trajectory tb = run_episode(t.graph, t.task, b, feat_b, 0, horizon, cfg.temperature,
                                    /*greedy=*/true);
        CompareTaskResult r{t.task.task_id, t.task.tier, ta.success(), ta.length(),
                            tb.success(), tb.length()};
        if (r.a_success && r.b_success) {
            ++rep.both_correct;
            a_bc_steps += r.a_steps;
            b_bc_steps += r.b_steps;
            if (r.a_steps < r.b_steps)
                ++rep.a_wins;
            else if (r.b_steps < r.a_steps)
                ++rep.b_wins;
            else
                ++rep.ties;
        } else if (!r.a_success && !r.b_success) {
            ++rep.both_wrong;
        } else {
            ++rep.others;
            (r.a_success ? rep.a_only : rep.b_only)++;
        }
        rep.tasks.push_back(r);
    }
    if (rep.both_correct > 0) {
        rep.a_mean_bc_steps = static_cast<double>(a_bc_steps) / rep.both_correct;
        rep.b_mean_bc_steps = static_cast<double>(b_bc_steps) / rep.both_correct;
    }
    return rep;
}

std::string compare_report_json(const CompareReport& rep) {
    json tasks = json::array();
    for (const CompareTaskResult& r : rep.tasks)
        tasks.push_back({{"task_id", r.task_id},
                         {"tier", std::string(tier_name(r.tier))},
                         {"a", {{"success", r.a_success}, {"steps", r.a_steps}}},
                         {"b", {{"success", r.b_success}, {"steps", r.b_steps}}}});
    json root = {{"categories",
                  {{"both_correct",
                    {{"count", rep.both_correct},
                     {"a_wins", rep.a_wins},
                     {"b_wins", rep.b_wins},
                     {"ties", rep.ties},
                     {"a_mean_steps", rep.a_mean_bc_steps},
                     {"b_mean_steps", rep.b_mean_bc_steps}}},
                   {"both_wrong", {{"count", rep.both_wrong}}},
                   {"others",
                    {{"count", rep.others}, {"a_only", rep.a_only}, {"b_only", rep.b_only}}}}},
                 {"tasks", std::move(tasks)}};
    return root.dump(2);
}

}  // namespace aglab
