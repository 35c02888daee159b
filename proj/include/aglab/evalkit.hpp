#pragma once

#include "aglab/rollout.hpp"

namespace aglab {

struct EvalTrial {
    bool success = false;
    int steps = 0;
};

struct EvalTaskResult {
    std::string task_id;
    Tier tier = Tier::Trivial;
    std::vector<EvalTrial> trials;  // in trial-seed order
};

struct EvalReport {
    int trials = 0;
    double temperature = 1.0;
    uint64_t seed = 0;
    std::vector<EvalTaskResult> per_task;
};

// Samples `trials` episodes per task at the given temperature, seeds derived
// per (seed, task, trial index). pass@k in the report = fraction of tasks
// with at least one success among the first k trials.
EvalReport evaluate(const Suite& suite, const PolicyParams& params, const PolicyConfig& cfg,
                    int trials, double temperature, uint64_t seed, int workers, int horizon);

// pass@k over a set of task results (first k trials each).
double pass_at_k(const std::vector<EvalTaskResult>& tasks, int k);

std::string eval_report_json(const EvalReport& report);

// Deterministic one-episode-per-task comparison of two policies under greedy
// action selection. Tasks fall into both-correct / both-wrong / others; a win
// inside both-correct means strictly fewer steps.
struct CompareTaskResult {
    std::string task_id;
    Tier tier = Tier::Trivial;
    bool a_success = false;
    int a_steps = 0;
    bool b_success = false;
    int b_steps = 0;
};

struct CompareReport {
    std::vector<CompareTaskResult> tasks;
    int both_correct = 0;
    int both_wrong = 0;
    int others = 0;       // exactly one side solved it
    int a_only = 0;
    int b_only = 0;
    int a_wins = 0;       // within both-correct: strictly fewer steps
    int b_wins = 0;
    int ties = 0;
    double a_mean_bc_steps = 0.0;  // mean steps over both-correct tasks
    double b_mean_bc_steps = 0.0;
};

CompareReport compare_policies(const Suite& suite, const PolicyParams& a,
                               const PolicyParams& b, const PolicyConfig& cfg, int horizon);

std::string compare_report_json(const CompareReport& report);

}  // namespace aglab
