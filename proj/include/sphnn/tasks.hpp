#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphnn/oracle.hpp"
#include "sphnn/reasoner.hpp"

namespace sphnn {

// All 256 classic figure/mood combinations over terms s, m, p.
std::vector<Task> enumerate_classic();

// 24 groups of 5 chain tasks over n terms, exactly one oracle-valid per group.
struct Suite {
    int n = 3;
    std::uint64_t seed = 0;
    std::array<std::array<Task, 5>, 24> groups{};
    std::array<int, 24> valid_index{};  // position of the valid task per group

    std::vector<const Task*> all_tasks() const;
};

Suite generate_chain_suite(int n, std::uint64_t seed);

std::string suite_to_json(const Suite& suite);
Suite suite_from_json(const std::string& text);

struct BenchResult {
    std::string task_id;
    int n = 0;
    std::optional<bool> verdict_valid;  // absent on timeout or error
    bool oracle_valid = false;
    bool agrees = false;
    double wall_ms = 0.0;
    StepTrace steps;
    bool timed_out = false;
    std::string error;  // non-timeout failure, e.g. a step-cap trip
};

// Runs decide_validity on every task under a per-task wall-clock limit
// (<= 0 disables the limit). Tasks may run on parallel workers; results are
// order-stable by task index and deterministic given cfg.seed.
std::vector<BenchResult> run_benchmark(const std::vector<Task>& tasks,
                                       const std::vector<bool>& oracle_labels,
                                       double time_limit_ms, const OptimConfig& cfg,
                                       int jobs = 0);

std::string bench_csv(const std::vector<BenchResult>& results);

// Task text syntax: one `<mood> <term> <term>` premise per line and a final
// line `therefore: <mood> <term> <term>`.
Task parse_task_text(const std::string& text);
std::string format_task_text(const Task& task);
std::vector<Statement> parse_statement_lines(const std::string& text);

}  // namespace sphnn
