// Compares the serial reference path (one worker) against the OpenMP worker
// pool on the same workloads and checks that results agree bit-for-bit.

#include <chrono>
#include <cstdio>

#include "sphnn/oracle.hpp"
#include "sphnn/tasks.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sphnn;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    const int workers = omp_get_max_threads();
#else
    const int workers = 1;
#endif
    std::printf("workers available: %d\n", workers);

    OptimConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.seed = 99;

    const Suite suite = generate_chain_suite(6, 99);
    std::vector<Task> tasks;
    std::vector<bool> labels;
    const auto& table = composition_table();
    for (const auto& group : suite.groups)
        for (const auto& t : group) {
            tasks.push_back(t);
            labels.push_back(chain_valid(t, table));
        }

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = run_benchmark(tasks, labels, 0.0, cfg, 1);
    const double serial_secs = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = run_benchmark(tasks, labels, 0.0, cfg, workers);
    const double parallel_secs = seconds_since(t0);

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i) {
        identical = serial[i].verdict_valid == parallel[i].verdict_valid &&
                    serial[i].steps.steps_taken == parallel[i].steps.steps_taken;
    }
    std::printf("bench  N=6 suite  serial %.2fs  pooled %.2fs  results %s\n", serial_secs,
                parallel_secs, identical ? "identical" : "DIVERGED");

    t0 = std::chrono::steady_clock::now();
    GridSpec grid;
    const CompositionTable serial_table = build_composition_table(grid);
    const double table_secs = seconds_since(t0);
    std::printf("composition table build %.2fs\n", table_secs);

    return identical ? 0 : 1;
}
