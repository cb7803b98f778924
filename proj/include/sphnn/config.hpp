#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>

namespace sphnn {

// Margin enforcing strict inequalities in the epsilon-formed losses.
struct Tolerances {
    double eps_strict = 1e-4;
};

// Reproducibility contract for every construction run.
struct OptimConfig {
    int dim = 2;
    double learning_rate = 1e-4;
    Tolerances tol{};
    double init_center_norm = 10.0;
    double init_log_radius = 0.0;
    double eq_break_scale = 0.01;
    double cop_min_decrease = 1e-12;
    std::uint64_t max_steps_per_transition = 1'000'000;
    std::uint64_t seed = 0;
    bool random_init = false;
    int max_outer_iters = 9;
};

struct StepTrace {
    std::uint64_t steps_taken = 0;
    std::uint64_t transitions_taken = 0;
    int restarts = 0;
    double wall_seconds = 0.0;

    void absorb(const StepTrace& other) {
        steps_taken += other.steps_taken;
        transitions_taken += other.transitions_taken;
        restarts += other.restarts;
        wall_seconds += other.wall_seconds;
    }
};

// Numeric pathology: a gradient run exceeded its step cap. Never means UNSAT.
struct StepCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised cooperatively between transitions when a wall-clock budget expires.
struct TimeLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optional wall-clock budget checked between transitions, never mid-step.
struct RunBudget {
    bool has_deadline = false;
    std::chrono::steady_clock::time_point deadline{};

    static RunBudget none() { return RunBudget{}; }
    static RunBudget from_ms(double ms) {
        RunBudget b;
        b.has_deadline = true;
        b.deadline = std::chrono::steady_clock::now() +
                     std::chrono::microseconds(static_cast<std::int64_t>(ms * 1000.0));
        return b;
    }
    void check() const {
        if (has_deadline && std::chrono::steady_clock::now() > deadline)
            throw TimeLimitExceeded("wall-clock budget exhausted");
    }
};

}  // namespace sphnn
