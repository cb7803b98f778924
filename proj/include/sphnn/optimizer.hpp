#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sphnn/config.hpp"
#include "sphnn/geometry.hpp"
#include "sphnn/transitions.hpp"

namespace sphnn {

// Picks the transition step that makes progress toward the target from the
// current state, resolving zero-loss sub-boundary states to their successor
// transition. Empty when the target already holds.
std::optional<Step> next_step(TargetRel target, const Sphere& mov, const Sphere& fixed,
                              const Tolerances& tol);

// Single-relation realization: repeated capped steps until the target holds.
Sphere realize(TargetRel target, Sphere mov, const Sphere& fixed, const OptimConfig& cfg,
               StepTrace& trace, std::mt19937_64& rng, const RunBudget& budget);

// Convenience wrapper owning its RNG; returns the sphere and the trace.
std::pair<Sphere, StepTrace> realize(TargetRel target, const Sphere& mov, const Sphere& fixed,
                                     const OptimConfig& cfg);

struct CopResult {
    double global_loss = 0.0;
    Sphere z;
    std::vector<double> loss_history;  // accepted outer-iteration losses
};

// Constrained optimization: improve z's relation to x while preserving its
// relation to y (which must hold at entry). Exits when the loss toward x
// stops decreasing; a non-zero result is an answer, not an error.
CopResult cop(Sphere z, const Sphere& x, const Sphere& y, TargetRel t_zx, TargetRel t_zy,
              const OptimConfig& cfg, StepTrace& trace, std::mt19937_64& rng,
              const RunBudget& budget);

std::pair<CopResult, StepTrace> cop(const Sphere& z, const Sphere& x, const Sphere& y,
                                    TargetRel t_zx, TargetRel t_zy, const OptimConfig& cfg);

struct OrientedConstraint {
    TargetRel target;
    std::string a;
    std::string b;
};

struct FixedOrientationResult {
    bool sat = false;
    std::map<std::string, Sphere> model;
    StepTrace trace;
};

// Construction with every center pinned to a prescribed ray. Only the ray
// position and the radius move; constraint sweeps alternate which side of an
// unsatisfied pair is frozen so containment can fall back to enlarging the
// container.
FixedOrientationResult realize_fixed_orientation(
    const std::vector<OrientedConstraint>& constraints,
    const std::map<std::string, Vec>& orientations, const OptimConfig& cfg,
    int max_outer_iters);

}  // namespace sphnn
