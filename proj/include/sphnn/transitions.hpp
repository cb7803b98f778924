#pragma once

#include <random>
#include <vector>

#include "sphnn/config.hpp"
#include "sphnn/geometry.hpp"

namespace sphnn {

// One edge of the target-oriented neighbourhood transition table.
struct Step {
    PartRel from;
    PartRel to;  // PartRel::PO stands for the unsplit overlap band
    TargetRel target;
};

struct TransitionOutcome {
    enum class Kind { Reached, Undefined, Step };
    Kind kind = Kind::Undefined;
    struct Step step{};

    static TransitionOutcome reached() { return {Kind::Reached, {}}; }
    static TransitionOutcome undefined() { return {Kind::Undefined, {}}; }
    static TransitionOutcome step_to(PartRel from, PartRel to, TargetRel target) {
        return {Kind::Step, {from, to, target}};
    }
};

// Parameter movements a transition may use. Everything else is frozen.
struct OpSet {
    bool dis_up = false;
    bool dis_down = false;
    bool r_up = false;
    bool r_down = false;
    bool conditional = false;  // only the PO1->PO2 route toward P carries one

    bool fix_radius() const { return !r_up && !r_down; }
    bool fix_center() const { return !dis_up && !dis_down; }
};

struct DeltaEval {
    double value = 0.0;
    Vec grad_center;          // with respect to the moving sphere's center
    double grad_log_radius = 0.0;
};

// Target-oriented spatial partition f_tsp.
std::vector<PartRel> tsp(TargetRel target);

TransitionOutcome lookup(TargetRel target, PartRel current);

OpSet allowed_ops(const Step& step);

// Applicability condition of the distance-only route from PO1 toward P.
// When it fails, repeated steps detour through PPbar by design.
bool po1_route_condition(const Sphere& mov, const Sphere& fixed);

// Loss of the step's transition function with analytic gradients, restricted
// to the allowed operations; frozen parameters report zero gradient.
DeltaEval delta_eval(const Step& step, const Sphere& mov, const Sphere& fixed,
                     const Tolerances& tol);

// One capped gradient step. The center moves only along the inter-center
// line; landings are clamped strictly inside the destination band so each
// neighbourhood transition stays atomic. Requires delta_eval(...).value > 0.
Sphere apply_step(const Step& step, const Sphere& mov, const Sphere& fixed,
                  const OptimConfig& cfg);

// Random center nudge of norm cfg.eq_break_scale; resolves exact coincidence.
Sphere break_eq(const Sphere& mov, const OptimConfig& cfg, std::mt19937_64& rng);

}  // namespace sphnn
