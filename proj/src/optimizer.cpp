#include "sphnn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sphnn {

namespace {

// Destination member once a transition's loss clamped to zero. Boundary ties
// resolve to the side whose own transition still has a positive loss.
PartRel resolve_destination(const Step& step, const Sphere& mov, const Sphere& fixed) {
    if (step.to != PartRel::PO) return step.to;
    const double dis = distance(mov, fixed);
    const double r = mov.radius();
    const double rv = fixed.radius();
    switch (step.target) {
        case TargetRel::D:
            return dis >= rv ? PartRel::PO1 : PartRel::PO2;
        case TargetRel::P:
            return dis > rv ? PartRel::PO1 : PartRel::PO2;
        case TargetRel::Pbar:
            return r >= rv ? PartRel::PO3 : PartRel::PO4;
        default:
            return PartRel::PO;
    }
}

}  // namespace

std::optional<Step> next_step(TargetRel target, const Sphere& mov, const Sphere& fixed,
                              const Tolerances& tol) {
    if (holds(target, mov, fixed)) return std::nullopt;
    PartRel member = classify_for_target(target, mov, fixed, tol);
    for (int hop = 0; hop < 4; ++hop) {
        const TransitionOutcome out = lookup(target, member);
        if (out.kind == TransitionOutcome::Kind::Reached) {
            // Only the strict PO target can report "reached" while sitting
            // exactly on a band boundary; the caller nudges off it.
            return std::nullopt;
        }
        if (out.kind == TransitionOutcome::Kind::Undefined)
            throw std::logic_error(std::string("next_step: no transition from ") +
                                   to_string(member) + " toward " + to_string(target));
        if (out.step.from == PartRel::EQ) return out.step;
        if (delta_eval(out.step, mov, fixed, tol).value > 0.0) return out.step;
        member = resolve_destination(out.step, mov, fixed);
    }
    throw std::logic_error("next_step: zero-loss cycle in the transition table");
}

Sphere realize(TargetRel target, Sphere mov, const Sphere& fixed, const OptimConfig& cfg,
               StepTrace& trace, std::mt19937_64& rng, const RunBudget& budget) {
    PartRel last_member = classify_for_target(target, mov, fixed, cfg.tol);
    std::uint64_t steps_in_transition = 0;
    while (!holds(target, mov, fixed)) {
        if ((steps_in_transition & 0xff) == 0) budget.check();
        const auto st = next_step(target, mov, fixed, cfg.tol);
        if (!st) {
            // Exact band boundary under the strict PO target: slide inward.
            const double dis = distance(mov, fixed);
            if (dis <= 0.0) {
                mov = break_eq(mov, cfg, rng);
            } else {
                const double shift = (classify(mov, fixed) == BaseRel::D ? -1.0 : 1.0) *
                                     0.5 * cfg.tol.eps_strict / dis;
                for (int i = 0; i < mov.dim(); ++i)
                    mov.center[i] += shift * (mov.center[i] - fixed.center[i]);
            }
            ++trace.steps_taken;
            continue;
        }
        if (st->from == PartRel::EQ)
            mov = break_eq(mov, cfg, rng);
        else
            mov = apply_step(*st, mov, fixed, cfg);
        ++trace.steps_taken;
        ++steps_in_transition;
        if (steps_in_transition > cfg.max_steps_per_transition)
            throw StepCapExceeded(std::string("realize: step cap exceeded toward ") +
                                  to_string(target));
        const PartRel member = classify_for_target(target, mov, fixed, cfg.tol);
        if (member != last_member) {
            ++trace.transitions_taken;
            last_member = member;
            steps_in_transition = 0;
        }
    }
    return mov;
}

std::pair<Sphere, StepTrace> realize(TargetRel target, const Sphere& mov, const Sphere& fixed,
                                     const OptimConfig& cfg) {
    StepTrace trace;
    std::mt19937_64 rng(cfg.seed);
    Sphere out = realize(target, mov, fixed, cfg, trace, rng, RunBudget::none());
    return {out, trace};
}

CopResult cop(Sphere z, const Sphere& x, const Sphere& y, TargetRel t_zx, TargetRel t_zy,
              const OptimConfig& cfg, StepTrace& trace, std::mt19937_64& rng,
              const RunBudget& budget) {
    if (!holds(t_zy, z, y))
        throw std::invalid_argument("cop: constraint relation does not hold at entry");
    CopResult res;
    auto target_loss = [&](const Sphere& s) { return inspect(to_part(t_zx), s, x, cfg.tol); };
    double g = target_loss(z);
    res.loss_history.push_back(g);
    ++trace.transitions_taken;

    std::uint64_t iters = 0;
    int flat_zero_iters = 0;
    while (!holds(t_zx, z, x)) {
        if ((iters & 0xff) == 0) budget.check();
        if (++iters > cfg.max_steps_per_transition)
            throw StepCapExceeded("cop: outer iteration cap exceeded");
        const Sphere before = z;

        const auto st = next_step(t_zx, z, x, cfg.tol);
        if (!st) break;  // strict-PO boundary; treat as a stall
        if (st->from == PartRel::EQ)
            z = break_eq(z, cfg, rng);
        else
            z = apply_step(*st, z, x, cfg);
        ++trace.steps_taken;

        std::uint64_t repair_steps = 0;
        while (!holds(t_zy, z, y)) {
            const auto rs = next_step(t_zy, z, y, cfg.tol);
            if (!rs) break;
            if (rs->from == PartRel::EQ)
                z = break_eq(z, cfg, rng);
            else
                z = apply_step(*rs, z, y, cfg);
            ++trace.steps_taken;
            if (++repair_steps > cfg.max_steps_per_transition)
                throw StepCapExceeded("cop: repair step cap exceeded");
        }

        const double g_new = target_loss(z);
        // The absolute floor separates "stopped" from numerical noise; the
        // relative part cuts asymptotic crawls (e.g. a radius decaying
        // multiplicatively against an unreachable target).
        const double min_decrease = std::max(cfg.cop_min_decrease, 1e-6 * g);
        const bool improved = g_new < g - min_decrease;
        const bool reached = holds(t_zx, z, x);
        if (!improved && !reached) {
            if (g_new == 0.0 && g == 0.0 && flat_zero_iters++ < 8) continue;
            z = before;  // keep the best configuration seen
            break;
        }
        g = g_new;
        res.loss_history.push_back(g);
    }
    res.global_loss = target_loss(z);
    if (res.loss_history.empty() || res.loss_history.back() != res.global_loss)
        res.loss_history.push_back(res.global_loss);
    res.z = std::move(z);
    return res;
}

std::pair<CopResult, StepTrace> cop(const Sphere& z, const Sphere& x, const Sphere& y,
                                    TargetRel t_zx, TargetRel t_zy, const OptimConfig& cfg) {
    StepTrace trace;
    std::mt19937_64 rng(cfg.seed);
    CopResult res = cop(z, x, y, t_zx, t_zy, cfg, trace, rng, RunBudget::none());
    return {res, trace};
}

namespace {

struct RayState {
    Vec dir;  // unit orientation
    double pos = 0.0;
    double log_radius = 0.0;
};

Sphere ray_sphere(const RayState& s) {
    Sphere out;
    out.center.resize(s.dir.size());
    for (std::size_t i = 0; i < s.dir.size(); ++i) out.center[i] = s.pos * s.dir[i];
    out.log_radius = s.log_radius;
    return out;
}

// Realize the target while the moving center stays on its ray. Returns false
// on a stall (the ray may not be able to reach the target); the sweep's
// alternation deals with those.
bool realize_on_ray(TargetRel target, RayState& mov, const Sphere& fixed,
                    const OptimConfig& cfg, StepTrace& trace, const RunBudget& budget) {
    const Tolerances& tol = cfg.tol;
    std::uint64_t steps = 0;
    double prev_value = -1.0;
    int no_progress = 0;
    while (true) {
        Sphere s = ray_sphere(mov);
        if (holds(target, s, fixed)) return true;
        if ((steps & 0xff) == 0) budget.check();
        if (++steps > cfg.max_steps_per_transition) return false;

        const auto st = next_step(target, s, fixed, tol);
        if (!st) return false;
        if (st->from == PartRel::EQ) {
            mov.pos += cfg.eq_break_scale;
            ++trace.steps_taken;
            continue;
        }
        const DeltaEval ev = delta_eval(*st, s, fixed, tol);
        if (ev.value <= 0.0) return false;

        // Project the center gradient onto the ray; the radius part is as in
        // the unconstrained step.
        double g_pos = 0.0;
        for (std::size_t i = 0; i < mov.dir.size(); ++i) g_pos += ev.grad_center[i] * mov.dir[i];
        const double d_pos = -cfg.learning_rate * g_pos;
        const double d_logr = -cfg.learning_rate * ev.grad_log_radius;
        if (std::abs(d_pos) < 1e-15 && std::abs(d_logr) < 1e-15) return false;

        auto land = [&](double lambda) {
            RayState nxt = mov;
            nxt.pos = std::max(0.0, mov.pos + lambda * d_pos);
            nxt.log_radius = mov.log_radius + lambda * d_logr;
            return nxt;
        };
        auto value_at = [&](const RayState& rs) {
            return delta_eval(*st, ray_sphere(rs), fixed, tol).value;
        };
        auto acceptable = [&](const RayState& rs) {
            const Sphere cand = ray_sphere(rs);
            if (holds(target, cand, fixed)) return true;
            const PartRel m = classify_for_target(target, cand, fixed, tol);
            if (m == st->to) return true;
            if (st->to == PartRel::PO &&
                (m == PartRel::PO1 || m == PartRel::PO2 || m == PartRel::PO3 ||
                 m == PartRel::PO4 || m == PartRel::PO))
                return true;
            if (m == st->from) return value_at(rs) > 0.0 && value_at(rs) < ev.value;
            return false;
        };

        RayState cand = land(1.0);
        if (!acceptable(cand)) {
            cand = land(1.25);
            if (!acceptable(cand)) {
                double lo = 1.0;
                while (lo > 1e-12 && !acceptable(land(lo))) lo *= 0.5;
                if (lo <= 1e-12) return false;
                double hi = 1.25;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (acceptable(land(mid)))
                        lo = mid;
                    else
                        hi = mid;
                }
                cand = land(lo);
            }
        }
        const double new_value = value_at(cand);
        if (prev_value >= 0.0 && new_value >= prev_value - 1e-15) {
            if (++no_progress > 16) return false;
        } else {
            no_progress = 0;
        }
        prev_value = new_value;
        mov = cand;
        ++trace.steps_taken;
    }
}

}  // namespace

FixedOrientationResult realize_fixed_orientation(
    const std::vector<OrientedConstraint>& constraints,
    const std::map<std::string, Vec>& orientations, const OptimConfig& cfg,
    int max_outer_iters) {
    std::map<std::string, RayState> state;
    for (const auto& [term, dir] : orientations) {
        double norm = 0.0;
        for (double v : dir) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::invalid_argument("orientation vector is zero: " + term);
        RayState rs;
        rs.dir.resize(dir.size());
        for (std::size_t i = 0; i < dir.size(); ++i) rs.dir[i] = dir[i] / norm;
        rs.pos = cfg.init_center_norm;
        rs.log_radius = cfg.init_log_radius;
        state[term] = std::move(rs);
    }
    for (auto it = state.begin(); it != state.end(); ++it) {
        for (auto jt = std::next(it); jt != state.end(); ++jt) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < it->second.dir.size(); ++i) {
                const double d = it->second.dir[i] - jt->second.dir[i];
                d2 += d * d;
            }
            if (std::sqrt(d2) < 1e-12)
                throw std::invalid_argument("duplicate orientations: " + it->first + ", " +
                                            jt->first);
        }
    }
    for (const auto& c : constraints) {
        if (!state.count(c.a) || !state.count(c.b))
            throw std::invalid_argument("constraint term has no orientation");
    }

    FixedOrientationResult res;
    const RunBudget budget = RunBudget::none();
    for (int sweep = 0; sweep < max_outer_iters; ++sweep) {
        bool all_ok = true;
        for (const auto& c : constraints) {
            Sphere sa = ray_sphere(state.at(c.a));
            Sphere sb = ray_sphere(state.at(c.b));
            if (holds(c.target, sa, sb)) continue;
            all_ok = false;
            // Even sweeps move the first term; odd sweeps freeze it so the
            // other side can move or enlarge instead.
            if (sweep % 2 == 0)
                realize_on_ray(c.target, state.at(c.a), sb, cfg, res.trace, budget);
            else
                realize_on_ray(transpose(c.target), state.at(c.b), sa, cfg, res.trace, budget);
        }
        bool satisfied = true;
        for (const auto& c : constraints) {
            if (!holds(c.target, ray_sphere(state.at(c.a)), ray_sphere(state.at(c.b)))) {
                satisfied = false;
                break;
            }
        }
        if (satisfied) {
            res.sat = true;
            break;
        }
        if (all_ok) break;
    }
    if (res.sat)
        for (const auto& [term, rs] : state) res.model[term] = ray_sphere(rs);
    return res;
}

}  // namespace sphnn
