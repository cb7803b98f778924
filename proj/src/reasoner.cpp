#include "sphnn/reasoner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sphnn {

namespace {

std::string normalize_term(const std::string& raw) {
    std::string out;
    std::size_t begin = raw.find_first_not_of(" \t\r\n");
    std::size_t end = raw.find_last_not_of(" \t\r\n");
    if (begin == std::string::npos) throw std::invalid_argument("empty term identifier");
    for (std::size_t i = begin; i <= end; ++i)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    return out;
}

TargetRel mood_relation(Mood mood) {
    switch (mood) {
        case Mood::All: return TargetRel::P;
        case Mood::Some: return TargetRel::NotD;
        case Mood::No: return TargetRel::D;
        case Mood::SomeNot: return TargetRel::NotP;
    }
    throw std::logic_error("mood_relation: bad mood");
}

Sphere init_sphere(const OptimConfig& cfg, std::mt19937_64& rng) {
    Sphere s;
    s.center.assign(cfg.dim, 0.0);
    if (cfg.random_init) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& x : s.center) {
                x = gauss(rng);
                norm += x * x;
            }
            norm = std::sqrt(norm);
        } while (norm == 0.0);
        for (auto& x : s.center) x *= cfg.init_center_norm / norm;
    } else {
        s.center[0] = cfg.init_center_norm;
    }
    s.log_radius = cfg.init_log_radius;
    return s;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

}  // namespace

Statement make_statement(Mood mood, const std::string& subject, const std::string& object) {
    Statement s{mood, normalize_term(subject), normalize_term(object)};
    if (s.subject == s.object)
        throw std::invalid_argument("statement repeats the term: " + s.subject);
    return s;
}

Constraint spatialise(const Statement& s, Orientation orientation) {
    const TargetRel rel = mood_relation(s.mood);
    if (orientation == Orientation::Forward) return {rel, s.subject, s.object};
    return {transpose(rel), s.object, s.subject};
}

Statement negate(const Statement& s) {
    Statement out = s;
    switch (s.mood) {
        case Mood::All: out.mood = Mood::SomeNot; break;
        case Mood::SomeNot: out.mood = Mood::All; break;
        case Mood::No: out.mood = Mood::Some; break;
        case Mood::Some: out.mood = Mood::No; break;
    }
    return out;
}

TargetRel back_update(BaseRel before, BaseRel after) {
    if (after == BaseRel::D) return TargetRel::D;
    if (after == BaseRel::PP) return TargetRel::P;
    if (after == BaseRel::PPbar) return TargetRel::Pbar;
    if (after != BaseRel::PO)
        throw std::invalid_argument("back_update: inspected relation out of domain");
    switch (before) {
        case BaseRel::D: return TargetRel::NotD;
        case BaseRel::PP: return TargetRel::NotP;
        case BaseRel::PPbar: return TargetRel::NotPbar;
        default:
            throw std::invalid_argument("back_update: prior relation out of domain");
    }
}

double check_model(const Configuration& config, const std::vector<Constraint>& constraints,
                   const Tolerances& tol) {
    double total = 0.0;
    for (const auto& c : constraints) {
        const auto ia = config.find(c.a);
        const auto ib = config.find(c.b);
        if (ia == config.end() || ib == config.end())
            throw std::invalid_argument("check_model: configuration misses term " +
                                        (ia == config.end() ? c.a : c.b));
        total += inspect(to_part(c.target), ia->second, ib->second, tol);
    }
    return total;
}

namespace {

struct TripleState {
    Sphere o1, o2, o3;
    bool all_satisfied(const Constraint&, const Constraint&, const Constraint&) const;
};

// s3 over targets already oriented to the pairs (1,2), (2,3), (3,1).
Verdict s3_impl(TargetRel t12, TargetRel t23, TargetRel t31, const OptimConfig& cfg,
                StepTrace& trace, std::mt19937_64& rng, const RunBudget& budget,
                Sphere& o1, Sphere& o2, Sphere& o3) {
    o1 = init_sphere(cfg, rng);
    o2 = cfg.random_init ? init_sphere(cfg, rng) : o1;
    o3 = cfg.random_init ? init_sphere(cfg, rng) : o1;
    auto satisfied = [&] {
        return holds(t12, o1, o2) && holds(t23, o2, o3) && holds(t31, o3, o1);
    };
    if (satisfied()) return {true, {}};

    if (!cfg.random_init) {
        o2 = break_eq(o2, cfg, rng);
        o3 = break_eq(o3, cfg, rng);
    }

    o2 = realize(transpose(t12), o2, o1, cfg, trace, rng, budget);
    o3 = realize(t31, o3, o1, cfg, trace, rng, budget);
    CopResult first = cop(o3, o2, o1, transpose(t23), t31, cfg, trace, rng, budget);
    o3 = first.z;
    if (satisfied()) return {true, {}};

    ++trace.restarts;
    o3 = realize(transpose(t23), o3, o2, cfg, trace, rng, budget);
    o1 = realize(t12, o1, o2, cfg, trace, rng, budget);
    CopResult second = cop(o1, o3, o2, transpose(t31), t12, cfg, trace, rng, budget);
    o1 = second.z;
    if (satisfied()) return {true, {}};
    return {false, {}};
}

}  // namespace

std::pair<Verdict, StepTrace> s3(const Constraint& c12, const Constraint& c23,
                                 const Constraint& c31, const OptimConfig& cfg,
                                 const RunBudget& budget) {
    if (c12.b != c23.a || c23.b != c31.a || c31.b != c12.a)
        throw std::invalid_argument("s3: constraints must be oriented (1,2),(2,3),(3,1)");
    StepTrace trace;
    Timer timer;
    std::mt19937_64 rng(cfg.seed);
    Sphere o1, o2, o3;
    Verdict v = s3_impl(c12.target, c23.target, c31.target, cfg, trace, rng, budget, o1, o2, o3);
    if (v.sat) {
        v.model[c12.a] = o1;
        v.model[c12.b] = o2;
        v.model[c23.b] = o3;
    }
    trace.wall_seconds = timer.seconds();
    return {v, trace};
}

namespace {

// Full S_N run over link targets L[i] on (S_i, S_(i+1)) and the closing
// target C on (S_(n-1), S_0).
Verdict sn_impl(const std::vector<TargetRel>& link, TargetRel closing, const OptimConfig& cfg,
                StepTrace& trace, std::mt19937_64& rng, const RunBudget& budget,
                std::vector<Sphere>& s) {
    const int n = static_cast<int>(link.size()) + 1;
    s.assign(n, Sphere{});
    s[0] = init_sphere(cfg, rng);
    for (int i = 1; i < n; ++i) s[i] = cfg.random_init ? init_sphere(cfg, rng) : s[0];

    auto link_holds = [&](int i) { return holds(link[i], s[i], s[i + 1]); };
    auto all_hold = [&] {
        for (int i = 0; i + 1 < n; ++i)
            if (!link_holds(i)) return false;
        return holds(closing, s[n - 1], s[0]);
    };
    if (all_hold()) return {true, {}};

    if (n == 3) {
        Verdict v;
        Sphere o1, o2, o3;
        v = s3_impl(link[0], link[1], closing, cfg, trace, rng, budget, o1, o2, o3);
        s = {o1, o2, o3};
        return v;
    }

    if (!cfg.random_init)
        for (int i = 1; i < n; ++i) s[i] = break_eq(s[i], cfg, rng);

    for (int i = 0; i + 1 < n; ++i)
        s[i + 1] = realize(transpose(link[i]), s[i + 1], s[i], cfg, trace, rng, budget);

    CopResult head = cop(s[n - 1], s[0], s[n - 2], closing, transpose(link[n - 2]), cfg, trace,
                         rng, budget);
    s[n - 1] = head.z;
    if (all_hold()) return {true, {}};

    // Backward derivation. derived[i] is the target between S_0 and S_i that
    // any completion must satisfy; it shrinks the cycle one sphere at a time.
    std::vector<TargetRel> derived(n, TargetRel::D);
    BaseRel before = classify(s[0], s[n - 2]);
    s[n - 1] = realize(closing, s[n - 1], s[0], cfg, trace, rng, budget);
    s[n - 2] = realize(link[n - 2], s[n - 2], s[n - 1], cfg, trace, rng, budget);

    int reduced_to = -1;  // index k such that S_0..S_k solves the reduced cycle
    int idx = n - 2;
    while (idx > 2) {
        const BaseRel after = classify(s[0], s[idx]);
        derived[idx] = back_update(before, after);
        s[idx] = realize(transpose(derived[idx]), s[idx], s[0], cfg, trace, rng, budget);
        if (link_holds(idx - 1)) {
            reduced_to = idx;
            break;
        }
        before = classify(s[0], s[idx - 1]);
        s[idx - 1] = realize(link[idx - 1], s[idx - 1], s[idx], cfg, trace, rng, budget);
        --idx;
    }

    if (reduced_to < 0) {
        const BaseRel after = classify(s[0], s[2]);
        derived[2] = back_update(before, after);
        Sphere o1, o2, o3;
        Verdict base = s3_impl(link[0], link[1], transpose(derived[2]), cfg, trace, rng, budget,
                               o1, o2, o3);
        if (!base.sat) return {false, {}};
        s[0] = o1;
        s[1] = o2;
        s[2] = o3;
        reduced_to = 2;
    }

    // Rebuild the tail so the verdict carries a model of the original cycle:
    // each sphere is re-placed to satisfy its link, then rotated into the
    // derived (or closing) relation with the chain head.
    for (int j = reduced_to + 1; j < n; ++j) {
        const TargetRel close_j = (j == n - 1) ? closing : transpose(derived[j]);
        s[j] = realize(transpose(link[j - 1]), s[j], s[j - 1], cfg, trace, rng, budget);
        if (!holds(close_j, s[j], s[0])) {
            CopResult leg = cop(s[j], s[0], s[j - 1], close_j, transpose(link[j - 1]), cfg,
                                trace, rng, budget);
            s[j] = leg.z;
            if (!holds(close_j, s[j], s[0]))
                throw StepCapExceeded("sn: model reconstruction stalled");
        }
    }
    if (!all_hold()) throw StepCapExceeded("sn: reconstructed model fails a constraint");
    return {true, {}};
}

}  // namespace

std::pair<Verdict, StepTrace> sn(const std::vector<Constraint>& cycle, const OptimConfig& cfg,
                                 const RunBudget& budget) {
    budget.check();
    const int n = static_cast<int>(cycle.size());
    if (n < 3) throw std::invalid_argument("sn: a cycle needs at least three constraints");

    // Order the constraints into a chain S_0 .. S_(n-1) closed by the last.
    std::vector<std::string> terms(n);
    std::vector<TargetRel> link(n - 1, TargetRel::D);
    TargetRel closing = TargetRel::D;
    {
        std::map<std::string, std::vector<int>> touching;
        for (int i = 0; i < n; ++i) {
            touching[cycle[i].a].push_back(i);
            touching[cycle[i].b].push_back(i);
        }
        if (static_cast<int>(touching.size()) != n)
            throw std::invalid_argument("sn: constraints do not form a single cycle");
        for (const auto& [term, ids] : touching)
            if (ids.size() != 2)
                throw std::invalid_argument("sn: term " + term + " is not in exactly two constraints");
        std::vector<bool> used(n, false);
        terms[0] = cycle[0].a;
        int current = 0;
        used[0] = true;
        std::string at = cycle[0].b;
        for (int k = 1; k < n; ++k) {
            terms[k] = at;
            const auto& ids = touching[at];
            const int next = ids[0] == current ? ids[1] : ids[0];
            if (used[next])
                throw std::invalid_argument("sn: constraints do not form a single cycle");
            current = next;
            used[next] = true;
            at = cycle[next].a == at ? cycle[next].b : cycle[next].a;
        }
        if (at != terms[0]) throw std::invalid_argument("sn: constraint chain did not close");
        auto oriented = [&](int ci, const std::string& from, const std::string& to) {
            const Constraint& c = cycle[ci];
            if (c.a == from && c.b == to) return c.target;
            return transpose(c.target);
        };
        std::map<std::pair<std::string, std::string>, int> by_pair;
        for (int i = 0; i < n; ++i) {
            auto key = std::minmax(cycle[i].a, cycle[i].b);
            by_pair[{key.first, key.second}] = i;
        }
        for (int i = 0; i + 1 < n; ++i) {
            auto key = std::minmax(terms[i], terms[i + 1]);
            link[i] = oriented(by_pair.at({key.first, key.second}), terms[i], terms[i + 1]);
        }
        auto key = std::minmax(terms[n - 1], terms[0]);
        closing = oriented(by_pair.at({key.first, key.second}), terms[n - 1], terms[0]);
    }

    StepTrace trace;
    Timer timer;
    std::mt19937_64 rng(cfg.seed);
    std::vector<Sphere> spheres;
    Verdict v = sn_impl(link, closing, cfg, trace, rng, budget, spheres);
    if (v.sat)
        for (int i = 0; i < n; ++i) v.model[terms[i]] = spheres[i];
    trace.wall_seconds = timer.seconds();
    return {v, trace};
}

std::pair<Verdict, StepTrace> decide_satisfiability(const std::vector<Statement>& statements,
                                                    const OptimConfig& cfg,
                                                    const RunBudget& budget) {
    std::vector<Constraint> constraints;
    constraints.reserve(statements.size());
    for (const auto& st : statements) constraints.push_back(spatialise(st));
    auto [verdict, trace] = sn(constraints, cfg, budget);
    if (verdict.sat && check_model(verdict.model, constraints, cfg.tol) != 0.0)
        throw StepCapExceeded("decide_satisfiability: model failed re-inspection");
    return {std::move(verdict), trace};
}

std::vector<std::string> chain_terms(const Task& task) {
    const int n = static_cast<int>(task.premises.size()) + 1;
    std::vector<std::string> order;
    order.reserve(n);
    order.push_back(task.conclusion.subject);
    std::vector<bool> used(task.premises.size(), false);
    for (int k = 1; k < n; ++k) {
        bool found = false;
        for (std::size_t i = 0; i < task.premises.size(); ++i) {
            if (used[i]) continue;
            const auto& p = task.premises[i];
            if (p.subject == order.back() || p.object == order.back()) {
                order.push_back(p.subject == order.back() ? p.object : p.subject);
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("task premises do not form a chain");
    }
    if (order.back() != task.conclusion.object)
        throw std::invalid_argument("task conclusion does not close the premise chain");
    return order;
}

std::pair<Validity, StepTrace> decide_validity(const Task& task, const OptimConfig& cfg,
                                               const RunBudget& budget) {
    chain_terms(task);  // validates the shape
    std::vector<Statement> statements = task.premises;
    statements.push_back(negate(task.conclusion));
    auto [verdict, trace] = decide_satisfiability(statements, cfg, budget);
    Validity v;
    v.valid = !verdict.sat;
    if (verdict.sat) v.counter_model = std::move(verdict.model);
    return {v, trace};
}

const char* to_string(Mood mood) {
    switch (mood) {
        case Mood::All: return "all";
        case Mood::Some: return "some";
        case Mood::No: return "no";
        case Mood::SomeNot: return "some-not";
    }
    return "?";
}

std::optional<Mood> mood_from_string(const std::string& token) {
    if (token == "all") return Mood::All;
    if (token == "some") return Mood::Some;
    if (token == "no") return Mood::No;
    if (token == "some-not" || token == "some_not") return Mood::SomeNot;
    return std::nullopt;
}

}  // namespace sphnn
