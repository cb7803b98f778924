#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphnn/config.hpp"
#include "sphnn/geometry.hpp"
#include "sphnn/optimizer.hpp"

namespace sphnn {

enum class Mood { All, Some, No, SomeNot };

// A syllogistic statement over two distinct term identifiers. Terms are
// case-insensitive and stored trimmed and lower-cased.
struct Statement {
    Mood mood;
    std::string subject;
    std::string object;
};

Statement make_statement(Mood mood, const std::string& subject, const std::string& object);

// Chain task: premise i mentions terms {X_i, X_(i+1)} in either order; the
// conclusion mentions X_1 and X_N in that order.
struct Task {
    std::vector<Statement> premises;
    Statement conclusion;
};

struct Constraint {
    TargetRel target;
    std::string a;
    std::string b;
};

using Configuration = std::map<std::string, Sphere>;

struct Verdict {
    bool sat = false;
    Configuration model;  // meaningful when sat
};

struct Validity {
    bool valid = false;
    Configuration counter_model;  // meaningful when invalid
};

enum class Orientation { Forward, Transposed };

// Mood-to-relation mapping: all -> P, some -> NotD, no -> D, some-not -> NotP.
// A transposed statement yields the transposed relation with swapped terms.
Constraint spatialise(const Statement& s, Orientation orientation = Orientation::Forward);

Statement negate(const Statement& s);

// Backward update of the derived relation between the chain head and sphere i
// from the inspected relations before and after the tail re-realization.
TargetRel back_update(BaseRel before, BaseRel after);

// Sum of inspection losses of all constraints over the configuration;
// zero exactly when the model satisfies every constraint.
double check_model(const Configuration& config, const std::vector<Constraint>& constraints,
                   const Tolerances& tol);

// Three-relation decision procedure: coincided init, trivial check, random
// break, two constructions with at most one restart.
std::pair<Verdict, StepTrace> s3(const Constraint& c12, const Constraint& c23,
                                 const Constraint& c31, const OptimConfig& cfg,
                                 const RunBudget& budget = RunBudget::none());

// N-relation decision procedure over a constraint cycle; dispatches to s3 for
// N == 3, otherwise forward construction, one constrained optimization, and a
// backward derivation pass. Satisfiable verdicts carry a full checked model.
std::pair<Verdict, StepTrace> sn(const std::vector<Constraint>& cycle, const OptimConfig& cfg,
                                 const RunBudget& budget = RunBudget::none());

std::pair<Verdict, StepTrace> decide_satisfiability(const std::vector<Statement>& statements,
                                                    const OptimConfig& cfg,
                                                    const RunBudget& budget = RunBudget::none());

std::pair<Validity, StepTrace> decide_validity(const Task& task, const OptimConfig& cfg,
                                               const RunBudget& budget = RunBudget::none());

// Chain term order X_1..X_N implied by the task; throws on malformed chains.
std::vector<std::string> chain_terms(const Task& task);

const char* to_string(Mood mood);
std::optional<Mood> mood_from_string(const std::string& token);

}  // namespace sphnn
