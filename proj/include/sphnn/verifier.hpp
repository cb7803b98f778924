#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphnn/reasoner.hpp"

namespace sphnn {

// One parsed circle-relation triple, e.g. "(circle s, inside, circle m0)".
struct Claim {
    std::string subject;
    TargetRel relation;  // inside -> P, disconnects/outside -> D,
                         // overlaps -> PO, properly contains -> Pbar
    std::string object;
    std::string verb;  // verb text as written, for reporting
};

struct Decision {
    bool is_yes = false;  // otherwise "cannot"
    std::vector<Claim> claims;
    std::string fragment;  // verbatim reply span quoted back in feedback
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off)
        : std::runtime_error(what), offset(off) {}
};

enum class Coverage { Faithful, Missing, Mismatched };

enum class HallucinationClass { Correct, H0, H1, H2, IncorrectDecision };

struct StatementCoverage {
    Statement statement;
    Coverage strict = Coverage::Missing;   // argument-order strict reading
    Coverage lenient = Coverage::Missing;  // transposed claims also accepted
};

struct Report {
    bool decision_matches_engine = false;
    bool claims_constructible = false;
    std::vector<StatementCoverage> coverage;
    HallucinationClass hallucination = HallucinationClass::Correct;
    bool transposed_reading_differs = false;
    std::string feedback;  // empty when the report is fully correct
};

// Case-insensitive reply parser. Any parenthesised triples mean "yes";
// "cannot" wins only when no triples are present.
Decision parse_reply(const std::string& text);

// Verifies the decision against the engine's satisfiability verdict, checks
// the claim set by model construction (with PO available as a target), and
// grades per-statement coverage.
Report check(const Decision& decision, const std::vector<Statement>& statements,
             const OptimConfig& cfg);

// Byte-exact feedback template quoting the original reply fragment.
std::string feedback_line(const Report& report, const Decision& decision);

HallucinationClass classify_hallucination(const Report& report);

// Transcript replay: alternating `STATEMENTS:` and `REPLY:` blocks; each
// statements block applies to the replies after it.
struct TranscriptRound {
    std::vector<Statement> statements;
    std::string reply;
    Report report;
};

std::vector<TranscriptRound> verify_transcript(const std::string& text, const OptimConfig& cfg);

std::string report_to_json(const Report& report);

const char* to_string(HallucinationClass c);
const char* to_string(Coverage c);

}  // namespace sphnn
