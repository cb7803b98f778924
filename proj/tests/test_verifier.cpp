#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sphnn/verifier.hpp"

using namespace sphnn;

namespace {

OptimConfig fast_cfg(std::uint64_t seed = 1) {
    OptimConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.seed = seed;
    return cfg;
}

std::string read_data(const std::string& name) {
    std::ifstream in(std::string(SPHNN_TEST_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kRound1Reply =
    "yes (circle s, disconnects from, circle m0), (circle p, inside, circle m0), "
    "(circle s, partially overlaps with, circle p)";

std::vector<Statement> round_statements() {
    return {make_statement(Mood::No, "m0", "s"), make_statement(Mood::All, "p", "m0"),
            make_statement(Mood::SomeNot, "s", "p")};
}

}  // namespace

TEST_CASE("reply parsing") {
    const Decision d = parse_reply(kRound1Reply);
    REQUIRE(d.is_yes);
    REQUIRE(d.claims.size() == 3);
    CHECK(d.claims[0].subject == "s");
    CHECK(d.claims[0].relation == TargetRel::D);
    CHECK(d.claims[0].object == "m0");
    CHECK(d.claims[1].relation == TargetRel::P);
    CHECK(d.claims[2].relation == TargetRel::PO);

    const Decision cannot = parse_reply("cannot");
    CHECK_FALSE(cannot.is_yes);
    CHECK(cannot.fragment == "cannot");

    const Decision multiline = parse_reply(
        "(circle m0, inside, circle p)\n(circle s, disconnects from, circle p)\n"
        "(circle s, disconnects from, circle m0)");
    CHECK(multiline.is_yes);
    CHECK(multiline.claims.size() == 3);

    const Decision outside = parse_reply("yes (circle a, outside, circle b)");
    CHECK(outside.claims[0].relation == TargetRel::D);
    const Decision contains = parse_reply("(circle a, properly contains, circle b)");
    CHECK(contains.claims[0].relation == TargetRel::Pbar);

    CHECK_THROWS_AS(parse_reply("yes (circle a, nudges, circle b)"), ParseError);
    CHECK_THROWS_AS(parse_reply("I have no idea"), ParseError);
}

TEST_CASE("triples win over a stray cannot") {
    const Decision d = parse_reply("cannot ... although (circle a, inside, circle b)");
    CHECK(d.is_yes);
    CHECK(d.claims.size() == 1);
}

TEST_CASE("round one: unconstructible claims produce the exact feedback") {
    const Decision d = parse_reply(kRound1Reply);
    const Report report = check(d, round_statements(), fast_cfg());
    CHECK(report.decision_matches_engine);  // satisfiable, and the reply said yes
    CHECK_FALSE(report.claims_constructible);
    CHECK(report.hallucination == HallucinationClass::H2);
    CHECK(report.feedback ==
          "It is not correct that '''(circle s, disconnects from, circle m0), "
          "(circle p, inside, circle m0), (circle s, partially overlaps with, circle p)'''");
}

TEST_CASE("round two: a wrong cannot is called out verbatim") {
    const Decision d = parse_reply("cannot");
    const Report report = check(d, round_statements(), fast_cfg());
    CHECK_FALSE(report.decision_matches_engine);
    CHECK(report.hallucination == HallucinationClass::IncorrectDecision);
    CHECK(report.feedback == "It is not correct that '''cannot'''.");
}

TEST_CASE("round three: the corrected triples construct") {
    const Decision d = parse_reply(
        "(circle m0, inside, circle p)\n(circle s, disconnects from, circle p)\n"
        "(circle s, disconnects from, circle m0)");
    const Report report = check(d, round_statements(), fast_cfg());
    CHECK(report.decision_matches_engine);
    CHECK(report.claims_constructible);
}

TEST_CASE("feedback round-trips through the parser") {
    const Decision d = parse_reply(kRound1Reply);
    const Report report = check(d, round_statements(), fast_cfg());
    const std::string quoted = report.feedback.substr(
        report.feedback.find("'''") + 3,
        report.feedback.rfind("'''") - report.feedback.find("'''") - 3);
    const Decision reparsed = parse_reply(quoted);
    REQUIRE(reparsed.claims.size() == d.claims.size());
    for (std::size_t i = 0; i < d.claims.size(); ++i) {
        CHECK(reparsed.claims[i].subject == d.claims[i].subject);
        CHECK(reparsed.claims[i].relation == d.claims[i].relation);
        CHECK(reparsed.claims[i].object == d.claims[i].object);
    }
}

TEST_CASE("feedback on a correct report is a contract violation") {
    const Decision d = parse_reply(
        "(circle p, inside, circle m0)\n(circle s, disconnects from, circle p)\n"
        "(circle s, disconnects from, circle m0)");
    const Report report = check(d, round_statements(), fast_cfg());
    REQUIRE(report.hallucination == HallucinationClass::Correct);
    CHECK_THROWS_AS(feedback_line(report, d), std::logic_error);
}

TEST_CASE("partial explanation classifies as H0") {
    const std::vector<Statement> statements{make_statement(Mood::SomeNot, "s", "m0"),
                                            make_statement(Mood::All, "m0", "p"),
                                            make_statement(Mood::All, "s", "p")};
    const Decision d = parse_reply(
        "(circle s, inside, circle p)\n(circle p, inside, circle m0)\n"
        "(circle m0, inside, circle p)");
    const Report report = check(d, statements, fast_cfg());
    CHECK(report.decision_matches_engine);
    CHECK(report.claims_constructible);  // mutual containment coincides
    CHECK(report.hallucination == HallucinationClass::H0);
}

TEST_CASE("misread statement classifies as H1") {
    const std::vector<Statement> statements{make_statement(Mood::No, "m0", "s"),
                                            make_statement(Mood::No, "m0", "p"),
                                            make_statement(Mood::All, "s", "p")};
    const Decision d = parse_reply(
        "(circle p, inside, circle m0)\n(circle m0, outside, circle s)\n"
        "(circle s, inside, circle p)");
    const Report report = check(d, statements, fast_cfg());
    CHECK(report.decision_matches_engine);
    CHECK(report.hallucination == HallucinationClass::H1);
}

TEST_CASE("faithful but jointly unsatisfiable classifies as H2") {
    const std::vector<Statement> statements{make_statement(Mood::SomeNot, "m0", "s"),
                                            make_statement(Mood::All, "m0", "p"),
                                            make_statement(Mood::SomeNot, "s", "p")};
    const Decision d = parse_reply(
        "(circle m0, overlaps, circle s)\n(circle m0, inside, circle p)\n"
        "(circle s, outside, circle p)");
    const Report report = check(d, statements, fast_cfg());
    CHECK(report.decision_matches_engine);
    CHECK_FALSE(report.claims_constructible);
    for (const auto& cov : report.coverage) CHECK(cov.strict == Coverage::Faithful);
    CHECK(report.hallucination == HallucinationClass::H2);
}

TEST_CASE("classification is a partition") {
    // One report lands in exactly one class by construction; spot-check that
    // the grading is stable across repeated runs with one seed.
    const Decision d = parse_reply(kRound1Reply);
    const Report r1 = check(d, round_statements(), fast_cfg(5));
    const Report r2 = check(d, round_statements(), fast_cfg(5));
    CHECK(r1.hallucination == r2.hallucination);
    CHECK(r1.claims_constructible == r2.claims_constructible);
    CHECK(report_to_json(r1) == report_to_json(r2));
}

TEST_CASE("transposed triples are reported, not failed") {
    // "all p are m0" explained with the arguments flipped as a containment.
    const std::vector<Statement> statements{make_statement(Mood::No, "m0", "s"),
                                            make_statement(Mood::All, "p", "m0"),
                                            make_statement(Mood::SomeNot, "s", "p")};
    const Decision d = parse_reply(
        "(circle m0, properly contains, circle p)\n(circle s, disconnects from, circle m0)\n"
        "(circle s, outside, circle p)");
    const Report report = check(d, statements, fast_cfg());
    CHECK(report.claims_constructible);
    CHECK(report.transposed_reading_differs);
    bool saw_upgrade = false;
    for (const auto& cov : report.coverage)
        if (cov.strict == Coverage::Mismatched && cov.lenient == Coverage::Faithful)
            saw_upgrade = true;
    CHECK(saw_upgrade);
}

TEST_CASE("transcript replay") {
    const auto rounds = verify_transcript(read_data("exp3_transcript.txt"), fast_cfg());
    REQUIRE(rounds.size() == 3);
    CHECK_FALSE(rounds[0].report.claims_constructible);
    CHECK(rounds[0].report.feedback ==
          "It is not correct that '''(circle s, disconnects from, circle m0), "
          "(circle p, inside, circle m0), (circle s, partially overlaps with, circle p)'''");
    CHECK(rounds[1].report.feedback == "It is not correct that '''cannot'''.");
    CHECK(rounds[2].report.claims_constructible);
    CHECK(rounds[2].report.decision_matches_engine);
}
