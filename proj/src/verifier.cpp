#include "sphnn/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sphnn/oracle.hpp"

namespace sphnn {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// "circle m0" -> "m0"; bare terms pass through.
std::string strip_circle(const std::string& raw) {
    std::string t = trim(raw);
    if (t.rfind("circle", 0) == 0) t = trim(t.substr(6));
    return t;
}

std::optional<TargetRel> verb_relation(const std::string& verb) {
    if (verb.find("disconnect") != std::string::npos ||
        verb.find("outside") != std::string::npos)
        return TargetRel::D;
    if (verb.find("overlap") != std::string::npos) return TargetRel::PO;
    if (verb.find("contain") != std::string::npos) return TargetRel::Pbar;
    if (verb.find("inside") != std::string::npos) return TargetRel::P;
    return std::nullopt;
}

}  // namespace

Decision parse_reply(const std::string& text) {
    const std::string low = lower(text);
    Decision d;
    std::size_t first_open = std::string::npos;
    std::size_t last_close = std::string::npos;
    std::size_t pos = 0;
    while ((pos = low.find('(', pos)) != std::string::npos) {
        const std::size_t close = low.find(')', pos);
        if (close == std::string::npos) break;
        const std::string body = low.substr(pos + 1, close - pos - 1);
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = body.find(',', start);
            parts.push_back(trim(body.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (parts.size() == 3) {
            const auto rel = verb_relation(parts[1]);
            if (!rel)
                throw ParseError("unrecognized relation verb: " + parts[1],
                                 pos + 1 + body.find(parts[1]));
            Claim c;
            c.subject = strip_circle(parts[0]);
            c.object = strip_circle(parts[2]);
            c.relation = *rel;
            c.verb = parts[1];
            d.claims.push_back(std::move(c));
            if (first_open == std::string::npos) first_open = pos;
            last_close = close;
        }
        pos = close + 1;
    }
    if (!d.claims.empty()) {
        d.is_yes = true;
        d.fragment = text.substr(first_open, last_close - first_open + 1);
        return d;
    }
    if (low.find("cannot") != std::string::npos) {
        d.is_yes = false;
        d.fragment = "cannot";
        return d;
    }
    throw ParseError("reply contains neither relation triples nor 'cannot'", 0);
}

namespace {

RelSet verb_witness_set(Mood mood) {
    // Witness sets over the claim vocabulary, as spelled out in the prompt:
    // all -> inside; no -> disconnects; some -> inside / overlaps / contains;
    // some-not -> disconnects / contains / overlaps.
    switch (mood) {
        case Mood::All: return RelSet::of({BaseRel::PP});
        case Mood::No: return RelSet::of({BaseRel::D});
        case Mood::Some: return RelSet::of({BaseRel::PP, BaseRel::PO, BaseRel::PPbar});
        case Mood::SomeNot: return RelSet::of({BaseRel::D, BaseRel::PPbar, BaseRel::PO});
    }
    return {};
}

BaseRel claim_base(TargetRel rel) {
    switch (rel) {
        case TargetRel::P: return BaseRel::PP;
        case TargetRel::Pbar: return BaseRel::PPbar;
        case TargetRel::PO: return BaseRel::PO;
        default: return BaseRel::D;
    }
}

struct UnionFind {
    std::map<std::string, std::string> parent;
    std::string find(const std::string& x) {
        auto it = parent.emplace(x, x).first;
        if (it->second == x) return x;
        const std::string root = find(it->second);
        it->second = root;
        return root;
    }
    void merge(const std::string& a, const std::string& b) {
        const std::string ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }
};

bool coincided_config_satisfies(const std::vector<Claim>& claims, const OptimConfig& cfg) {
    Sphere base;
    base.center.assign(cfg.dim, 0.0);
    base.center[0] = cfg.init_center_norm;
    base.log_radius = cfg.init_log_radius;
    for (const auto& c : claims)
        if (!holds(c.relation, base, base)) return false;
    return true;
}

// Model construction over an arbitrary claim set: coincided trivial check,
// pair merging, then tree realization or the cycle decision procedure.
bool construct_claims(const std::vector<Claim>& claims, const OptimConfig& cfg) {
    if (claims.empty()) return true;
    if (coincided_config_satisfies(claims, cfg)) return true;

    // Merge duplicate / transposed claims per unordered pair.
    UnionFind uf;
    std::map<std::pair<std::string, std::string>, std::set<int>> pair_targets;
    auto canon = [](const Claim& c) {
        if (c.subject <= c.object)
            return std::make_pair(std::make_pair(c.subject, c.object), c.relation);
        return std::make_pair(std::make_pair(c.object, c.subject), transpose(c.relation));
    };
    for (const auto& c : claims) {
        if (c.subject == c.object) {
            if (c.relation == TargetRel::D || c.relation == TargetRel::PO) return false;
            continue;  // self-containment is vacuous
        }
        const auto [pair, rel] = canon(c);
        pair_targets[pair].insert(static_cast<int>(rel));
    }
    std::vector<Constraint> constraints;
    for (const auto& [pair, rels] : pair_targets) {
        if (rels.size() == 1) {
            constraints.push_back({static_cast<TargetRel>(*rels.begin()), pair.first,
                                   pair.second});
            continue;
        }
        const bool has_p = rels.count(static_cast<int>(TargetRel::P));
        const bool has_pbar = rels.count(static_cast<int>(TargetRel::Pbar));
        if (rels.size() == 2 && has_p && has_pbar) {
            uf.merge(pair.first, pair.second);  // mutual containment: coincide
            continue;
        }
        return false;  // any other pair of distinct relations is disjoint
    }

    // Rewrite over merged representatives.
    std::map<std::pair<std::string, std::string>, TargetRel> merged;
    std::set<std::string> terms;
    for (const auto& c : constraints) {
        const std::string a = uf.find(c.a), b = uf.find(c.b);
        if (a == b) {
            if (c.target == TargetRel::D || c.target == TargetRel::PO) return false;
            continue;
        }
        const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
        const TargetRel rel = a <= b ? c.target : transpose(c.target);
        const auto it = merged.find(key);
        if (it != merged.end() && it->second != rel) return false;
        merged.emplace(key, rel);
        terms.insert(a);
        terms.insert(b);
    }
    if (merged.empty()) return true;

    std::vector<Constraint> final_constraints;
    for (const auto& [key, rel] : merged) final_constraints.push_back({rel, key.first, key.second});

    std::map<std::string, int> degree;
    for (const auto& c : final_constraints) {
        ++degree[c.a];
        ++degree[c.b];
    }
    const bool single_cycle =
        final_constraints.size() == terms.size() &&
        std::all_of(terms.begin(), terms.end(), [&](const std::string& t) {
            return degree[t] == 2;
        });
    if (single_cycle && terms.size() >= 3) {
        auto [verdict, trace] = sn(final_constraints, cfg);
        return verdict.sat;
    }
    if (final_constraints.size() + 1 == terms.size()) {
        // A tree: realize each sphere against its parent in BFS order.
        std::map<std::string, Sphere> config;
        std::mt19937_64 rng(cfg.seed);
        StepTrace trace;
        std::set<std::string> placed;
        Sphere base;
        base.center.assign(cfg.dim, 0.0);
        base.center[0] = cfg.init_center_norm;
        base.log_radius = cfg.init_log_radius;
        std::vector<Constraint> pending = final_constraints;
        config[pending.front().a] = base;
        placed.insert(pending.front().a);
        while (!pending.empty()) {
            bool advanced = false;
            for (auto it = pending.begin(); it != pending.end(); ++it) {
                const bool ha = placed.count(it->a), hb = placed.count(it->b);
                if (!ha && !hb) continue;
                if (ha && hb) return false;  // cross edge: not a tree
                Sphere mov = base;
                mov.center = config.at(ha ? it->a : it->b).center;
                mov.log_radius = cfg.init_log_radius;
                mov = break_eq(mov, cfg, rng);
                const std::string child = ha ? it->b : it->a;
                const TargetRel target = ha ? transpose(it->target) : it->target;
                config[child] = realize(target, mov, config.at(ha ? it->a : it->b), cfg, trace,
                                        rng, RunBudget::none());
                placed.insert(child);
                pending.erase(it);
                advanced = true;
                break;
            }
            if (!advanced) return false;  // disconnected forest with a cycle elsewhere
        }
        return true;
    }
    throw std::invalid_argument("construct_claims: unsupported claim graph shape");
}

}  // namespace

Report check(const Decision& decision, const std::vector<Statement>& statements,
             const OptimConfig& cfg) {
    Report report;
    auto [verdict, trace] = decide_satisfiability(statements, cfg);
    report.decision_matches_engine = decision.is_yes == verdict.sat;
    report.claims_constructible = decision.is_yes ? construct_claims(decision.claims, cfg) : false;

    for (const auto& st : statements) {
        StatementCoverage cov;
        cov.statement = st;
        const RelSet witness = verb_witness_set(st.mood);
        bool any = false, strict_ok = false, lenient_ok = false;
        for (const auto& c : decision.claims) {
            const bool forward = c.subject == st.subject && c.object == st.object;
            const bool backward = c.subject == st.object && c.object == st.subject;
            if (!forward && !backward) continue;
            any = true;
            // Order-strictness only bites for asymmetric relations; a flipped
            // "disconnects" or "overlaps" names the same configuration.
            const bool symmetric =
                c.relation == TargetRel::D || c.relation == TargetRel::PO;
            const BaseRel oriented =
                forward ? claim_base(c.relation) : transpose(claim_base(c.relation));
            if ((forward || symmetric) && witness.contains(oriented)) strict_ok = true;
            if (witness.contains(oriented)) lenient_ok = true;
        }
        cov.strict = !any ? Coverage::Missing
                          : strict_ok ? Coverage::Faithful : Coverage::Mismatched;
        cov.lenient = !any ? Coverage::Missing
                           : lenient_ok ? Coverage::Faithful : Coverage::Mismatched;
        if (cov.strict != cov.lenient) report.transposed_reading_differs = true;
        report.coverage.push_back(std::move(cov));
    }

    report.hallucination = classify_hallucination(report);
    // A correct "cannot" needs no explanation.
    if (!decision.is_yes && report.decision_matches_engine)
        report.hallucination = HallucinationClass::Correct;
    if (report.hallucination != HallucinationClass::Correct)
        report.feedback = feedback_line(report, decision);
    return report;
}

std::string feedback_line(const Report& report, const Decision& decision) {
    if (report.hallucination == HallucinationClass::Correct)
        throw std::logic_error("feedback_line: report is fully correct");
    std::string line = "It is not correct that '''" + decision.fragment + "'''";
    if (!decision.is_yes) line += ".";
    return line;
}

HallucinationClass classify_hallucination(const Report& report) {
    if (!report.decision_matches_engine) return HallucinationClass::IncorrectDecision;
    bool missing = false, mismatched = false;
    for (const auto& cov : report.coverage) {
        missing |= cov.strict == Coverage::Missing;
        mismatched |= cov.strict == Coverage::Mismatched;
    }
    if (missing) return HallucinationClass::H0;
    if (mismatched) return HallucinationClass::H1;
    if (!report.claims_constructible) return HallucinationClass::H2;
    return HallucinationClass::Correct;
}

std::vector<TranscriptRound> verify_transcript(const std::string& text, const OptimConfig& cfg) {
    std::vector<TranscriptRound> rounds;
    std::vector<Statement> statements;
    std::istringstream is(text);
    std::string line;
    std::string mode;
    std::string buffer;
    auto flush = [&] {
        if (mode == "statements") {
            statements.clear();
            std::istringstream block(buffer);
            std::string stmt_line;
            while (std::getline(block, stmt_line)) {
                const std::string t = trim(stmt_line);
                if (t.empty() || t[0] == '#') continue;
                std::istringstream ls(t);
                std::string mood_token, subject, object;
                if (!(ls >> mood_token >> subject >> object))
                    throw std::invalid_argument("bad statement line: " + t);
                const auto mood = mood_from_string(lower(mood_token));
                if (!mood) throw std::invalid_argument("unknown mood token: " + mood_token);
                statements.push_back(make_statement(*mood, subject, object));
            }
        } else if (mode == "reply") {
            TranscriptRound round;
            round.statements = statements;
            round.reply = trim(buffer);
            round.report = check(parse_reply(round.reply), statements, cfg);
            rounds.push_back(std::move(round));
        }
        buffer.clear();
    };
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (lower(t).rfind("statements:", 0) == 0) {
            flush();
            mode = "statements";
            buffer = t.substr(11) + "\n";
        } else if (lower(t).rfind("reply:", 0) == 0) {
            flush();
            mode = "reply";
            buffer = t.substr(6) + "\n";
        } else {
            buffer += line + "\n";
        }
    }
    flush();
    return rounds;
}

std::string report_to_json(const Report& report) {
    nlohmann::json j;
    j["decisionMatchesEngine"] = report.decision_matches_engine;
    j["claimsConstructible"] = report.claims_constructible;
    j["coverage"] = nlohmann::json::array();
    for (const auto& cov : report.coverage) {
        nlohmann::json jc;
        jc["statement"] = std::string(to_string(cov.statement.mood)) + " " +
                          cov.statement.subject + " " + cov.statement.object;
        jc["strict"] = to_string(cov.strict);
        jc["lenient"] = to_string(cov.lenient);
        j["coverage"].push_back(jc);
    }
    j["class"] = to_string(report.hallucination);
    j["transposedReadingDiffers"] = report.transposed_reading_differs;
    j["feedback"] = report.feedback;
    return j.dump(2);
}

const char* to_string(HallucinationClass c) {
    switch (c) {
        case HallucinationClass::Correct: return "Correct";
        case HallucinationClass::H0: return "H0";
        case HallucinationClass::H1: return "H1";
        case HallucinationClass::H2: return "H2";
        case HallucinationClass::IncorrectDecision: return "IncorrectDecision";
    }
    return "?";
}

const char* to_string(Coverage c) {
    switch (c) {
        case Coverage::Faithful: return "faithful";
        case Coverage::Missing: return "missing";
        case Coverage::Mismatched: return "mismatched";
    }
    return "?";
}

}  // namespace sphnn
