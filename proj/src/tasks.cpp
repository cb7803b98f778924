#include "sphnn/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sphnn {

std::vector<Task> enumerate_classic() {
    const std::array<Mood, 4> moods{Mood::All, Mood::Some, Mood::No, Mood::SomeNot};
    std::vector<Task> out;
    out.reserve(256);
    for (int fig = 0; fig < 4; ++fig)
        for (Mood m1 : moods)
            for (Mood m2 : moods)
                for (Mood mc : moods) {
                    Task t;
                    t.premises.push_back(fig % 2 == 0 ? make_statement(m1, "s", "m")
                                                      : make_statement(m1, "m", "s"));
                    t.premises.push_back(fig / 2 == 0 ? make_statement(m2, "m", "p")
                                                      : make_statement(m2, "p", "m"));
                    t.conclusion = make_statement(mc, "s", "p");
                    out.push_back(std::move(t));
                }
    return out;
}

std::vector<const Task*> Suite::all_tasks() const {
    std::vector<const Task*> out;
    out.reserve(120);
    for (const auto& group : groups)
        for (const auto& task : group) out.push_back(&task);
    return out;
}

namespace {

std::string statement_line(const Statement& s) {
    return std::string(to_string(s.mood)) + " " + s.subject + " " + s.object;
}

std::string task_identity(const Task& t) {
    std::string id;
    for (const auto& p : t.premises) id += statement_line(p) + "\n";
    return id + "therefore: " + statement_line(t.conclusion);
}

// Splits the chain pair of one premise with a fresh term, preserving chain
// validity: the original statement keeps its mood on the shortened pair and
// an all-link makes the fresh term absorb the replaced argument.
Task insert_middle_term(const Task& base, std::size_t premise_idx, bool substitute_subject,
                        const std::string& fresh) {
    Task out = base;
    const Statement old = out.premises[static_cast<std::size_t>(premise_idx)];
    Statement moved, link;
    if (substitute_subject) {
        // all/no: old subject sits below the fresh term; some/some-not: above.
        moved = make_statement(old.mood, fresh, old.object);
        link = old.mood == Mood::All || old.mood == Mood::No
                   ? make_statement(Mood::All, old.subject, fresh)
                   : make_statement(Mood::All, fresh, old.subject);
    } else {
        // all/some: fresh term sits inside the old object; no/some-not: around it.
        moved = make_statement(old.mood, old.subject, fresh);
        link = old.mood == Mood::All || old.mood == Mood::Some
                   ? make_statement(Mood::All, fresh, old.object)
                   : make_statement(Mood::All, old.object, fresh);
    }
    out.premises[premise_idx] = moved;
    out.premises.insert(out.premises.begin() + static_cast<std::ptrdiff_t>(premise_idx) + 1,
                        link);
    return out;
}

Task rename_chain_terms(const Task& task) {
    const std::vector<std::string> order = chain_terms(task);
    const int n = static_cast<int>(order.size());
    std::map<std::string, std::string> rename;
    rename[order.front()] = "s";
    rename[order.back()] = "p";
    if (n == 3) {
        rename[order[1]] = "m";
    } else {
        for (int i = 1; i + 1 < n; ++i) rename[order[i]] = "m" + std::to_string(i);
    }
    Task out = task;
    for (auto& prem : out.premises) {
        prem.subject = rename.at(prem.subject);
        prem.object = rename.at(prem.object);
    }
    out.conclusion.subject = rename.at(out.conclusion.subject);
    out.conclusion.object = rename.at(out.conclusion.object);
    return out;
}

Task random_chain_task(int n, std::mt19937_64& rng) {
    const std::array<Mood, 4> moods{Mood::All, Mood::Some, Mood::No, Mood::SomeNot};
    auto term = [&](int i) {
        if (i == 0) return std::string("s");
        if (i == n - 1) return std::string("p");
        return "m" + std::to_string(i);
    };
    std::uniform_int_distribution<int> mood_pick(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    Task t;
    for (int i = 0; i + 1 < n; ++i) {
        const Mood m = moods[static_cast<std::size_t>(mood_pick(rng))];
        if (coin(rng))
            t.premises.push_back(make_statement(m, term(i), term(i + 1)));
        else
            t.premises.push_back(make_statement(m, term(i + 1), term(i)));
    }
    t.conclusion = make_statement(moods[static_cast<std::size_t>(mood_pick(rng))], "s", "p");
    return t;
}

}  // namespace

Suite generate_chain_suite(int n, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("generate_chain_suite: n must be at least 3");
    const CompositionTable& table = composition_table();
    Suite suite;
    suite.n = n;
    suite.seed = seed;
    std::mt19937_64 rng(seed ^ (0x5bd1e995u * static_cast<std::uint64_t>(n)));

    const auto& forms = valid_classic_forms();
    for (int g = 0; g < 24; ++g) {
        Task valid = forms[static_cast<std::size_t>(g)].task;
        int fresh = 0;
        while (static_cast<int>(valid.premises.size()) + 1 < n) {
            std::uniform_int_distribution<std::size_t> pick(0, valid.premises.size() - 1);
            std::uniform_int_distribution<int> coin(0, 1);
            valid = insert_middle_term(valid, pick(rng), coin(rng) == 1,
                                       "w" + std::to_string(fresh++));
        }
        valid = rename_chain_terms(valid);
        if (!chain_valid(valid, table))
            throw std::logic_error("generate_chain_suite: extension lost validity");

        std::set<std::string> seen{task_identity(valid)};
        std::array<Task, 5> group;
        std::uniform_int_distribution<int> slot_pick(0, 4);
        const int valid_slot = slot_pick(rng);
        suite.valid_index[static_cast<std::size_t>(g)] = valid_slot;
        group[static_cast<std::size_t>(valid_slot)] = valid;
        for (int k = 0; k < 5; ++k) {
            if (k == valid_slot) continue;
            Task candidate;
            bool ok = false;
            for (int attempt = 0; attempt < 10000; ++attempt) {
                candidate = random_chain_task(n, rng);
                if (chain_valid(candidate, table)) continue;
                if (!seen.insert(task_identity(candidate)).second) continue;
                ok = true;
                break;
            }
            if (!ok) throw std::runtime_error("generate_chain_suite: generator exhausted");
            group[static_cast<std::size_t>(k)] = candidate;
        }
        suite.groups[static_cast<std::size_t>(g)] = group;
    }
    return suite;
}

std::string suite_to_json(const Suite& suite) {
    nlohmann::json j;
    j["n"] = suite.n;
    j["seed"] = suite.seed;
    j["groups"] = nlohmann::json::array();
    const CompositionTable& table = composition_table();
    for (const auto& group : suite.groups) {
        nlohmann::json jg = nlohmann::json::array();
        for (const auto& task : group) {
            nlohmann::json jt;
            jt["premises"] = nlohmann::json::array();
            for (const auto& p : task.premises) jt["premises"].push_back(statement_line(p));
            jt["conclusion"] = statement_line(task.conclusion);
            jt["valid"] = chain_valid(task, table);
            jg.push_back(jt);
        }
        j["groups"].push_back(jg);
    }
    return j.dump(2);
}

namespace {

Statement parse_statement_line(const std::string& line) {
    std::istringstream is(line);
    std::string mood_token, subject, object, extra;
    if (!(is >> mood_token >> subject >> object) || (is >> extra))
        throw std::invalid_argument("bad statement line: " + line);
    const auto mood = mood_from_string(mood_token);
    if (!mood) throw std::invalid_argument("unknown mood token: " + mood_token);
    return make_statement(*mood, subject, object);
}

}  // namespace

Suite suite_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Suite suite;
    suite.n = j.at("n").get<int>();
    suite.seed = j.at("seed").get<std::uint64_t>();
    const auto& groups = j.at("groups");
    if (groups.size() != 24) throw std::invalid_argument("suite must have 24 groups");
    for (std::size_t g = 0; g < 24; ++g) {
        if (groups[g].size() != 5) throw std::invalid_argument("suite groups must have 5 tasks");
        for (std::size_t k = 0; k < 5; ++k) {
            Task t;
            for (const auto& line : groups[g][k].at("premises"))
                t.premises.push_back(parse_statement_line(line.get<std::string>()));
            t.conclusion = parse_statement_line(groups[g][k].at("conclusion").get<std::string>());
            suite.groups[g][k] = std::move(t);
            if (groups[g][k].at("valid").get<bool>())
                suite.valid_index[g] = static_cast<int>(k);
        }
    }
    return suite;
}

std::vector<BenchResult> run_benchmark(const std::vector<Task>& tasks,
                                       const std::vector<bool>& oracle_labels,
                                       double time_limit_ms, const OptimConfig& cfg,
                                       int jobs) {
    if (tasks.size() != oracle_labels.size())
        throw std::invalid_argument("run_benchmark: one oracle label per task required");
    std::vector<BenchResult> results(tasks.size());
    const int count = static_cast<int>(tasks.size());

#ifdef _OPENMP
    if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
#endif
    for (int i = 0; i < count; ++i) {
        BenchResult& r = results[static_cast<std::size_t>(i)];
        {
            std::ostringstream id;
            id << "t" << i / 1000 % 10 << i / 100 % 10 << i / 10 % 10 << i % 10;
            r.task_id = id.str();
        }
        const Task& task = tasks[static_cast<std::size_t>(i)];
        r.n = static_cast<int>(task.premises.size()) + 1;
        r.oracle_valid = oracle_labels[static_cast<std::size_t>(i)];

        OptimConfig task_cfg = cfg;
        task_cfg.seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1));
        const RunBudget budget =
            time_limit_ms > 0 ? RunBudget::from_ms(time_limit_ms) : RunBudget::none();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto [validity, trace] = decide_validity(task, task_cfg, budget);
            r.verdict_valid = validity.valid;
            r.steps = trace;
            r.agrees = validity.valid == r.oracle_valid;
        } catch (const TimeLimitExceeded&) {
            r.timed_out = true;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
    }
    return results;
}

std::string bench_csv(const std::vector<BenchResult>& results) {
    std::ostringstream os;
    os << "taskId,n,verdict,oracle,agrees,wallTimeMs,steps,timedOut\n";
    for (const auto& r : results) {
        os << r.task_id << "," << r.n << ",";
        if (r.verdict_valid) os << (*r.verdict_valid ? "valid" : "invalid");
        os << "," << (r.oracle_valid ? "valid" : "invalid") << ","
           << (r.agrees ? "true" : "false") << "," << r.wall_ms << "," << r.steps.steps_taken
           << "," << (r.timed_out ? "true" : "false") << "\n";
    }
    return os.str();
}

Task parse_task_text(const std::string& text) {
    Task t;
    bool have_conclusion = false;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        line = line.substr(begin);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("therefore:", 0) == 0) {
            if (have_conclusion) throw std::invalid_argument("multiple conclusion lines");
            t.conclusion = parse_statement_line(line.substr(10));
            have_conclusion = true;
        } else {
            if (have_conclusion)
                throw std::invalid_argument("premise after the conclusion line");
            t.premises.push_back(parse_statement_line(line));
        }
    }
    if (!have_conclusion) throw std::invalid_argument("task has no `therefore:` line");
    if (t.premises.empty()) throw std::invalid_argument("task has no premises");
    return t;
}

std::string format_task_text(const Task& task) {
    std::string out;
    for (const auto& p : task.premises) out += statement_line(p) + "\n";
    out += "therefore: " + statement_line(task.conclusion) + "\n";
    return out;
}

std::vector<Statement> parse_statement_lines(const std::string& text) {
    std::vector<Statement> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        line = line.substr(begin);
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_statement_line(line));
    }
    return out;
}

}  // namespace sphnn
