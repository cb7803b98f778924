#include <doctest.h>

#include <set>

#include "sphnn/tasks.hpp"

using namespace sphnn;

TEST_CASE("classic enumeration covers all figures and moods") {
    const auto tasks = enumerate_classic();
    REQUIRE(tasks.size() == 256);
    std::set<std::string> distinct;
    for (const auto& t : tasks) distinct.insert(format_task_text(t));
    CHECK(distinct.size() == 256);

    int valid = 0;
    for (const auto& t : tasks)
        if (is_valid_classic(t)) ++valid;
    CHECK(valid == 24);
}

TEST_CASE("chain suites are seeded and oracle-consistent") {
    const Suite a = generate_chain_suite(5, 42);
    const Suite b = generate_chain_suite(5, 42);
    CHECK(suite_to_json(a) == suite_to_json(b));

    const auto& table = composition_table();
    int valid_count = 0;
    for (int g = 0; g < 24; ++g) {
        int per_group = 0;
        for (int k = 0; k < 5; ++k) {
            const Task& t = a.groups[g][k];
            CHECK(static_cast<int>(t.premises.size()) + 1 == 5);
            if (chain_valid(t, table)) {
                ++per_group;
                CHECK(k == a.valid_index[g]);
            }
        }
        CHECK(per_group == 1);
        valid_count += per_group;
    }
    CHECK(valid_count == 24);
}

TEST_CASE("three-term suites reuse the valid-form table") {
    const Suite s = generate_chain_suite(3, 7);
    for (int g = 0; g < 24; ++g) {
        const Task& valid_task = s.groups[g][s.valid_index[g]];
        CHECK(is_valid_classic(valid_task));
    }
}

TEST_CASE("suite json round-trips") {
    const Suite s = generate_chain_suite(4, 11);
    const Suite back = suite_from_json(suite_to_json(s));
    CHECK(back.n == 4);
    CHECK(back.seed == 11);
    for (int g = 0; g < 24; ++g) {
        CHECK(back.valid_index[g] == s.valid_index[g]);
        for (int k = 0; k < 5; ++k)
            CHECK(format_task_text(back.groups[g][k]) == format_task_text(s.groups[g][k]));
    }
}

TEST_CASE("task text parsing") {
    const Task t = parse_task_text("all s m\nno m p\ntherefore: some-not s p\n");
    CHECK(t.premises.size() == 2);
    CHECK(t.premises[1].mood == Mood::No);
    CHECK(t.conclusion.mood == Mood::SomeNot);
    CHECK(format_task_text(t) == "all s m\nno m p\ntherefore: some-not s p\n");

    CHECK_THROWS_AS(parse_task_text("all s m\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_task_text("alle s m\ntherefore: all s p\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_task_text("all s\ntherefore: all s p\n"), std::invalid_argument);
}

TEST_CASE("benchmark runner on the classic forms subset") {
    OptimConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;
    auto tasks = enumerate_classic();
    tasks.resize(32);
    std::vector<bool> labels;
    for (const auto& t : tasks) labels.push_back(is_valid_classic(t));
    const auto results = run_benchmark(tasks, labels, 0.0, cfg, 1);
    REQUIRE(results.size() == 32);
    for (const auto& r : results) {
        CHECK_FALSE(r.timed_out);
        CHECK(r.agrees);
        CHECK(r.n == 3);
    }
    const std::string csv = bench_csv(results);
    CHECK(csv.rfind("taskId,n,verdict,oracle,agrees,wallTimeMs,steps,timedOut\n", 0) == 0);
}

TEST_CASE("a zero-ish time limit times every task out") {
    OptimConfig cfg;
    cfg.learning_rate = 0.05;
    auto tasks = enumerate_classic();
    tasks.resize(8);
    std::vector<bool> labels(8, false);
    const auto results = run_benchmark(tasks, labels, 1e-6, cfg, 1);
    for (const auto& r : results) {
        CHECK(r.timed_out);
        CHECK_FALSE(r.verdict_valid.has_value());
    }
}

TEST_CASE("accuracy is monotone in the time limit") {
    OptimConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.seed = 13;
    const Suite suite = generate_chain_suite(4, 13);
    std::vector<Task> tasks;
    std::vector<bool> labels;
    const auto& table = composition_table();
    for (const auto& group : suite.groups)
        for (const auto& t : group) {
            tasks.push_back(t);
            labels.push_back(chain_valid(t, table));
        }
    tasks.resize(40);
    labels.resize(40);
    int last_correct = -1;
    for (double limit : {0.01, 5.0, 0.0}) {  // 0 disables the limit
        const auto results = run_benchmark(tasks, labels, limit, cfg, 1);
        int correct = 0;
        for (const auto& r : results)
            if (r.agrees) ++correct;
        CHECK(correct >= last_correct);
        last_correct = correct;
    }
    CHECK(last_correct == 40);
}
