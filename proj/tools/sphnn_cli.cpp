#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphnn/io.hpp"
#include "sphnn/oracle.hpp"
#include "sphnn/tasks.hpp"
#include "sphnn/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitTimeoutDominated = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << text;
}

struct CommonFlags {
    int dim = 2;
    double lr = 0.05;
    double eps = 1e-4;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double time_limit_ms = 0.0;
    bool random_init = false;

    void attach(CLI::App* app) {
        app->add_option("--dim", dim, "sphere dimension (default 2)");
        app->add_option("--lr", lr, "gradient step size (default 0.05)");
        app->add_option("--eps", eps, "strict-inequality margin (default 1e-4)");
        app->add_option("--seed", seed, "RNG seed (default from SPHNN_SEED or 0)")
            ->each([this](const std::string&) { seed_set = true; });
        app->add_option("--time-limit-ms", time_limit_ms,
                        "per-decision wall-clock limit, 0 disables");
        app->add_flag("--random-init", random_init, "random instead of coincided init");
    }
    sphnn::OptimConfig config() const {
        sphnn::OptimConfig cfg;
        cfg.dim = dim;
        cfg.learning_rate = lr;
        cfg.tol.eps_strict = eps;
        cfg.random_init = random_init;
        cfg.seed = seed;
        if (!seed_set) {
            if (const char* env = std::getenv("SPHNN_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        }
        return cfg;
    }
};

nlohmann::json trace_json(const sphnn::StepTrace& trace) {
    nlohmann::json j;
    j["stepsTaken"] = trace.steps_taken;
    j["transitionsTaken"] = trace.transitions_taken;
    j["restarts"] = trace.restarts;
    j["wallSeconds"] = trace.wall_seconds;
    return j;
}

nlohmann::json meta_json(const sphnn::OptimConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["configHash"] = sphnn::config_hash(cfg);
    return j;
}

int cmd_decide(const std::string& input, bool inline_text, const CommonFlags& flags) {
    const sphnn::OptimConfig cfg = flags.config();
    std::string text = inline_text ? input : slurp(input);
    if (inline_text)
        for (auto& c : text)
            if (c == ';') c = '\n';

    const bool has_conclusion = text.find("therefore:") != std::string::npos;
    const sphnn::RunBudget budget = flags.time_limit_ms > 0
                                        ? sphnn::RunBudget::from_ms(flags.time_limit_ms)
                                        : sphnn::RunBudget::none();
    nlohmann::json out;
    out["meta"] = meta_json(cfg);
    if (has_conclusion) {
        const sphnn::Task task = sphnn::parse_task_text(text);
        auto [validity, trace] = sphnn::decide_validity(task, cfg, budget);
        out["validity"] = validity.valid ? "valid" : "invalid";
        if (!validity.valid)
            out["model"] =
                nlohmann::json::parse(sphnn::configuration_to_json(validity.counter_model));
        out["trace"] = trace_json(trace);
    } else {
        const auto statements = sphnn::parse_statement_lines(text);
        if (statements.empty()) throw std::invalid_argument("no statements in input");
        auto [verdict, trace] = sphnn::decide_satisfiability(statements, cfg, budget);
        out["verdict"] = verdict.sat ? "sat" : "unsat";
        if (verdict.sat)
            out["model"] = nlohmann::json::parse(sphnn::configuration_to_json(verdict.model));
        out["trace"] = trace_json(trace);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_enumerate(const CommonFlags& flags, const std::string& out_path) {
    const sphnn::OptimConfig cfg = flags.config();
    const auto tasks = sphnn::enumerate_classic();
    std::vector<bool> labels;
    labels.reserve(tasks.size());
    for (const auto& t : tasks) labels.push_back(sphnn::is_valid_classic(t));
    const auto results = sphnn::run_benchmark(tasks, labels, flags.time_limit_ms, cfg);
    std::string csv = sphnn::bench_csv(results);

    int valid = 0, agree = 0;
    std::vector<std::string> disagreements;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].verdict_valid && *results[i].verdict_valid) ++valid;
        if (results[i].agrees)
            ++agree;
        else
            disagreements.push_back(results[i].task_id);
    }
    std::ostringstream summary;
    summary << "valid=" << valid << " agree=" << agree << "/" << results.size();
    if (!disagreements.empty()) {
        summary << " known_disagreements=";
        for (std::size_t i = 0; i < disagreements.size(); ++i)
            summary << (i ? "+" : "") << disagreements[i];
    }
    csv += summary.str() + "\n";
    if (out_path.empty())
        std::cout << csv;
    else
        spill(out_path, csv);
    std::cerr << summary.str() << "\n";
    return kExitOk;
}

int cmd_render(const std::string& model_path, const std::string& out_path) {
    const sphnn::Configuration config = sphnn::configuration_from_json(slurp(model_path));
    const std::string svg = sphnn::render_svg(config);
    if (out_path.empty())
        std::cout << svg;
    else
        spill(out_path, svg);
    return kExitOk;
}

int cmd_embed_decide(const std::string& statements_path, const std::string& embeddings_path,
                     const CommonFlags& flags, int max_outer_iters) {
    sphnn::OptimConfig cfg = flags.config();
    const auto statements = sphnn::parse_statement_lines(slurp(statements_path));
    if (statements.empty()) throw std::invalid_argument("no statements in input");
    const auto embeddings = sphnn::parse_embeddings(slurp(embeddings_path));

    std::vector<sphnn::OrientedConstraint> constraints;
    std::map<std::string, sphnn::Vec> orientations;
    for (const auto& st : statements) {
        const sphnn::Constraint c = sphnn::spatialise(st);
        constraints.push_back({c.target, c.a, c.b});
        for (const auto& term : {c.a, c.b}) {
            const auto it = embeddings.find(term);
            if (it == embeddings.end())
                throw std::invalid_argument("term has no embedding vector: " + term);
            orientations[term] = it->second;
        }
    }
    cfg.dim = static_cast<int>(orientations.begin()->second.size());
    const auto result = sphnn::realize_fixed_orientation(constraints, orientations, cfg,
                                                         max_outer_iters);
    nlohmann::json out;
    out["meta"] = meta_json(cfg);
    out["verdict"] = result.sat ? "sat" : "unsat";
    if (result.sat) {
        sphnn::Configuration config(result.model.begin(), result.model.end());
        out["model"] = nlohmann::json::parse(sphnn::configuration_to_json(config));
    }
    out["trace"] = trace_json(result.trace);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_suite(int n, const CommonFlags& flags, const std::string& out_path) {
    const sphnn::Suite suite = sphnn::generate_chain_suite(n, flags.seed);
    const std::string json = sphnn::suite_to_json(suite);
    if (out_path.empty())
        std::cout << json << "\n";
    else
        spill(out_path, json);
    return kExitOk;
}

int cmd_bench(const std::string& suite_path, const CommonFlags& flags, int jobs,
              double timeout_exit_frac, const std::string& out_path) {
    const sphnn::OptimConfig cfg = flags.config();
    const sphnn::Suite suite = sphnn::suite_from_json(slurp(suite_path));
    std::vector<sphnn::Task> tasks;
    std::vector<bool> labels;
    const auto& table = sphnn::composition_table();
    for (const auto& group : suite.groups)
        for (const auto& task : group) {
            tasks.push_back(task);
            labels.push_back(sphnn::chain_valid(task, table));
        }
    const auto results = sphnn::run_benchmark(tasks, labels, flags.time_limit_ms, cfg, jobs);
    std::string csv = sphnn::bench_csv(results);

    int agree = 0, timeouts = 0;
    for (const auto& r : results) {
        if (r.agrees) ++agree;
        if (r.timed_out) ++timeouts;
    }
    std::ostringstream summary;
    summary << "n=" << suite.n << " agree=" << agree << "/" << results.size()
            << " timeouts=" << timeouts;
    csv += summary.str() + "\n";
    if (out_path.empty())
        std::cout << csv;
    else
        spill(out_path, csv);
    std::cerr << summary.str() << "\n";
    const double frac = results.empty() ? 0.0 : double(timeouts) / double(results.size());
    return frac > timeout_exit_frac ? kExitTimeoutDominated : kExitOk;
}

int cmd_verify(const std::string& transcript_path, const CommonFlags& flags) {
    const sphnn::OptimConfig cfg = flags.config();
    const auto rounds = sphnn::verify_transcript(slurp(transcript_path), cfg);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& round : rounds) {
        nlohmann::json jr = nlohmann::json::parse(sphnn::report_to_json(round.report));
        jr["reply"] = round.reply;
        out.push_back(jr);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_composition(const std::string& out_path) {
    const std::string json = sphnn::composition_table().to_json();
    if (out_path.empty())
        std::cout << json << "\n";
    else
        spill(out_path, json);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sphere-configuration syllogistic reasoner"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* decide = app.add_subcommand("decide", "decide a task file (or inline statements)");
    std::string decide_input;
    bool decide_inline = false;
    decide->add_option("input", decide_input, "task file, or inline text with --inline")
        ->required();
    decide->add_flag("--inline", decide_inline, "treat input as `;`-separated inline text");
    flags.attach(decide);

    auto* enumerate = app.add_subcommand("enumerate", "decide all 256 classic forms");
    std::string enum_out;
    enumerate->add_option("-o,--out", enum_out, "CSV output path (default stdout)");
    flags.attach(enumerate);

    auto* render = app.add_subcommand("render", "render a model JSON as SVG");
    std::string render_model, render_out;
    render->add_option("model", render_model, "model JSON path")->required();
    render->add_option("-o,--out", render_out, "SVG output path (default stdout)");

    auto* embed = app.add_subcommand("embed-decide",
                                     "fixed-orientation decision from embedding vectors");
    std::string embed_statements, embed_vectors;
    int max_outer_iters = 9;
    embed->add_option("statements", embed_statements, "statements file")->required();
    embed->add_option("embeddings", embed_vectors, "embedding vectors file")->required();
    embed->add_option("--max-outer-iters", max_outer_iters, "construction sweeps (default 9)");
    flags.attach(embed);

    auto* suite = app.add_subcommand("suite", "generate a seeded chain-task suite");
    int suite_n = 3;
    std::string suite_out;
    suite->add_option("-n,--terms", suite_n, "terms per task (>= 3)")->required();
    suite->add_option("-o,--out", suite_out, "JSON output path (default stdout)");
    flags.attach(suite);

    auto* bench = app.add_subcommand("bench", "run a suite under a time limit");
    std::string bench_suite, bench_out;
    int jobs = 0;
    double timeout_exit_frac = 0.5;
    bench->add_option("suite", bench_suite, "suite JSON path")->required();
    bench->add_option("--jobs", jobs, "worker threads (default: CPU count)");
    bench->add_option("--timeout-exit-frac", timeout_exit_frac,
                      "exit 4 when the timed-out fraction exceeds this");
    bench->add_option("-o,--out", bench_out, "CSV output path (default stdout)");
    flags.attach(bench);

    auto* verify = app.add_subcommand("verify", "verify circle-relation replies in a transcript");
    std::string transcript;
    verify->add_option("transcript", transcript, "transcript file")->required();
    flags.attach(verify);

    auto* composition = app.add_subcommand("composition", "export the relation composition table");
    std::string composition_out;
    composition->add_option("-o,--out", composition_out, "JSON output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decide->parsed()) return cmd_decide(decide_input, decide_inline, flags);
        if (enumerate->parsed()) return cmd_enumerate(flags, enum_out);
        if (render->parsed()) return cmd_render(render_model, render_out);
        if (embed->parsed())
            return cmd_embed_decide(embed_statements, embed_vectors, flags, max_outer_iters);
        if (suite->parsed()) return cmd_suite(suite_n, flags, suite_out);
        if (bench->parsed())
            return cmd_bench(bench_suite, flags, jobs, timeout_exit_frac, bench_out);
        if (verify->parsed()) return cmd_verify(transcript, flags);
        if (composition->parsed()) return cmd_composition(composition_out);
    } catch (const sphnn::StepCapExceeded& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const sphnn::TimeLimitExceeded& e) {
        std::cerr << "time limit: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
