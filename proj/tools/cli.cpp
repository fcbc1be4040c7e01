#include "cli.hpp"

#include "fdyadic/electric.hpp"
#include "fdyadic/errors.hpp"
#include "fdyadic/graph.hpp"
#include "fdyadic/growth.hpp"
#include "fdyadic/io.hpp"
#include "fdyadic/verify.hpp"
#include "fdyadic/walk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fdyadic::cli {

namespace {

using nlohmann::json;

struct Output {
    std::string path;  // empty = stdout

    void write(std::ostream& out, const std::string& text) const {
        if (path.empty()) {
            out << text;
            if (!text.empty() && text.back() != '\n') out << "\n";
            return;
        }
        std::ofstream file(path);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        file << text;
    }
};

std::string pretty_table(const CsvTable& table) {
    std::vector<size_t> width(table.header.size(), 0);
    auto grow = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    };
    grow(table.header);
    for (const auto& r : table.rows) grow(r);
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i)
            out << std::left << std::setw(static_cast<int>(width[i]) + 2) << row[i];
        out << "\n";
    };
    emit(table.header);
    for (const auto& r : table.rows) emit(r);
    return out.str();
}

BitWord parse_word_arg(const std::string& text) {
    return BitWord::from_rational(parse_vertex(text));
}

TypeRules rules_by_name(const std::string& name, int arity) {
    if (name == "fibonacci") return TypeRules::fibonacci();
    if (name == "binary") return TypeRules::binary();
    if (name == "path") return TypeRules::path();
    if (name == "m-ary") return TypeRules::m_ary(arity);
    throw std::invalid_argument("unknown tree: " + name);
}

std::string emit_csv_or_pretty(const CsvTable& table, bool pretty) {
    return pretty ? pretty_table(table) : table.str();
}

int command_verify(uint64_t seed, int threads, const std::vector<int>& criteria,
                   std::ostream& out) {
    verify::Options options;
    options.seed = seed;
    options.threads = threads;
    options.only = criteria;
    auto results = verify::run_acceptance(options);
    for (const auto& r : results) {
        out << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name;
        if (!r.detail.empty()) out << " [" << r.detail << "]";
        out << " (" << std::fixed << std::setprecision(2) << r.seconds << "s)\n";
        out.unsetf(std::ios::fixed);
    }
    return verify::all_passed(results) ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schreier graph of Thompson's group F on the dyadic orbit: growth series, "
                 "electrical transience, and random-walk boundary experiments"};
    app.require_subcommand(1);

    // Common option storage.
    std::string root = "1/2";
    int radius = 5;
    std::string format = "csv";
    Output output;
    bool pretty = false;
    int threads = 0;
    int horizon = 30;
    std::string tree_name = "fibonacci";
    int arity = 3;
    std::string q_text = "phi";

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", output.path, "write to a file instead of stdout");
        cmd->add_flag("--pretty", pretty, "human-readable table output");
        cmd->add_option("--threads", threads, "worker cap (0 = hardware)");
    };

    auto* cmd_ball = app.add_subcommand("ball", "BFS ball: sphere sizes and structure");
    cmd_ball->add_option("--root", root, "center vertex (m/2^k or bit word)");
    cmd_ball->add_option("--radius", radius, "ball radius")->check(CLI::NonNegativeNumber);
    cmd_ball->add_option("--format", format, "csv | json | dot");
    add_output(cmd_ball);

    auto* cmd_dot = app.add_subcommand("export-dot", "ball as a DOT digraph");
    cmd_dot->add_option("--root", root, "center vertex");
    cmd_dot->add_option("--radius", radius, "ball radius")->check(CLI::NonNegativeNumber);
    add_output(cmd_dot);

    auto* cmd_growth = app.add_subcommand("growth", "generating functions and coefficients");
    cmd_growth->add_option("--horizon", horizon, "coefficients through this order");
    cmd_growth->add_option("--format", format, "csv | json");
    add_output(cmd_growth);

    auto* cmd_geo = app.add_subcommand("geodesics", "geodesic word counts by length");
    cmd_geo->add_option("--root", root, "base vertex");
    cmd_geo->add_option("--radius", radius, "count through this length");
    cmd_geo->add_option("--format", format, "csv | json");
    add_output(cmd_geo);

    int cone_horizon = 6;
    auto* cmd_cone = app.add_subcommand("cone-types", "cone classification of ball vertices");
    cmd_cone->add_option("--root", root, "base vertex");
    cmd_cone->add_option("--radius", radius, "ball radius")->default_val(20);
    cmd_cone->add_option("--horizon", cone_horizon, "signature depth");
    cmd_cone->add_option("--format", format, "csv | json");
    add_output(cmd_cone);

    auto* cmd_tree = app.add_subcommand("tree", "extract the branching subtree");
    cmd_tree->add_option("--root", root, "ball center");
    cmd_tree->add_option("--radius", radius, "ball radius")->default_val(16);
    cmd_tree->add_option("--format", format, "json | dot");
    add_output(cmd_tree);

    auto* cmd_res = app.add_subcommand("resistance", "resistance profile and capacity");
    cmd_res->add_option("--tree", tree_name, "fibonacci | binary | path | m-ary | extracted");
    cmd_res->add_option("--arity", arity, "arity for m-ary");
    cmd_res->add_option("--horizon", horizon, "levels to compute");
    cmd_res->add_option("--radius", radius, "ball radius when --tree extracted")->default_val(16);
    add_output(cmd_res);

    auto* cmd_bound = app.add_subcommand("bound", "growth-condition constants and capacity bound");
    cmd_bound->add_option("--tree", tree_name, "fibonacci | binary | path | m-ary | extracted");
    cmd_bound->add_option("--arity", arity, "arity for m-ary");
    cmd_bound->add_option("--q", q_text, "growth base: phi, an integer, or p/q");
    cmd_bound->add_option("--horizon", horizon, "verify conditions through this depth");
    cmd_bound->add_option("--radius", radius, "ball radius when --tree extracted")->default_val(16);
    add_output(cmd_bound);

    std::string kind = "escape";
    std::string graph = "h";
    std::string start_text, cut_text = "101", entry_text;
    std::vector<std::string> starts_text;
    std::vector<int> start_path;
    uint64_t seed = 0;
    uint32_t walkers = 10000, steps = 10000;
    std::string model_text = "collapsed-simple";
    std::string trace_path;
    uint32_t trace_walkers = 4;
    auto* cmd_walk = app.add_subcommand("walk", "seeded Monte Carlo random walks");
    cmd_walk->add_option("--kind", kind, "escape | trap | harmonic");
    cmd_walk->add_option("--graph", graph, "h | fibonacci | binary | path");
    cmd_walk->add_option("--start", start_text, "start vertex (graph h)");
    cmd_walk->add_option("--start-path", start_path, "child path from the root (tree graphs)");
    cmd_walk->add_option("--starts", starts_text, "start vertices for harmonic estimates");
    cmd_walk->add_option("--cut", cut_text, "cut vertex for traps");
    cmd_walk->add_option("--entry", entry_text, "marked branch entry (harmonic)");
    cmd_walk->add_option("--walkers", walkers, "number of walkers");
    cmd_walk->add_option("--steps", steps, "steps per walker");
    cmd_walk->add_option("--seed", seed, "master seed")->required();
    cmd_walk->add_option("--model", model_text, "collapsed-simple | generator-uniform");
    cmd_walk->add_option("--trace", trace_path, "CSV trace of the first walkers");
    cmd_walk->add_option("--trace-walkers", trace_walkers, "walkers to trace (capped)");
    add_output(cmd_walk);

    uint64_t verify_seed = verify::Options{}.seed;
    std::vector<int> criteria;
    auto* cmd_verify = app.add_subcommand("verify", "run the verification suite");
    cmd_verify->add_option("--seed", verify_seed, "Monte Carlo master seed");
    cmd_verify->add_option("--criteria", criteria, "run these criteria only");
    cmd_verify->add_option("--threads", threads, "worker cap (0 = hardware)");

    std::vector<const char*> argv;
    argv.push_back("fdyadic");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream buffer;
        int code = app.exit(e, buffer, buffer);
        (code == 0 ? out : err) << buffer.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_ball->parsed() || cmd_dot->parsed()) {
            Ball ball = Ball::build(parse_word_arg(root), radius);
            if (cmd_dot->parsed() || format == "dot") {
                output.write(out, ball_dot(ball));
            } else if (format == "json") {
                output.write(out, ball_json(ball, check_tree_likeness(ball)));
            } else {
                output.write(out, emit_csv_or_pretty(sphere_table(ball), pretty));
            }
            return 0;
        }
        if (cmd_growth->parsed()) {
            if (format == "json") output.write(out, growth_json(horizon));
            else output.write(out, emit_csv_or_pretty(growth_coefficient_table(horizon), pretty));
            return 0;
        }
        if (cmd_geo->parsed()) {
            Ball ball = Ball::build(parse_word_arg(root), radius);
            if (format == "json") {
                json j;
                for (int n = 0; n <= ball.radius(); ++n)
                    j["counts"].push_back(geodesic_word_count(ball, n));
                output.write(out, j.dump(2));
            } else {
                output.write(out, emit_csv_or_pretty(geodesic_table(ball), pretty));
            }
            return 0;
        }
        if (cmd_cone->parsed()) {
            Ball ball = Ball::build(parse_word_arg(root), radius);
            auto classes = classify_cone_types(ball, cone_horizon);
            if (format == "json") output.write(out, cone_types_json(ball, classes));
            else output.write(out, emit_csv_or_pretty(cone_type_table(ball, classes), pretty));
            if (!classes.ok) {
                err << "cone classification failed: " << classes.message << "\n";
                return 2;
            }
            return 0;
        }
        if (cmd_tree->parsed()) {
            Ball ball = Ball::build(parse_word_arg(root), radius);
            auto classes = classify_cone_types(ball, cone_horizon);
            auto extracted = extract_fibonacci_tree(ball, classes);
            if (format == "dot") output.write(out, extracted_tree_dot(ball, extracted));
            else output.write(out, extracted_tree_json(ball, extracted));
            return 0;
        }
        if (cmd_res->parsed()) {
            if (tree_name == "extracted") {
                Ball ball = Ball::build(parse_word_arg(root), radius);
                auto extracted = extract_fibonacci_tree(ball, classify_cone_types(ball, 6));
                int h = std::min(horizon, extracted.complete_depth);
                output.write(out, capacity_json("extracted", capacity_report(extracted.tree, h)));
            } else {
                output.write(out, capacity_json(tree_name,
                                                capacity_report(rules_by_name(tree_name, arity),
                                                                horizon)));
            }
            return 0;
        }
        if (cmd_bound->parsed()) {
            GoldenNumber q = parse_golden(q_text);
            if (tree_name == "extracted") {
                Ball ball = Ball::build(parse_word_arg(root), radius);
                auto extracted = extract_fibonacci_tree(ball, classify_cone_types(ball, 6));
                int h = std::min(horizon, extracted.complete_depth);
                output.write(out, bound_json("extracted",
                                             capacity_bound_constants(extracted.tree, q, h)));
            } else {
                output.write(out, bound_json(tree_name,
                                             capacity_bound_constants(rules_by_name(tree_name, arity),
                                                                      q, horizon)));
            }
            return 0;
        }
        if (cmd_walk->parsed()) {
            WalkConfig config;
            config.model = parse_walk_model(model_text);
            config.walkers = walkers;
            config.steps = steps;
            config.seed = seed;
            config.threads = threads;
            auto t0 = std::chrono::steady_clock::now();
            std::vector<std::pair<std::string, WalkEstimate>> estimates;

            if (kind == "escape") {
                if (graph == "h") {
                    BitWord start = parse_word_arg(start_text.empty() ? "1/2" : start_text);
                    estimates.emplace_back("no_return", run_escape_graph(start, config));
                } else {
                    estimates.emplace_back("no_return",
                                           run_escape_tree(rules_by_name(graph, arity),
                                                           start_path, config));
                }
            } else if (kind == "trap") {
                if (graph == "h") {
                    BitWord cut = parse_word_arg(cut_text);
                    std::vector<TrapSpec> traps;
                    for (const auto& nb : neighbors(cut))
                        if (!nb.loop) {
                            bool dup = false;
                            for (const auto& t : traps)
                                if (t.entry == nb.image) dup = true;
                            if (!dup) traps.push_back({cut, nb.image});
                        }
                    BitWord start = start_text.empty() ? cut : parse_word_arg(start_text);
                    auto result = run_trap_graph(start, traps, config);
                    for (size_t i = 0; i < traps.size(); ++i)
                        estimates.emplace_back("branch_" + traps[i].entry.str(), result[i]);
                } else {
                    auto result = run_trap_tree(rules_by_name(graph, arity), start_path, config);
                    for (size_t i = 0; i < result.size(); ++i)
                        estimates.emplace_back("branch_" + std::to_string(i), result[i]);
                }
            } else if (kind == "harmonic") {
                BitWord cut = parse_word_arg(cut_text);
                BitWord entry = entry_text.empty() ? apply_word(Generator::B, cut)
                                                   : parse_word_arg(entry_text);
                std::vector<BitWord> starts;
                if (starts_text.empty()) {
                    starts.push_back(apply_sequence(std::vector<Generator>(6, Generator::B), cut));
                    std::vector<Generator> other{Generator::AInv, Generator::B, Generator::B,
                                                 Generator::B, Generator::B, Generator::B};
                    starts.push_back(apply_sequence(other, cut));
                } else {
                    for (const auto& s : starts_text) starts.push_back(parse_word_arg(s));
                }
                auto result = harmonic_estimate(starts, TrapSpec{cut, entry}, config);
                for (size_t i = 0; i < starts.size(); ++i)
                    estimates.emplace_back("start_" + starts[i].str(), result[i]);
            } else {
                throw std::invalid_argument("unknown walk kind: " + kind);
            }

            if (!trace_path.empty()) {
                if (graph != "h") throw std::invalid_argument("traces cover graph walks only");
                BitWord start = parse_word_arg(start_text.empty() ? cut_text : start_text);
                CsvTable trace;
                trace.header = {"walker", "step", "word"};
                uint32_t n_trace = std::min<uint32_t>(trace_walkers, 100);
                uint32_t per_walker = std::min<uint32_t>(steps, 100000 / std::max(1u, n_trace));
                for (uint32_t w = 0; w < n_trace; ++w) {
                    auto states = sample_graph_path(start, config, w, per_walker);
                    for (size_t s = 0; s < states.size(); ++s)
                        trace.rows.push_back({std::to_string(w), std::to_string(s),
                                              states[s].str()});
                }
                std::ofstream file(trace_path);
                if (!file) throw std::invalid_argument("cannot open trace file: " + trace_path);
                file << trace.str();
            }

            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count();
            output.write(out, walk_report_json(kind, config, estimates, seconds));
            return 0;
        }
        if (cmd_verify->parsed()) {
            return command_verify(verify_seed, threads, criteria, out);
        }
    } catch (const VerificationError& e) {
        err << "verification failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no command\n";
    return 1;
}

}  // namespace fdyadic::cli
