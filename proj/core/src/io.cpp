#include "fdyadic/io.hpp"

#include "fdyadic/growth.hpp"

#include <json.hpp>

#include <sstream>

namespace fdyadic {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string CsvTable::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

CsvTable CsvTable::parse(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

CsvTable sphere_table(const Ball& ball) {
    CsvTable t;
    t.header = {"n", "sphere_size", "ball_size"};
    uint64_t cumulative = 0;
    for (int n = 0; n <= ball.radius(); ++n) {
        uint64_t s = ball.sphere_size(n);
        cumulative += s;
        t.rows.push_back({std::to_string(n), std::to_string(s), std::to_string(cumulative)});
    }
    return t;
}

CsvTable geodesic_table(const Ball& ball) {
    CsvTable t;
    t.header = {"n", "geodesic_words"};
    for (int n = 0; n <= ball.radius(); ++n)
        t.rows.push_back({std::to_string(n), std::to_string(geodesic_word_count(ball, n))});
    return t;
}

namespace {

std::string join_counts(const std::vector<uint64_t>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

CsvTable cone_type_table(const Ball& ball, const ConeClassification& classes) {
    CsvTable t;
    t.header = {"value", "word", "dist", "type", "point_signature", "word_signature"};
    for (uint32_t v = 0; v < ball.size(); ++v) {
        if (classes.label[v] < 0) continue;
        const ConeClass* cls = nullptr;
        for (const auto& c : classes.classes)
            if (c.label == classes.label[v]) cls = &c;
        t.rows.push_back({ball.value(v).str(), ball.word(v).str(), std::to_string(ball.dist(v)),
                          std::to_string(classes.label[v]),
                          cls ? join_counts(cls->signature.points) : "",
                          cls ? join_counts(cls->signature.words) : ""});
    }
    return t;
}

CsvTable growth_coefficient_table(int horizon) {
    auto a = recurrence_series(TransferMatrix::word_counts(), horizon);
    auto b = recurrence_series(TransferMatrix::point_counts(), horizon);
    CsvTable t;
    t.header = {"n"};
    for (int i = 0; i < kConeTypeCount; ++i) t.header.push_back("words_type" + std::to_string(i));
    for (int i = 0; i < kConeTypeCount; ++i) t.header.push_back("points_type" + std::to_string(i));
    for (int n = 0; n <= horizon; ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (int i = 0; i < kConeTypeCount; ++i) row.push_back(a[n][i].str());
        for (int i = 0; i < kConeTypeCount; ++i) row.push_back(b[n][i].str());
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

std::string ball_dot(const Ball& ball) {
    std::ostringstream out;
    out << "digraph schreier {\n  node [shape=ellipse];\n";
    for (uint32_t v = 0; v < ball.size(); ++v) {
        out << "  \"" << ball.value(v).str() << "\" [label=\"" << ball.value(v).str() << "\\n"
            << ball.word(v).str() << "\"];\n";
    }
    for (uint32_t v = 0; v < ball.size(); ++v) {
        if (!ball.interior(v)) continue;
        BitWord w = ball.word(v);
        out << "  \"" << ball.value(v).str() << "\" -> \""
            << apply_word(Generator::A, w).to_rational().str() << "\" [label=\"a\"];\n";
        out << "  \"" << ball.value(v).str() << "\" -> \""
            << apply_word(Generator::B, w).to_rational().str() << "\" [label=\"b\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string extracted_tree_dot(const Ball& ball, const ExtractedTree& tree) {
    std::ostringstream out;
    out << "digraph branching_tree {\n  node [shape=circle];\n";
    for (uint32_t ti = 0; ti < tree.tree.size(); ++ti) {
        uint32_t bv = tree.ball_index[ti];
        out << "  \"" << ball.value(bv).str() << "\" [label=\"" << ball.value(bv).str()
            << "\\n" << ball.word(bv).str() << "\" style=filled fillcolor=\""
            << (tree.tree.type[ti] == 0 ? "grey" : "white") << "\"];\n";
    }
    for (uint32_t ti = 0; ti < tree.tree.size(); ++ti) {
        for (size_t i = 0; i < tree.tree.child_count(ti); ++i) {
            uint32_t ci = tree.tree.child(ti, i);
            out << "  \"" << ball.value(tree.ball_index[ti]).str() << "\" -> \""
                << ball.value(tree.ball_index[ci]).str() << "\";\n";
        }
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

json estimate_json(const WalkEstimate& e) {
    return json{{"estimate", e.estimate},
                {"samples", e.samples},
                {"ci95_half_width", e.half_width}};
}

json golden_json(const GoldenNumber& g) {
    return json{{"value", g.str()}, {"approx", g.to_double()}};
}

}  // namespace

std::string ball_json(const Ball& ball, const TreeLikenessReport& report) {
    json j;
    j["root"] = ball.value(ball.root()).str();
    j["radius"] = ball.radius();
    j["vertices"] = ball.size();
    j["sphere_sizes"] = ball.sphere_sizes();
    j["tree_likeness"] = {
        {"interior_vertices", report.interior_count},
        {"loop_vertices", report.loop_vertex_count},
        {"loop_edges", report.loop_edge_count},
        {"parallel_pairs", report.parallel_pair_count},
        {"same_sphere_edges", report.horizontal_edge_count},
        {"multi_predecessor_vertices", report.multi_predecessor_count},
        {"collapsed_acyclic", report.collapsed_acyclic()},
    };
    return j.dump(2);
}

std::string growth_json(int horizon) {
    auto word = resolvent_vector(TransferMatrix::word_counts());
    auto point = resolvent_vector(TransferMatrix::point_counts());
    json j;
    j["geodesic_growth"] = word[0].str();
    j["orbit_growth"] = point[0].str();
    for (int i = 0; i < kConeTypeCount; ++i) {
        j["word_components"].push_back(word[i].str());
        j["point_components"].push_back(point[i].str());
    }
    auto a = recurrence_series(TransferMatrix::word_counts(), horizon);
    auto b = recurrence_series(TransferMatrix::point_counts(), horizon);
    for (int n = 0; n <= horizon; ++n) {
        json row;
        row["n"] = n;
        for (int i = 0; i < kConeTypeCount; ++i) {
            row["words"].push_back(a[n][i].str());
            row["points"].push_back(b[n][i].str());
        }
        j["coefficients"].push_back(row);
    }
    return j.dump(2);
}

std::string cone_types_json(const Ball& ball, const ConeClassification& classes) {
    json j;
    j["horizon"] = classes.horizon;
    j["classified_dist"] = classes.classified_dist;
    j["ok"] = classes.ok;
    j["message"] = classes.message;
    for (const auto& c : classes.classes) {
        json cls;
        cls["label"] = c.label;
        cls["members"] = c.members;
        cls["representative_value"] = ball.value(c.representative).str();
        cls["representative_word"] = ball.word(c.representative).str();
        cls["point_signature"] = c.signature.points;
        cls["word_signature"] = c.signature.words;
        j["classes"].push_back(cls);
    }
    return j.dump(2);
}

std::string extracted_tree_json(const Ball& ball, const ExtractedTree& tree) {
    json j;
    j["root_value"] = ball.value(tree.root_ball_index).str();
    j["root_word"] = ball.word(tree.root_ball_index).str();
    j["root_dist"] = ball.dist(tree.root_ball_index);
    j["complete_depth"] = tree.complete_depth;
    j["vertices"] = tree.tree.size();
    j["level_sizes"] = tree.tree.level_sizes();
    uint64_t branching = 0, passing = 0;
    for (int8_t t : tree.tree.type) (t == 0 ? branching : passing)++;
    j["branching_vertices"] = branching;
    j["passing_vertices"] = passing;
    return j.dump(2);
}

std::string capacity_json(const std::string& tree_name, const CapacityReport& report) {
    json j;
    j["tree"] = tree_name;
    j["root_degree"] = report.root_degree;
    j["monotone_increasing"] = report.monotone_increasing;
    switch (report.verdict) {
        case CapacityReport::Verdict::Transient: j["verdict"] = "transient"; break;
        case CapacityReport::Verdict::Recurrent: j["verdict"] = "recurrent"; break;
        default: j["verdict"] = "inconclusive";
    }
    j["certified"] = report.certified;
    for (size_t n = 0; n < report.resistance.size(); ++n) {
        const auto& r = report.resistance[n];
        json row{{"n", n + 1}, {"approx", r.mid()}};
        if (r.exact()) {
            row["exact"] = to_string(r.lo);
        } else {
            row["lower"] = to_string(r.lo);
            row["upper"] = to_string(r.hi);
        }
        j["resistance"].push_back(row);
    }
    if (report.verdict == CapacityReport::Verdict::Transient) {
        j["limit"] = {{"lower", to_string(report.limit_lower)},
                      {"upper", to_string(report.limit_upper)},
                      {"approx", (report.limit_lower.convert_to<double>() +
                                  report.limit_upper.convert_to<double>()) /
                                     2}};
        if (report.limit_square) j["limit"]["square"] = to_string(*report.limit_square);
        if (report.limit_exact) j["limit"]["exact"] = to_string(*report.limit_exact);
        j["capacity"] = {{"lower", to_string(report.capacity_lower)},
                         {"upper", to_string(report.capacity_upper)},
                         {"approx", report.capacity_mid()}};
        j["escape_probability"] = {{"lower", to_string(report.escape_lower)},
                                   {"upper", to_string(report.escape_upper)},
                                   {"approx", report.escape_mid()}};
    }
    return j.dump(2);
}

std::string bound_json(const std::string& tree_name, const CapacityBoundConstants& constants) {
    json j;
    j["tree"] = tree_name;
    j["q"] = golden_json(constants.q);
    j["horizon"] = constants.horizon;
    j["conditions_hold"] = constants.conditions_hold;
    j["c"] = constants.c.str();
    j["C"] = constants.big_c.str();
    j["bound"] = constants.bound.str();
    j["c_approx"] = constants.c.to_double();
    j["C_approx"] = constants.big_c.to_double();
    j["bound_approx"] = constants.bound.to_double();
    j["c_argmin"] = constants.c_argmin;
    j["C_argmax"] = constants.big_c_argmax;
    return j.dump(2);
}

std::string walk_report_json(const std::string& kind, const WalkConfig& config,
                             const std::vector<std::pair<std::string, WalkEstimate>>& estimates,
                             double seconds) {
    json j;
    j["kind"] = kind;
    j["config"] = {{"model", walk_model_name(config.model)},
                   {"walkers", config.walkers},
                   {"steps", config.steps},
                   {"seed", config.seed},
                   {"threads", config.threads}};
    for (const auto& [name, est] : estimates) j["estimates"][name] = estimate_json(est);
    j["runtime_seconds"] = seconds;
    return j.dump(2);
}

}  // namespace fdyadic
