#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tgg/dot.hpp"
#include "tgg/engine.hpp"
#include "tgg/flowgraphs.hpp"
#include "tgg/minijava.hpp"
#include "tgg/model_json.hpp"

namespace {

using namespace tgg;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io-error", "cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// write to a temp file, then rename: partially written outputs never land
void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("io-error", "cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("io-error", "cannot move output into place: " + path);
    }
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(out_path, content);
    }
}

struct Session {
    RuleSet ruleset;
    Registries registries;
    bool trace = false;

    explicit Session(const std::string& rules_path) {
        if (rules_path.empty()) {
            ruleset = flowgraphs::default_ruleset();
        } else {
            ruleset = load_ruleset(read_file(rules_path));
        }
        registries = flowgraphs::make_registries();
    }

    void print_trace(const std::vector<ApplicationRecord>& records) const {
        if (!trace) return;
        for (const auto& record : records) std::cerr << trace_line(record) << "\n";
    }
};

Graph load_flow_input(const std::string& path, const Session& session) {
    Json j = parse_json_text(read_file(path));
    if (j.contains("target")) {
        return graph_from_json(j.at("target"), session.ruleset.schema.target_mm);
    }
    return graph_from_json(j, session.ruleset.schema.target_mm);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Bidirectional mini-Java <-> flowgraph transformations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string input, output, dot_path, rules_path;
    bool trace = std::getenv("TGG_TRACE") && std::string(std::getenv("TGG_TRACE")) == "1";
    app.add_option("--rules", rules_path, "rule set JSON (default: embedded flowgraphs set)");
    app.add_flag("--trace", trace, "print one line per rule application to stderr");

    auto add_io = [&](CLI::App* cmd, bool with_dot) {
        cmd->add_option("input", input, "input file")->required();
        cmd->add_option("-o,--out", output, "output file (default: stdout)");
        if (with_dot) cmd->add_option("--dot", dot_path, "also write a DOT rendering");
    };

    CLI::App* parse_cmd = app.add_subcommand("parse", "mini-Java source -> AST model JSON");
    add_io(parse_cmd, false);
    CLI::App* unparse_cmd = app.add_subcommand("unparse", "AST model JSON -> mini-Java source");
    add_io(unparse_cmd, false);
    CLI::App* forward_cmd =
        app.add_subcommand("forward", "mini-Java source -> triple JSON with flowgraph");
    add_io(forward_cmd, true);
    CLI::App* backward_cmd =
        app.add_subcommand("backward", "flowgraph (graph or triple JSON) -> mini-Java source");
    add_io(backward_cmd, true);
    CLI::App* roundtrip_cmd =
        app.add_subcommand("roundtrip", "source -> forward -> backward -> source");
    add_io(roundtrip_cmd, false);
    CLI::App* check_cmd = app.add_subcommand("check", "consistency-check a triple JSON");
    add_io(check_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        Session session(rules_path);
        session.trace = trace;

        if (*parse_cmd) {
            Graph ast = minijava::parse_program(read_file(input));
            emit(output, to_text(graph_to_json(ast)));
            return 0;
        }
        if (*unparse_cmd) {
            Json j = parse_json_text(read_file(input));
            Graph ast = graph_from_json(j, session.ruleset.schema.source_mm);
            emit(output, minijava::unparse_program(ast));
            return 0;
        }
        if (*forward_cmd) {
            Graph ast = minijava::parse_program(read_file(input));
            TransformResult result = forward_transform(ast, session.ruleset, session.registries);
            session.print_trace(result.trace);
            emit(output, to_text(triple_to_json(result.triple)));
            if (!dot_path.empty()) {
                write_file_atomic(dot_path, export_dot(result.triple, {trace}));
            }
            return 0;
        }
        if (*backward_cmd) {
            Graph flow = load_flow_input(input, session);
            TransformResult result = backward_transform(flow, session.ruleset, session.registries);
            session.print_trace(result.trace);
            emit(output, minijava::unparse_program(result.triple.source()));
            if (!dot_path.empty()) {
                write_file_atomic(dot_path, export_dot(result.triple, {trace}));
            }
            return 0;
        }
        if (*roundtrip_cmd) {
            std::string text = read_file(input);
            std::string expected = minijava::normalize(text);
            Graph ast = minijava::parse_program(text);
            TransformResult fwd = forward_transform(ast, session.ruleset, session.registries);
            session.print_trace(fwd.trace);
            TransformResult bwd =
                backward_transform(fwd.triple.target(), session.ruleset, session.registries);
            session.print_trace(bwd.trace);
            std::string actual = minijava::unparse_program(bwd.triple.source());
            emit(output, actual);
            if (actual != expected) {
                std::cerr << "round-trip drifted from normalized source\n";
                return 1;
            }
            return 0;
        }
        if (*check_cmd) {
            Json j = parse_json_text(read_file(input));
            TripleModel triple = triple_from_json(j, session.ruleset.schema);
            CheckResult result = check_consistency(triple, session.ruleset, session.registries);
            session.print_trace(result.trace);
            if (!dot_path.empty()) {
                write_file_atomic(dot_path, export_dot(triple, {trace}));
            }
            std::ostringstream report;
            report << (result.accepted ? "consistent" : "inconsistent") << "\n";
            for (const auto& line : result.report) report << line << "\n";
            emit(output, report.str());
            return result.accepted ? 0 : 1;
        }
    } catch (const TransformStuck& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return e.code() == "stuck" ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 3;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
