#pragma once

// Seeded random generator for mini-Java programs in the statement shapes the
// flowgraphs rule set translates. Emits source text; the frontend normalizes.

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace proggen {

struct GenConfig {
    int max_statements = 6;
    int max_depth = 2;      // nesting depth of if/while
    bool allow_empty_blocks = true;
};

class ProgramGen {
public:
    explicit ProgramGen(std::uint64_t seed, GenConfig config = {})
        : rng_(seed), config_(config) {}

    std::string generate() {
        budget_ = 1 + static_cast<int>(rng_() % config_.max_statements);
        std::ostringstream out;
        out << "void m() {\n";
        emit_block(out, 1, 0, false);
        out << "}\n";
        return out.str();
    }

private:
    std::string ident() {
        static const char* pool[] = {"a", "b", "c", "d", "e", "f"};
        return pool[rng_() % 6];
    }

    std::string int_lit() { return std::to_string(rng_() % 10); }

    std::string binop() {
        static const char* ops[] = {"+", "-", "*", "/", "<", "<=", ">", ">=",
                                    "==", "!=", "&&", "||"};
        return ops[rng_() % 12];
    }

    std::string rel() {
        static const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
        return ops[rng_() % 6];
    }

    void indent(std::ostringstream& out, int depth) {
        for (int i = 0; i < depth; ++i) out << "    ";
    }

    void emit_block(std::ostringstream& out, int depth, int nesting, bool in_loop) {
        int limit = 1 + static_cast<int>(rng_() % 3);
        if (config_.allow_empty_blocks && rng_() % 8 == 0) limit = 0;
        for (int i = 0; i < limit && budget_ > 0; ++i) {
            emit_statement(out, depth, nesting, in_loop);
        }
    }

    void emit_statement(std::ostringstream& out, int depth, int nesting, bool in_loop) {
        --budget_;
        int kinds = nesting < config_.max_depth ? 7 : 5;
        switch (rng_() % kinds) {
            case 0:  // assignment with expression
                indent(out, depth);
                out << ident() << " = " << ident() << " " << binop() << " " << int_lit()
                    << ";\n";
                break;
            case 1:  // simple assignment
                indent(out, depth);
                out << ident() << " = " << ident() << ";\n";
                break;
            case 2:  // declaration
                indent(out, depth);
                out << "int " << ident() << " = " << ident() << " " << binop() << " "
                    << int_lit() << ";\n";
                break;
            case 3:  // return
                indent(out, depth);
                out << "return;\n";
                break;
            case 4:  // break inside a loop, otherwise another assignment
                indent(out, depth);
                if (in_loop) {
                    out << "break;\n";
                } else {
                    out << ident() << " = " << ident() << ";\n";
                }
                break;
            case 5: {  // if/else
                indent(out, depth);
                out << "if (" << ident() << " " << rel() << " " << int_lit() << ") {\n";
                emit_block(out, depth + 1, nesting + 1, in_loop);
                indent(out, depth);
                out << "} else {\n";
                emit_block(out, depth + 1, nesting + 1, in_loop);
                indent(out, depth);
                out << "}\n";
                break;
            }
            default: {  // while
                indent(out, depth);
                out << "while (" << ident() << " " << rel() << " " << int_lit() << ") {\n";
                emit_block(out, depth + 1, nesting + 1, true);
                indent(out, depth);
                out << "}\n";
                break;
            }
        }
    }

    std::mt19937_64 rng_;
    GenConfig config_;
    int budget_ = 0;
};

inline std::string random_program(std::uint64_t seed, GenConfig config = {}) {
    return ProgramGen(seed, config).generate();
}

}  // namespace proggen
