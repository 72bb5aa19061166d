#include "tgg/builtins.hpp"

#include <algorithm>
#include <cctype>

#include "tgg/operators.hpp"

namespace tgg {

namespace {

const std::string& as_string(const AttrValue& v, const char* constraint) {
    if (!std::holds_alternative<std::string>(v)) {
        throw Error("kind-mismatch",
                    std::string(constraint) + " expects string arguments");
    }
    return std::get<std::string>(v);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string collapse_ws(const std::string& s) {
    std::string out;
    bool in_ws = false;
    for (char c : trim(s)) {
        if (c == ' ' || c == '\t') {
            in_ws = true;
            continue;
        }
        if (in_ws && !out.empty()) out.push_back(' ');
        in_ws = false;
        out.push_back(c);
    }
    return out;
}

// Single spaces around the separator; empty parts collapse cleanly so that
// join("", "=", "") is "=".
std::string join_around(const std::string& left, const std::string& sep,
                        const std::string& right) {
    std::string out;
    if (!left.empty()) {
        out += left;
        out += ' ';
    }
    out += sep;
    if (!right.empty()) {
        out += ' ';
        out += right;
    }
    return out;
}

// First occurrence of `sep` outside parentheses, or npos.
std::size_t find_top_level(const std::string& whole, const std::string& sep) {
    if (sep.empty()) return std::string::npos;
    int depth = 0;
    for (std::size_t i = 0; i + sep.size() <= whole.size(); ++i) {
        char c = whole[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && whole.compare(i, sep.size(), sep) == 0) return i;
    }
    return std::string::npos;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// Split position for the backward direction: the rightmost top-level
// occurrence of the lowest-precedence supported operator. Maximal munch keeps
// "<=" from being read as "<".
struct OpHit {
    std::size_t pos;
    std::string symbol;
    int precedence;
};

std::optional<OpHit> rightmost_lowest_operator(const std::string& whole) {
    std::optional<OpHit> best;
    int depth = 0;
    for (std::size_t i = 0; i < whole.size(); ++i) {
        char c = whole[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth != 0) continue;
        const OperatorInfo* longest = nullptr;
        for (const auto& op : supported_operators()) {
            if (whole.compare(i, op.symbol.size(), op.symbol) != 0) continue;
            if (!longest || op.symbol.size() > longest->symbol.size()) longest = &op;
        }
        if (!longest) continue;
        if (!best || longest->precedence < best->precedence ||
            (longest->precedence == best->precedence && i > best->pos)) {
            best = OpHit{i, longest->symbol, longest->precedence};
        }
        i += longest->symbol.size() - 1;
    }
    return best;
}

}  // namespace

ConstraintDef builtin_eq() {
    ConstraintDef def;
    def.name = "eq";
    def.arity = 2;
    def.allowed = {"BB", "BF", "FB"};
    def.eval = [](const Adornment& a, std::vector<AttrValue>& args) {
        if (a == "BF") {
            args[1] = args[0];
            return true;
        }
        if (a == "FB") {
            args[0] = args[1];
            return true;
        }
        return args[0] == args[1];
    };
    return def;
}

ConstraintDef builtin_concat() {
    ConstraintDef def;
    def.name = "concat";
    def.arity = 4;  // sep, left, right, whole
    def.allowed = {"BBBF", "BFFB", "BBBB"};
    def.eval = [](const Adornment& a, std::vector<AttrValue>& args) {
        if (a == "BBBF") {
            args[3] = join_around(as_string(args[1], "concat"), as_string(args[0], "concat"),
                                  as_string(args[2], "concat"));
            return true;
        }
        if (a == "BFFB") {
            const std::string& sep = as_string(args[0], "concat");
            const std::string& whole = as_string(args[3], "concat");
            std::size_t pos = find_top_level(whole, sep);
            if (pos == std::string::npos) return false;
            args[1] = trim(whole.substr(0, pos));
            args[2] = trim(whole.substr(pos + sep.size()));
            return true;
        }
        return collapse_ws(as_string(args[3], "concat")) ==
               join_around(collapse_ws(as_string(args[1], "concat")),
                           as_string(args[0], "concat"),
                           collapse_ws(as_string(args[2], "concat")));
    };
    return def;
}

ConstraintDef builtin_add_suffix() {
    ConstraintDef def;
    def.name = "addSuffix";
    def.arity = 3;  // base, suffix, whole
    def.allowed = {"BBF", "FBB", "BBB"};
    def.eval = [](const Adornment& a, std::vector<AttrValue>& args) {
        if (a == "BBF") {
            args[2] = as_string(args[0], "addSuffix") + as_string(args[1], "addSuffix");
            return true;
        }
        if (a == "FBB") {
            const std::string& suffix = as_string(args[1], "addSuffix");
            const std::string& whole = as_string(args[2], "addSuffix");
            if (whole.size() < suffix.size() ||
                whole.compare(whole.size() - suffix.size(), suffix.size(), suffix) != 0) {
                return false;
            }
            args[0] = whole.substr(0, whole.size() - suffix.size());
            return true;
        }
        return as_string(args[2], "addSuffix") ==
               as_string(args[0], "addSuffix") + as_string(args[1], "addSuffix");
    };
    return def;
}

ConstraintDef builtin_is_an_identifier() {
    ConstraintDef def;
    def.name = "isAnIdentifier";
    def.arity = 1;
    def.allowed = {"B"};
    def.eval = [](const Adornment&, std::vector<AttrValue>& args) {
        return is_identifier(as_string(args[0], "isAnIdentifier"));
    };
    return def;
}

ConstraintDef builtin_concat_with_operator_symbol() {
    ConstraintDef def;
    def.name = "concatWithOperatorSymbol";
    def.arity = 4;  // op, left, right, whole
    def.allowed = {"BBBF", "FFFB", "BBBB"};
    def.eval = [](const Adornment& a, std::vector<AttrValue>& args) {
        if (a == "BBBF") {
            const std::string& op = as_string(args[0], "concatWithOperatorSymbol");
            if (!operator_precedence(op)) return false;
            args[3] = join_around(as_string(args[1], "concatWithOperatorSymbol"), op,
                                  as_string(args[2], "concatWithOperatorSymbol"));
            return true;
        }
        if (a == "FFFB") {
            const std::string& whole = as_string(args[3], "concatWithOperatorSymbol");
            auto hit = rightmost_lowest_operator(whole);
            if (!hit) return false;
            args[0] = hit->symbol;
            args[1] = trim(whole.substr(0, hit->pos));
            args[2] = trim(whole.substr(hit->pos + hit->symbol.size()));
            return true;
        }
        const std::string& op = as_string(args[0], "concatWithOperatorSymbol");
        if (!operator_precedence(op)) return false;
        return collapse_ws(as_string(args[3], "concatWithOperatorSymbol")) ==
               join_around(collapse_ws(as_string(args[1], "concatWithOperatorSymbol")), op,
                           collapse_ws(as_string(args[2], "concatWithOperatorSymbol")));
    };
    return def;
}

ConstraintRegistry make_builtin_registry() {
    ConstraintRegistry registry;
    registry.register_constraint(builtin_eq());
    registry.register_constraint(builtin_concat());
    registry.register_constraint(builtin_add_suffix());
    registry.register_constraint(builtin_is_an_identifier());
    registry.register_constraint(builtin_concat_with_operator_symbol());
    return registry;
}

}  // namespace tgg
