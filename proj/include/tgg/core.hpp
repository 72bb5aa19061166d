#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tgg {

// Attribute values are either 64-bit integers or strings; nothing else is
// representable in models, rules, or CSP variables.
using AttrValue = std::variant<std::int64_t, std::string>;

enum class AttrKind { Int, String };

inline AttrKind kind_of(const AttrValue& v) {
    return std::holds_alternative<std::int64_t>(v) ? AttrKind::Int : AttrKind::String;
}

inline const char* kind_name(AttrKind k) {
    return k == AttrKind::Int ? "int" : "string";
}

std::string attr_to_string(const AttrValue& v);

// Error with a stable machine-readable code next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// One located validation finding. `subject` names the offending entity
// (node/edge/rule-element id or type name).
struct Diagnostic {
    std::string code;
    std::string subject;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// Ids are opaque but allocation-order stable; 0 is "none".
template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    constexpr bool is_valid() const { return value != 0; }
    constexpr auto operator<=>(const Id&) const = default;

    std::string str() const { return std::to_string(value); }
};

struct NodeTag {};
struct EdgeTag {};
struct CorrTag {};

using NodeId = Id<NodeTag>;
using EdgeId = Id<EdgeTag>;
using CorrId = Id<CorrTag>;

}  // namespace tgg
