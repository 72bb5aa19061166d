#include "tgg/core.hpp"

#include <sstream>

namespace tgg {

std::string attr_to_string(const AttrValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
    std::ostringstream out;
    for (const auto& d : diags) {
        out << d.code << " [" << d.subject << "]: " << d.message << "\n";
    }
    return out.str();
}

}  // namespace tgg
