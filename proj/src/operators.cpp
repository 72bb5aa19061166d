#include "tgg/operators.hpp"

namespace tgg {

const std::vector<OperatorInfo>& supported_operators() {
    static const std::vector<OperatorInfo> table = {
        {"||", 0}, {"&&", 1}, {"==", 2}, {"!=", 2}, {"<", 3},  {"<=", 3},
        {">", 3},  {">=", 3}, {"+", 4},  {"-", 4},  {"*", 5},  {"/", 5},
    };
    return table;
}

std::optional<int> operator_precedence(const std::string& symbol) {
    for (const auto& op : supported_operators()) {
        if (op.symbol == symbol) return op.precedence;
    }
    return std::nullopt;
}

}  // namespace tgg
