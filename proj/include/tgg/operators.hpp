#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tgg {

// The one operator table shared by the expression parser/unparser and the
// concatWithOperatorSymbol constraint. Precedence climbs from 0; all binary
// operators are left-associative.
struct OperatorInfo {
    std::string symbol;
    int precedence;
};

const std::vector<OperatorInfo>& supported_operators();

std::optional<int> operator_precedence(const std::string& symbol);

}  // namespace tgg
