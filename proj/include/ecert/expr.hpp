#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecert {

// Compiled arithmetic expression over a fixed list of variables.
//
// Grammar: + - * / ^ (right associative), unary minus, parentheses, |e|,
// numbers, the constant pi, functions sin cos tan exp log sqrt abs of one
// argument and pow min max of two. Identifiers resolve to the variable list
// given at parse time, in order.
class Expression {
public:
    static Expression parse(std::string_view text, std::vector<std::string> variables);

    double operator()(std::span<const double> values) const;
    double operator()(double x, double y) const {
        const double v[2] = {x, y};
        return (*this)(std::span<const double>(v, 2));
    }

    const std::string& text() const { return text_; }
    const std::vector<std::string>& variables() const { return variables_; }

    enum class Op { number, variable, add, sub, mul, div, pow, neg, call1, call2 };
    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        double value = 0.0;
        int index = 0;
    };

private:
    double eval(int node, std::span<const double> values) const;

    std::string text_;
    std::vector<std::string> variables_;
    std::vector<Node> nodes_;
    int root_ = -1;

    friend class ExpressionParser;
};

// Identifiers appearing in text that are not function names or pi.
std::vector<std::string> free_identifiers(std::string_view text);

// One-shot evaluation with named bindings.
double evaluate(std::string_view text, const std::vector<std::pair<std::string, double>>& bindings);

} // namespace ecert
