#include "ecert/expr.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace ecert {
namespace {

enum Fn1 { f_sin, f_cos, f_tan, f_exp, f_log, f_sqrt, f_abs };
enum Fn2 { f_pow, f_min, f_max };

const std::pair<const char*, int> unary_fns[] = {{"sin", f_sin},   {"cos", f_cos}, {"tan", f_tan},
                                                 {"exp", f_exp},   {"log", f_log}, {"sqrt", f_sqrt},
                                                 {"abs", f_abs}};
const std::pair<const char*, int> binary_fns[] = {{"pow", f_pow}, {"min", f_min}, {"max", f_max}};

int lookup(const auto& table, std::string_view name) {
    for (const auto& [n, id] : table)
        if (name == n) return id;
    return -1;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, Expression& out) : s_(text), e_(out) {}

    void run() {
        e_.root_ = parse_sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(fmt::format("expression '{}': {} at column {}", s_, msg, pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(fmt::format("expected '{}'", c));
    }

    int add(Expression::Node n) {
        e_.nodes_.push_back(n);
        return static_cast<int>(e_.nodes_.size()) - 1;
    }

    int binary(Expression::Op op, int a, int b) { return add({op, a, b, 0.0, 0}); }

    int parse_sum() {
        int left = parse_product();
        for (;;) {
            if (accept('+'))
                left = binary(Expression::Op::add, left, parse_product());
            else if (accept('-'))
                left = binary(Expression::Op::sub, left, parse_product());
            else
                return left;
        }
    }

    int parse_product() {
        int left = parse_unary();
        for (;;) {
            if (accept('*'))
                left = binary(Expression::Op::mul, left, parse_unary());
            else if (accept('/'))
                left = binary(Expression::Op::div, left, parse_unary());
            else
                return left;
        }
    }

    int parse_unary() {
        if (accept('-')) return add({Expression::Op::neg, parse_unary(), -1, 0.0, 0});
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (accept('^')) return binary(Expression::Op::pow, base, parse_unary());
        return base;
    }

    int parse_primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_sum();
            expect(')');
            return inner;
        }
        if (c == '|') {
            ++pos_;
            int inner = parse_sum();
            expect('|');
            return add({Expression::Op::call1, inner, -1, 0.0, f_abs});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (ident_start(c)) return parse_identifier();
        fail(fmt::format("unexpected character '{}'", c));
    }

    int parse_number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return add({Expression::Op::number, -1, -1, v, 0});
    }

    int parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        std::string_view name = s_.substr(start, pos_ - start);
        skip();
        bool call = pos_ < s_.size() && s_[pos_] == '(';
        if (call) {
            int f1 = lookup(unary_fns, name);
            int f2 = lookup(binary_fns, name);
            if (f1 < 0 && f2 < 0) {
                pos_ = start;
                fail(fmt::format("unknown function '{}'", name));
            }
            ++pos_;
            int a = parse_sum();
            if (f1 >= 0) {
                expect(')');
                return add({Expression::Op::call1, a, -1, 0.0, f1});
            }
            expect(',');
            int b = parse_sum();
            expect(')');
            return add({Expression::Op::call2, a, b, 0.0, f2});
        }
        const auto& vars = e_.variables_;
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it != vars.end())
            return add({Expression::Op::variable, -1, -1, 0.0, static_cast<int>(it - vars.begin())});
        if (name == "pi") return add({Expression::Op::number, -1, -1, std::numbers::pi, 0});
        pos_ = start;
        fail(fmt::format("unknown identifier '{}'", name));
    }

    std::string_view s_;
    Expression& e_;
    std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
    Expression e;
    e.text_ = std::string(text);
    e.variables_ = std::move(variables);
    ExpressionParser p(e.text_, e);
    p.run();
    return e;
}

double Expression::operator()(std::span<const double> values) const {
    if (values.size() < variables_.size())
        throw ConfigurationError(fmt::format("expression '{}' needs {} values, got {}", text_,
                                             variables_.size(), values.size()));
    return eval(root_, values);
}

double Expression::eval(int i, std::span<const double> v) const {
    const Node& n = nodes_[i];
    switch (n.op) {
    case Op::number: return n.value;
    case Op::variable: return v[n.index];
    case Op::add: return eval(n.a, v) + eval(n.b, v);
    case Op::sub: return eval(n.a, v) - eval(n.b, v);
    case Op::mul: return eval(n.a, v) * eval(n.b, v);
    case Op::div: return eval(n.a, v) / eval(n.b, v);
    case Op::pow: return std::pow(eval(n.a, v), eval(n.b, v));
    case Op::neg: return -eval(n.a, v);
    case Op::call1: {
        double x = eval(n.a, v);
        switch (n.index) {
        case f_sin: return std::sin(x);
        case f_cos: return std::cos(x);
        case f_tan: return std::tan(x);
        case f_exp: return std::exp(x);
        case f_log: return std::log(x);
        case f_sqrt: return std::sqrt(x);
        default: return std::abs(x);
        }
    }
    case Op::call2: {
        double x = eval(n.a, v);
        double y = eval(n.b, v);
        switch (n.index) {
        case f_pow: return std::pow(x, y);
        case f_min: return std::min(x, y);
        default: return std::max(x, y);
        }
    }
    }
    return 0.0;
}

std::vector<std::string> free_identifiers(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            // skip a number including an exponent part
            while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    i = j;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                }
            }
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string name(text.substr(start, i - start));
            std::size_t j = i;
            while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            bool call = j < text.size() && text[j] == '(';
            bool known_fn = lookup(unary_fns, name) >= 0 || lookup(binary_fns, name) >= 0;
            if (!(call && known_fn) && name != "pi" &&
                std::find(out.begin(), out.end(), name) == out.end())
                out.push_back(name);
            continue;
        }
        ++i;
    }
    return out;
}

double evaluate(std::string_view text, const std::vector<std::pair<std::string, double>>& bindings) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [k, v] : bindings) {
        names.push_back(k);
        values.push_back(v);
    }
    return Expression::parse(text, names)(values);
}

} // namespace ecert
