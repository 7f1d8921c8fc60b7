#include "vms/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace vms {

struct Expression::Node {
    enum class Op { number, var_x, var_y, var_z, var_t, neg, add, sub, mul, div, pow, call1, call2 };
    Op op = Op::number;
    double value = 0.0;
    double (*f1)(double) = nullptr;
    double (*f2)(double, double) = nullptr;
    std::shared_ptr<const Node> a, b;

    [[nodiscard]] double eval(const double* vars) const
    {
        switch (op) {
        case Op::number: return value;
        case Op::var_x: return vars[0];
        case Op::var_y: return vars[1];
        case Op::var_z: return vars[2];
        case Op::var_t: return vars[3];
        case Op::neg: return -a->eval(vars);
        case Op::add: return a->eval(vars) + b->eval(vars);
        case Op::sub: return a->eval(vars) - b->eval(vars);
        case Op::mul: return a->eval(vars) * b->eval(vars);
        case Op::div: return a->eval(vars) / b->eval(vars);
        case Op::pow: return std::pow(a->eval(vars), b->eval(vars));
        case Op::call1: return f1(a->eval(vars));
        case Op::call2: return f2(a->eval(vars), b->eval(vars));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr number(double v)
{
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

double f_sin(double v) { return std::sin(v); }
double f_cos(double v) { return std::cos(v); }
double f_tan(double v) { return std::tan(v); }
double f_exp(double v) { return std::exp(v); }
double f_log(double v) { return std::log(v); }
double f_sqrt(double v) { return std::sqrt(v); }
double f_abs(double v) { return std::abs(v); }
double f_tanh(double v) { return std::tanh(v); }
double f_sinh(double v) { return std::sinh(v); }
double f_cosh(double v) { return std::cosh(v); }
double f_min(double a, double b) { return std::min(a, b); }
double f_max(double a, double b) { return std::max(a, b); }
double f_pow(double a, double b) { return std::pow(a, b); }

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := atom ('^' unary)?
// atom   := number | name | name '(' args ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(pos_, what); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr()
    {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Op::add, n, term());
            else if (accept('-')) n = make(Op::sub, n, term());
            else return n;
        }
    }

    NodePtr term()
    {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Op::mul, n, unary());
            else if (accept('/')) n = make(Op::div, n, unary());
            else return n;
        }
    }

    NodePtr unary()
    {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr n = atom();
        if (accept('^')) return make(Op::pow, n, unary());
        return n;
    }

    NodePtr atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = expr();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr literal()
    {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return number(v);
    }

    NodePtr name()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        if (id == "x") return make(Op::var_x);
        if (id == "y") return make(Op::var_y);
        if (id == "z") return make(Op::var_z);
        if (id == "t") return make(Op::var_t);
        if (id == "pi") return number(std::numbers::pi);
        if (id == "e") return number(std::numbers::e);

        static const std::pair<const char*, double (*)(double)> unary_fns[] = {
            {"sin", f_sin}, {"cos", f_cos}, {"tan", f_tan}, {"exp", f_exp}, {"log", f_log},
            {"sqrt", f_sqrt}, {"abs", f_abs}, {"tanh", f_tanh}, {"sinh", f_sinh}, {"cosh", f_cosh}};
        static const std::pair<const char*, double (*)(double, double)> binary_fns[] = {
            {"min", f_min}, {"max", f_max}, {"pow", f_pow}};

        for (const auto& [fname, fn] : unary_fns) {
            if (id != fname) continue;
            expect('(');
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::call1;
            n->f1 = fn;
            n->a = expr();
            expect(')');
            return n;
        }
        for (const auto& [fname, fn] : binary_fns) {
            if (id != fname) continue;
            expect('(');
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::call2;
            n->f2 = fn;
            n->a = expr();
            expect(',');
            n->b = expr();
            expect(')');
            return n;
        }
        pos_ = start;
        fail("unknown identifier '" + id + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_top_level(const std::string& text)
{
    std::vector<std::string> parts;
    std::string current;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

}  // namespace

Expression::Expression() : root_(number(0.0)), text_("0") {}

Expression Expression::parse(const std::string& text)
{
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

Expression Expression::constant(double value)
{
    Expression e;
    e.root_ = number(value);
    e.text_ = std::to_string(value);
    return e;
}

double Expression::operator()(double x, double y, double z, double t) const
{
    const double vars[4] = {x, y, z, t};
    return root_->eval(vars);
}

VectorField parse_vector_field(const std::string& text)
{
    const auto parts = split_top_level(text);
    if (parts.size() > 3) throw ConfigError("vector value '" + text + "' has more than three components");
    std::vector<Expression> comps;
    for (const auto& p : parts) comps.push_back(Expression::parse(p));
    return [comps](const Vec3& x, double t) {
        Vec3 v = Vec3::Zero();
        for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<Index>(i)] = comps[i](x, t);
        return v;
    };
}

}  // namespace vms
