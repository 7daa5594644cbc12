#include "ptlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace ptlab {

namespace {

const std::map<std::string_view, FuncKind> kFunctions = {
    {"sin", FuncKind::Sin},   {"cos", FuncKind::Cos},  {"tan", FuncKind::Tan},
    {"exp", FuncKind::Exp},   {"log", FuncKind::Log},  {"sqrt", FuncKind::Sqrt},
    {"sinh", FuncKind::Sinh}, {"cosh", FuncKind::Cosh},
};

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
    double value = 0.0;  // Number
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Tok::End, {}, at};
        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::Plus, src_.substr(at, 1), at};
            case '-': ++pos_; return {Tok::Minus, src_.substr(at, 1), at};
            case '*': ++pos_; return {Tok::Star, src_.substr(at, 1), at};
            case '/': ++pos_; return {Tok::Slash, src_.substr(at, 1), at};
            case '^': ++pos_; return {Tok::Caret, src_.substr(at, 1), at};
            case '(': ++pos_; return {Tok::LParen, src_.substr(at, 1), at};
            case ')': ++pos_; return {Tok::RParen, src_.substr(at, 1), at};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(at);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            Token t{Tok::Name, src_.substr(at, end - at), at};
            pos_ = end;
            return t;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                             std::to_string(at),
                         at);
    }

private:
    Token lex_number(std::size_t at) {
        std::size_t end = pos_;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
            if (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
                ++exp_end;
                while (exp_end < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[exp_end])))
                    ++exp_end;
                end = exp_end;
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + at, src_.data() + end, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + end)
            throw ParseError("malformed number at offset " + std::to_string(at), at);
        Token t{Tok::Number, src_.substr(at, end - at), at, value};
        pos_ = end;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : lexer_(src) { advance(); }

    Expr run() {
        const int root = parse_expr();
        if (cur_.kind != Tok::End)
            throw ParseError("unexpected token '" + std::string(cur_.text) + "' at offset " +
                                 std::to_string(cur_.offset),
                             cur_.offset);
        out_.root_ = root;
        return std::move(out_);
    }

private:
    void advance() { cur_ = lexer_.next(); }

    int push(ExprNode node) {
        out_.nodes_.push_back(std::move(node));
        return int(out_.nodes_.size()) - 1;
    }

    int parse_expr() {
        int lhs = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const NodeKind op = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            const int rhs = parse_term();
            ExprNode n;
            n.kind = op;
            n.a = lhs;
            n.b = rhs;
            lhs = push(std::move(n));
        }
        return lhs;
    }

    int parse_term() {
        int lhs = parse_factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const NodeKind op = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            const int rhs = parse_factor();
            ExprNode n;
            n.kind = op;
            n.a = lhs;
            n.b = rhs;
            lhs = push(std::move(n));
        }
        return lhs;
    }

    int parse_factor() {
        if (cur_.kind == Tok::Minus) {
            advance();
            const int operand = parse_factor();
            ExprNode n;
            n.kind = NodeKind::Neg;
            n.a = operand;
            return push(std::move(n));
        }
        return parse_power();
    }

    int parse_power() {
        const int base = parse_primary();
        if (cur_.kind != Tok::Caret) return base;
        advance();
        const int expo = parse_factor();  // right-associative, allows -x in exponent
        ExprNode n;
        n.kind = NodeKind::Pow;
        n.a = base;
        n.b = expo;
        return push(std::move(n));
    }

    int parse_primary() {
        switch (cur_.kind) {
            case Tok::Number: {
                ExprNode n;
                n.kind = NodeKind::Literal;
                n.literal = cplx(cur_.value, 0.0);
                advance();
                return push(std::move(n));
            }
            case Tok::LParen: {
                advance();
                const int inner = parse_expr();
                if (cur_.kind != Tok::RParen)
                    throw ParseError("expected ')' at offset " + std::to_string(cur_.offset),
                                     cur_.offset);
                advance();
                return inner;
            }
            case Tok::Name:
                return parse_name();
            case Tok::End:
                throw ParseError("unexpected end of input at offset " + std::to_string(cur_.offset),
                                 cur_.offset);
            default:
                throw ParseError("unexpected token '" + std::string(cur_.text) + "' at offset " +
                                     std::to_string(cur_.offset),
                                 cur_.offset);
        }
    }

    int parse_name() {
        const std::string_view name = cur_.text;
        const std::size_t at = cur_.offset;
        advance();

        if (const auto it = kFunctions.find(name); it != kFunctions.end()) {
            if (cur_.kind != Tok::LParen)
                throw ParseError("expected '(' after function '" + std::string(name) +
                                     "' at offset " + std::to_string(cur_.offset),
                                 cur_.offset);
            advance();
            const int arg = parse_expr();
            if (cur_.kind != Tok::RParen)
                throw ParseError("expected ')' at offset " + std::to_string(cur_.offset),
                                 cur_.offset);
            advance();
            ExprNode n;
            n.kind = NodeKind::Func;
            n.func = it->second;
            n.a = arg;
            return push(std::move(n));
        }
        if (cur_.kind == Tok::LParen)
            throw ParseError("unknown function '" + std::string(name) + "' at offset " +
                                 std::to_string(at),
                             at);

        ExprNode n;
        if (name == "x") n.kind = NodeKind::VarX;
        else if (name == "pi") n.kind = NodeKind::ConstPi;
        else if (name == "e") n.kind = NodeKind::ConstE;
        else if (name == "i") n.kind = NodeKind::ConstI;
        else {
            n.kind = NodeKind::Param;
            n.name = std::string(name);
        }
        return push(std::move(n));
    }

    Lexer lexer_;
    Token cur_{Tok::End, {}, 0};
    Expr out_;
};

Expr Expr::parse(std::string_view source) {
    if (source.empty()) throw ParseError("empty expression", 0);
    return ExprParser(source).run();
}

namespace {

bool integral_exponent(cplx e, long long* out) {
    if (e.imag() != 0.0) return false;
    const double r = e.real();
    if (!(r == std::floor(r)) || std::abs(r) > 1e6) return false;
    *out = static_cast<long long>(r);
    return true;
}

cplx eval_pow(cplx base, cplx expo) {
    long long n = 0;
    if (integral_exponent(expo, &n)) {
        if (n == 0) return {1.0, 0.0};
        if (base == cplx(0.0, 0.0)) {
            if (n > 0) return {0.0, 0.0};
            throw EvalError("division by zero: 0 raised to a negative power");
        }
        const long long count = n < 0 ? -n : n;
        cplx r = base;
        for (long long k = 1; k < count; ++k) r *= base;
        return n < 0 ? cplx(1.0, 0.0) / r : r;
    }
    if (base == cplx(0.0, 0.0))
        throw EvalError("log of zero: 0 raised to a non-integer power");
    return std::exp(expo * std::log(base));
}

cplx eval_node(const std::vector<ExprNode>& nodes, int idx, double x, const ParamEnv& params) {
    const ExprNode& n = nodes[idx];
    switch (n.kind) {
        case NodeKind::Literal: return n.literal;
        case NodeKind::ConstPi: return {std::numbers::pi, 0.0};
        case NodeKind::ConstE: return {std::numbers::e, 0.0};
        case NodeKind::ConstI: return {0.0, 1.0};
        case NodeKind::VarX: return {x, 0.0};
        case NodeKind::Param: {
            const auto it = params.find(n.name);
            if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'");
            return it->second;
        }
        case NodeKind::Neg: return -eval_node(nodes, n.a, x, params);
        case NodeKind::Add:
            return eval_node(nodes, n.a, x, params) + eval_node(nodes, n.b, x, params);
        case NodeKind::Sub:
            return eval_node(nodes, n.a, x, params) - eval_node(nodes, n.b, x, params);
        case NodeKind::Mul:
            return eval_node(nodes, n.a, x, params) * eval_node(nodes, n.b, x, params);
        case NodeKind::Div: {
            const cplx num = eval_node(nodes, n.a, x, params);
            const cplx den = eval_node(nodes, n.b, x, params);
            if (den == cplx(0.0, 0.0)) throw EvalError("division by zero");
            return num / den;
        }
        case NodeKind::Pow:
            return eval_pow(eval_node(nodes, n.a, x, params), eval_node(nodes, n.b, x, params));
        case NodeKind::Func: {
            const cplx arg = eval_node(nodes, n.a, x, params);
            switch (n.func) {
                case FuncKind::Sin: return std::sin(arg);
                case FuncKind::Cos: return std::cos(arg);
                case FuncKind::Tan: return std::tan(arg);
                case FuncKind::Exp: return std::exp(arg);
                case FuncKind::Log:
                    if (arg == cplx(0.0, 0.0)) throw EvalError("log of zero");
                    return std::log(arg);
                case FuncKind::Sqrt: return std::sqrt(arg);
                case FuncKind::Sinh: return std::sinh(arg);
                case FuncKind::Cosh: return std::cosh(arg);
            }
            throw EvalError("unreachable function kind");
        }
    }
    throw EvalError("unreachable node kind");
}

void collect_params(const std::vector<ExprNode>& nodes, int idx, std::set<std::string>& out) {
    const ExprNode& n = nodes[idx];
    if (n.kind == NodeKind::Param) out.insert(n.name);
    if (n.a >= 0) collect_params(nodes, n.a, out);
    if (n.b >= 0) collect_params(nodes, n.b, out);
}

const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Tan: return "tan";
        case FuncKind::Exp: return "exp";
        case FuncKind::Log: return "log";
        case FuncKind::Sqrt: return "sqrt";
        case FuncKind::Sinh: return "sinh";
        case FuncKind::Cosh: return "cosh";
    }
    return "?";
}

// Binding strength used by format(): atoms 5, ^ 4, unary- 3, * / 2, + - 1.
int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

std::string format_literal(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void format_node(const std::vector<ExprNode>& nodes, int idx, int min_prec, std::string& out) {
    const ExprNode& n = nodes[idx];
    const bool parens = precedence(n.kind) < min_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case NodeKind::Literal:
            out += format_literal(n.literal.real());
            break;
        case NodeKind::ConstPi: out += "pi"; break;
        case NodeKind::ConstE: out += "e"; break;
        case NodeKind::ConstI: out += "i"; break;
        case NodeKind::VarX: out += "x"; break;
        case NodeKind::Param: out += n.name; break;
        case NodeKind::Neg:
            out += '-';
            format_node(nodes, n.a, 3, out);
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
            format_node(nodes, n.a, 1, out);
            out += n.kind == NodeKind::Add ? " + " : " - ";
            format_node(nodes, n.b, 2, out);
            break;
        case NodeKind::Mul:
        case NodeKind::Div:
            format_node(nodes, n.a, 2, out);
            out += n.kind == NodeKind::Mul ? "*" : "/";
            format_node(nodes, n.b, 3, out);
            break;
        case NodeKind::Pow:
            format_node(nodes, n.a, 5, out);
            out += '^';
            format_node(nodes, n.b, 3, out);
            break;
        case NodeKind::Func:
            out += func_name(n.func);
            out += '(';
            format_node(nodes, n.a, 1, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool nodes_identical(const std::vector<ExprNode>& an, int ai, const std::vector<ExprNode>& bn,
                     int bi) {
    if ((ai < 0) != (bi < 0)) return false;
    if (ai < 0) return true;
    const ExprNode& a = an[ai];
    const ExprNode& b = bn[bi];
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Literal:
            if (a.literal.real() != b.literal.real() || a.literal.imag() != b.literal.imag())
                return false;
            break;
        case NodeKind::Param:
            if (a.name != b.name) return false;
            break;
        case NodeKind::Func:
            if (a.func != b.func) return false;
            break;
        default: break;
    }
    return nodes_identical(an, a.a, bn, b.a) && nodes_identical(an, a.b, bn, b.b);
}

}  // namespace

cplx Expr::eval(double x, const ParamEnv& params) const {
    if (root_ < 0) throw EvalError("empty expression");
    return eval_node(nodes_, root_, x, params);
}

std::set<std::string> Expr::free_params() const {
    std::set<std::string> out;
    if (root_ >= 0) collect_params(nodes_, root_, out);
    return out;
}

std::string Expr::format() const {
    std::string out;
    if (root_ >= 0) format_node(nodes_, root_, 0, out);
    return out;
}

bool Expr::identical(const Expr& other) const {
    return nodes_identical(nodes_, root_, other.nodes_, other.root_);
}

}  // namespace ptlab
