#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ptlab/core.hpp"

namespace ptlab {

// Bound values for the free parameters of an expression.
using ParamEnv = std::map<std::string, cplx>;

enum class NodeKind {
    Literal, ConstPi, ConstE, ConstI, VarX, Param,
    Neg, Add, Sub, Mul, Div, Pow, Func,
};

enum class FuncKind { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

struct ExprNode {
    NodeKind kind = NodeKind::Literal;
    cplx literal{0.0, 0.0};  // Literal
    std::string name;        // Param
    FuncKind func{};         // Func
    int a = -1;              // operand / lhs
    int b = -1;              // rhs
};

// Parsed complex-valued expression in x. Immutable after parse; eval is a
// pure function, so instances can be shared freely across threads.
//
// Grammar, precedence low to high (+,- < *,/ < unary- < ^):
//   expr    := term  (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?            right-associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// x, pi, e, i are reserved names; sin cos tan exp log sqrt sinh cosh are
// functions; any other name is a free parameter. There is no implicit
// multiplication: "2x" is a syntax error and "ix" is a single parameter,
// so the imaginary cubic reads "i*x^3".
class Expr {
public:
    static Expr parse(std::string_view source);  // throws ParseError

    // Integer powers are evaluated by repeated multiplication (so parity
    // identities like (-x)^3 = -x^3 hold bitwise); everything else goes
    // through exp(b log a) on the principal branch.
    cplx eval(double x, const ParamEnv& params = {}) const;  // throws EvalError

    std::set<std::string> free_params() const;

    // Prints with enough parentheses that parse(format()) rebuilds a
    // structurally identical tree.
    std::string format() const;

    bool identical(const Expr& other) const;

    const std::vector<ExprNode>& nodes() const { return nodes_; }
    int root() const { return root_; }

private:
    std::vector<ExprNode> nodes_;
    int root_ = -1;

    friend class ExprParser;
};

}  // namespace ptlab
