#include <doctest.h>

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "ptlab/expr.hpp"

using ptlab::cplx;
using ptlab::Expr;
using ptlab::ParamEnv;

namespace {

cplx ev(const std::string& src, double x, const ParamEnv& env = {}) {
    return Expr::parse(src).eval(x, env);
}

bool close(cplx a, cplx b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("parse basic shapes") {
    CHECK(ev("0", 1.0) == cplx(0.0, 0.0));
    CHECK(ev("i*x^3", 2.0) == cplx(0.0, 8.0));
    CHECK(ev("x^2", -3.0) == cplx(9.0, 0.0));

    ParamEnv env{{"g", cplx(2.0, 0.0)}};
    CHECK(ev("x^2 + i*g*x^3", 2.0, env) == cplx(4.0, 16.0));
}

TEST_CASE("constants and euler identity") {
    CHECK(close(ev("exp(i*pi)", 0.0), cplx(-1.0, 0.0), 1e-15));
    CHECK(ev("e", 0.0).real() == doctest::Approx(std::exp(1.0)));
    CHECK(ev("pi", 0.0).real() == doctest::Approx(3.14159265358979));
    CHECK(ev("i", 0.0) == cplx(0.0, 1.0));
}

TEST_CASE("precedence and associativity") {
    // unary minus binds tighter than * and +, looser than ^
    CHECK(ev("-x^2", 2.0) == cplx(-4.0, 0.0));
    CHECK(ev("(-x)^2", 2.0) == cplx(4.0, 0.0));
    CHECK(ev("-x*x", 3.0) == cplx(-9.0, 0.0));
    CHECK(ev("2^-3", 0.0) == cplx(0.125, 0.0));
    // ^ is right-associative: x^2^3 = x^(2^3)
    CHECK(ev("x^2^3", 2.0) == cplx(256.0, 0.0));
    CHECK(ev("2 - 3 - 4", 0.0) == cplx(-5.0, 0.0));
    CHECK(ev("12/2/3", 0.0) == cplx(2.0, 0.0));
    CHECK(ev("1 + 2*3^2", 0.0) == cplx(19.0, 0.0));
}

TEST_CASE("integer powers use repeated multiplication, preserving parity bitwise") {
    const double x = 1.7;
    const cplx pos = ev("x^3", x);
    const cplx neg = ev("x^3", -x);
    CHECK(pos.real() == -neg.real());  // bitwise odd
    const cplx pos4 = ev("x^4", x);
    const cplx neg4 = ev("x^4", -x);
    CHECK(pos4.real() == neg4.real());  // bitwise even
    CHECK(ev("x^0", 5.0) == cplx(1.0, 0.0));
    CHECK(ev("0^0", 1.0) == cplx(1.0, 0.0));
    CHECK(ev("x^-2", 2.0) == cplx(0.25, 0.0));
}

TEST_CASE("principal-branch non-integer powers") {
    // (-8)^(1/3) is the principal root, not -2
    const cplx z = ev("(0-8)^(1/3)", 0.0);
    CHECK(close(z, std::pow(cplx(-8.0, 0.0), cplx(1.0 / 3.0, 0.0)), 1e-12));
    CHECK(z.imag() > 0.0);
    // i^i = exp(-pi/2)
    CHECK(close(ev("i^i", 0.0), cplx(std::exp(-std::numbers::pi / 2.0), 0.0), 1e-14));
}

TEST_CASE("functions") {
    CHECK(close(ev("sin(x)", 1.0), cplx(std::sin(1.0), 0.0)));
    CHECK(close(ev("cos(x)", 1.0), cplx(std::cos(1.0), 0.0)));
    CHECK(close(ev("tan(x)", 0.3), cplx(std::tan(0.3), 0.0)));
    CHECK(close(ev("exp(x)", 1.5), cplx(std::exp(1.5), 0.0)));
    CHECK(close(ev("log(e)", 0.0), cplx(1.0, 0.0)));
    CHECK(close(ev("sqrt(x)", 4.0), cplx(2.0, 0.0)));
    CHECK(ev("sqrt(0)", 0.0) == cplx(0.0, 0.0));
    CHECK(close(ev("sinh(x)", 0.7), cplx(std::sinh(0.7), 0.0)));
    CHECK(close(ev("cosh(x)", 0.7), cplx(std::cosh(0.7), 0.0)));
    // complex argument through i
    CHECK(close(ev("sin(i*x)", 1.0), std::sin(cplx(0.0, 1.0))));
}

TEST_CASE("free parameters") {
    CHECK(Expr::parse("x^2").free_params().empty());
    CHECK(Expr::parse("g*x").free_params() == std::set<std::string>{"g"});
    CHECK(Expr::parse("a*x + b").free_params() == std::set<std::string>{"a", "b"});
    // reserved names are not parameters
    CHECK(Expr::parse("pi*e*i*x").free_params().empty());
    // "ix" is a single parameter, not i*x
    CHECK(Expr::parse("ix").free_params() == std::set<std::string>{"ix"});
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(Expr::parse(""), ptlab::ParseError);
    CHECK_THROWS_AS(Expr::parse("2x"), ptlab::ParseError);  // no implicit multiplication
    CHECK_THROWS_AS(Expr::parse("foo(x)"), ptlab::ParseError);
    CHECK_THROWS_AS(Expr::parse("(x"), ptlab::ParseError);
    CHECK_THROWS_AS(Expr::parse("x +"), ptlab::ParseError);
    CHECK_THROWS_AS(Expr::parse("x $ 2"), ptlab::ParseError);
    CHECK_THROWS_AS(Expr::parse("sin x"), ptlab::ParseError);

    try {
        Expr::parse("x^2 + foo(x)");
        FAIL("expected ParseError");
    } catch (const ptlab::ParseError& e) {
        CHECK(e.offset == 6);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
}

TEST_CASE("eval errors") {
    CHECK_THROWS_AS(ev("g*x", 1.0), ptlab::EvalError);  // unbound parameter
    CHECK_THROWS_AS(ev("1/x", 0.0), ptlab::EvalError);
    CHECK_THROWS_AS(ev("log(0)", 0.0), ptlab::EvalError);
    CHECK_THROWS_AS(ev("0^-1", 0.0), ptlab::EvalError);
    CHECK_THROWS_AS(ev("0^(1/2)", 0.0), ptlab::EvalError);  // exp(b log 0)
}

TEST_CASE("evaluation is deterministic") {
    ParamEnv env{{"g", cplx(0.3, -1.2)}};
    const Expr e = Expr::parse("sin(g*x^3) + exp(i*x)/cosh(x - g)");
    const cplx a = e.eval(0.83, env);
    const cplx b = e.eval(0.83, env);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
}

namespace {

// Random grammar-shaped AST as a string plus an independently computed
// expected value (the oracle mirrors the documented eval semantics).
struct GenResult {
    std::string text;
    cplx value;
};

GenResult gen(std::mt19937_64& rng, double x, const ParamEnv& env, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 10);
    std::uniform_real_distribution<double> lit(0.0, 4.0);
    switch (pick(rng)) {
        case 0: {
            const double v = lit(rng);
            char buf[40];
            const auto r = std::to_chars(buf, buf + sizeof(buf), v);
            return {std::string(buf, r.ptr), cplx(v, 0.0)};
        }
        case 1: return {"x", cplx(x, 0.0)};
        case 2: return {"i", cplx(0.0, 1.0)};
        case 3: return {"pi", cplx(std::numbers::pi, 0.0)};
        case 4: return {"g", env.at("g")};
        case 5: {
            auto a = gen(rng, x, env, depth - 1);
            return {"-(" + a.text + ")", -a.value};
        }
        case 6: {
            auto a = gen(rng, x, env, depth - 1);
            auto b = gen(rng, x, env, depth - 1);
            return {"(" + a.text + ") + (" + b.text + ")", a.value + b.value};
        }
        case 7: {
            auto a = gen(rng, x, env, depth - 1);
            auto b = gen(rng, x, env, depth - 1);
            return {"(" + a.text + ") - (" + b.text + ")", a.value - b.value};
        }
        case 8: {
            auto a = gen(rng, x, env, depth - 1);
            auto b = gen(rng, x, env, depth - 1);
            return {"(" + a.text + ")*(" + b.text + ")", a.value * b.value};
        }
        case 9: {
            auto a = gen(rng, x, env, depth - 1);
            std::uniform_int_distribution<int> expo(0, 3);
            const int k = expo(rng);
            cplx v(1.0, 0.0);
            for (int i = 0; i < k; ++i) v *= a.value;  // repeated multiplication
            if (k == 0) v = cplx(1.0, 0.0);
            return {"(" + a.text + ")^" + std::to_string(k), v};
        }
        default: {
            auto a = gen(rng, x, env, depth - 1);
            return {"sin(" + a.text + ")", std::sin(a.value)};
        }
    }
}

}  // namespace

TEST_CASE("random expressions match an independent recursive oracle bitwise") {
    std::mt19937_64 rng(20240811);
    const ParamEnv env{{"g", cplx(0.5, -0.25)}};
    for (int trial = 0; trial < 300; ++trial) {
        const GenResult g = gen(rng, 1.3, env, 4);
        const cplx got = ev(g.text, 1.3, env);
        CHECK(got.real() == g.value.real());
        CHECK(got.imag() == g.value.imag());
    }
}

TEST_CASE("format/parse round trip is structurally exact") {
    std::mt19937_64 rng(777);
    const ParamEnv env{{"g", cplx(1.0, 0.0)}};
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const GenResult g = gen(rng, 0.7, env, 4);
        const Expr original = Expr::parse(g.text);
        const Expr reparsed = Expr::parse(original.format());
        CHECK(original.identical(reparsed));
        ++checked;
    }
    CHECK(checked == 300);

    for (const char* src : {"i*x^3", "x^2 + i*g*x^3", "-x^2", "(-x)^2", "x^2^3",
                            "sin(x)/cosh(g - x)", "1/(2*x) - x^-2", "--x"}) {
        const Expr original = Expr::parse(src);
        CHECK(original.identical(Expr::parse(original.format())));
    }
}

TEST_CASE("eval homomorphism over binary nodes") {
    std::mt19937_64 rng(42);
    const ParamEnv env{{"g", cplx(-0.4, 0.9)}};
    for (int trial = 0; trial < 100; ++trial) {
        const GenResult a = gen(rng, 0.9, env, 3);
        const GenResult b = gen(rng, 0.9, env, 3);
        const cplx va = ev(a.text, 0.9, env);
        const cplx vb = ev(b.text, 0.9, env);
        CHECK(ev("(" + a.text + ") + (" + b.text + ")", 0.9, env) == va + vb);
        CHECK(ev("(" + a.text + ") - (" + b.text + ")", 0.9, env) == va - vb);
        CHECK(ev("(" + a.text + ")*(" + b.text + ")", 0.9, env) == va * vb);
        if (vb != cplx(0.0, 0.0))
            CHECK(ev("(" + a.text + ")/(" + b.text + ")", 0.9, env) == va / vb);
    }
}
