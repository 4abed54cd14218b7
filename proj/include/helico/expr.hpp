#pragma once

#include <array>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helico/errors.hpp"

namespace helico {

enum class Op {
    Const, Var,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Atan, Atan2, Sqrt, Exp, Log, Abs, Sign
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    double value = 0.0;     // Const
    int var = 0;            // Var index
    std::string name;       // named constant ("pi", "e") or variable name
    std::array<NodePtr, 2> kids{};
};

struct Tape;

// Immutable expression in a small number of real variables. Variable 0 is
// conventionally the curve parameter t.
class Expr {
public:
    Expr();
    Expr(double value);
    explicit Expr(NodePtr node);

    static Expr constant(double value);
    static Expr named_constant(const std::string& name, double value);
    static Expr variable(int index, const std::string& name = "");

    const Node& node() const { return *node_; }
    const NodePtr& ptr() const { return node_; }

    bool is_constant() const { return node_->op == Op::Const; }
    bool is_constant(double v) const { return is_constant() && node_->value == v; }
    double constant_value() const { return node_->value; }

    // Evaluation throws DomainError instead of producing NaN or infinity.
    double eval(std::span<const double> vars) const;
    double eval(double t) const;
    double eval(double t, double v1) const;
    double operator()(double t) const { return eval(t); }
    std::optional<double> try_eval(std::span<const double> vars) const;
    std::optional<double> try_eval(double t) const;

    std::size_t node_count() const;

private:
    const Tape& tape() const;

    NodePtr node_;
    struct Cache {
        std::once_flag once;
        std::shared_ptr<Tape> tape;
    };
    std::shared_ptr<Cache> cache_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

Expr pow(const Expr& a, const Expr& b);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr atan(const Expr& a);
Expr atan2(const Expr& y, const Expr& x);
Expr sqrt(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr abs(const Expr& a);
Expr sign(const Expr& a);
Expr square(const Expr& a);

// Exact derivative with respect to variable `var`.
Expr diff(const Expr& e, int var = 0);
Expr diff_n(const Expr& e, int order, int var = 0);

// Replace variable `var` by `value` everywhere.
Expr substitute(const Expr& e, int var, const Expr& value);

// Arguments of abs/sign nodes; their zeros are where diff is non-smooth.
std::vector<Expr> nonsmooth_arguments(const Expr& e);

// Highest variable index referenced, or -1 for a constant expression.
int max_variable(const Expr& e);

std::string print(const Expr& e);

// Variable names accepted by the parser, in index order.
Expr parse(const std::string& source, const std::vector<std::string>& variables = {"t"});

} // namespace helico
