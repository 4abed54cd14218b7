#include "helico/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace helico {

namespace {

NodePtr make_const(double v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = {std::move(a), std::move(b)};
    return n;
}

bool is_const(const Expr& e, double v) { return e.is_constant(v); }

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 1e9; }

double int_pow(double base, long n)
{
    bool neg = n < 0;
    unsigned long k = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    double r = 1.0;
    double b = base;
    while (k) {
        if (k & 1u)
            r *= b;
        b *= b;
        k >>= 1u;
    }
    return neg ? 1.0 / r : r;
}

const char* function_name(Op op)
{
    switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Atan: return "atan";
    case Op::Atan2: return "atan2";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
    default: return "?";
    }
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int precedence(const Node& n)
{
    switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return (n.value < 0 && n.name.empty()) ? 3 : 5;
    default: return 5;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& c, int min_prec, std::string& out)
{
    if (precedence(c) < min_prec) {
        out += '(';
        print_node(c, out);
        out += ')';
    } else {
        print_node(c, out);
    }
}

void print_node(const Node& n, std::string& out)
{
    switch (n.op) {
    case Op::Const:
        out += n.name.empty() ? format_double(n.value) : n.name;
        return;
    case Op::Var:
        out += n.name.empty() ? (n.var == 0 ? std::string("t") : "v" + std::to_string(n.var)) : n.name;
        return;
    case Op::Add:
        print_child(*n.kids[0], 1, out);
        out += " + ";
        print_child(*n.kids[1], 2, out);
        return;
    case Op::Sub:
        print_child(*n.kids[0], 1, out);
        out += " - ";
        print_child(*n.kids[1], 2, out);
        return;
    case Op::Mul:
        print_child(*n.kids[0], 2, out);
        out += "*";
        print_child(*n.kids[1], 3, out);
        return;
    case Op::Div:
        print_child(*n.kids[0], 2, out);
        out += "/";
        print_child(*n.kids[1], 3, out);
        return;
    case Op::Neg:
        out += "-";
        print_child(*n.kids[0], 4, out);
        return;
    case Op::Pow:
        print_child(*n.kids[0], 5, out);
        out += "^";
        print_child(*n.kids[1], 4, out);
        return;
    case Op::Atan2:
        out += "atan2(";
        print_node(*n.kids[0], out);
        out += ", ";
        print_node(*n.kids[1], out);
        out += ")";
        return;
    default:
        out += function_name(n.op);
        out += '(';
        print_node(*n.kids[0], out);
        out += ')';
        return;
    }
}

std::string print_node(const Node& n)
{
    std::string s;
    print_node(n, s);
    return s;
}

} // namespace

struct Tape {
    struct Instr {
        Op op;
        int a = -1;
        int b = -1;
        double value = 0.0;
        int var = 0;
        const Node* node = nullptr;
    };
    std::vector<Instr> code;
    int max_var = -1;
};

namespace {

std::shared_ptr<Tape> compile(const NodePtr& root)
{
    auto tape = std::make_shared<Tape>();
    std::unordered_map<const Node*, int> index;
    // Iterative post-order so deep derivative chains do not exhaust the stack.
    std::vector<std::pair<const Node*, bool>> stack{{root.get(), false}};
    while (!stack.empty()) {
        auto [n, expanded] = stack.back();
        stack.pop_back();
        if (index.count(n))
            continue;
        if (!expanded) {
            stack.push_back({n, true});
            for (const auto& k : n->kids)
                if (k && !index.count(k.get()))
                    stack.push_back({k.get(), false});
            continue;
        }
        Tape::Instr in;
        in.op = n->op;
        in.value = n->value;
        in.var = n->var;
        in.node = n;
        if (n->kids[0])
            in.a = index.at(n->kids[0].get());
        if (n->kids[1])
            in.b = index.at(n->kids[1].get());
        if (n->op == Op::Var)
            tape->max_var = std::max(tape->max_var, n->var);
        index[n] = static_cast<int>(tape->code.size());
        tape->code.push_back(in);
    }
    return tape;
}

struct EvalFailure {
    const Node* node;
    const char* reason;
};

// Returns nullopt-like failure through the out parameter to avoid exceptions
// on the hot path.
bool run_tape(const Tape& tape, std::span<const double> vars, double& result, EvalFailure& fail)
{
    thread_local std::vector<double> reg;
    reg.resize(tape.code.size());
    for (std::size_t i = 0; i < tape.code.size(); ++i) {
        const auto& in = tape.code[i];
        double a = in.a >= 0 ? reg[in.a] : 0.0;
        double b = in.b >= 0 ? reg[in.b] : 0.0;
        double r = 0.0;
        switch (in.op) {
        case Op::Const: r = in.value; break;
        case Op::Var:
            if (in.var >= static_cast<int>(vars.size())) {
                fail = {in.node, "unbound variable"};
                return false;
            }
            r = vars[in.var];
            break;
        case Op::Add: r = a + b; break;
        case Op::Sub: r = a - b; break;
        case Op::Mul: r = a * b; break;
        case Op::Div:
            if (b == 0.0) {
                fail = {in.node, "division by zero"};
                return false;
            }
            r = a / b;
            break;
        case Op::Neg: r = -a; break;
        case Op::Pow:
            if (is_integer(b)) {
                if (a == 0.0 && b < 0) {
                    fail = {in.node, "division by zero"};
                    return false;
                }
                r = int_pow(a, static_cast<long>(b));
            } else {
                if (!(a > 0.0)) {
                    fail = {in.node, "non-integer power of non-positive base"};
                    return false;
                }
                r = std::pow(a, b);
            }
            break;
        case Op::Sin: r = std::sin(a); break;
        case Op::Cos: r = std::cos(a); break;
        case Op::Tan: r = std::tan(a); break;
        case Op::Atan: r = std::atan(a); break;
        case Op::Atan2:
            if (a == 0.0 && b == 0.0) {
                fail = {in.node, "atan2 of the origin"};
                return false;
            }
            r = std::atan2(a, b);
            break;
        case Op::Sqrt:
            if (a < 0.0) {
                fail = {in.node, "square root of negative value"};
                return false;
            }
            r = std::sqrt(a);
            break;
        case Op::Exp: r = std::exp(a); break;
        case Op::Log:
            if (!(a > 0.0)) {
                fail = {in.node, "logarithm of non-positive value"};
                return false;
            }
            r = std::log(a);
            break;
        case Op::Abs: r = std::fabs(a); break;
        case Op::Sign: r = (a > 0.0) - (a < 0.0); break;
        }
        if (!std::isfinite(r)) {
            fail = {in.node, std::isnan(a) || std::isnan(b) ? "NaN input" : "non-finite result"};
            return false;
        }
        reg[i] = r;
    }
    result = reg.back();
    return true;
}

} // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double value) : node_(make_const(value)), cache_(std::make_shared<Cache>()) {}

Expr::Expr(NodePtr node) : node_(std::move(node)), cache_(std::make_shared<Cache>()) {}

Expr Expr::constant(double value) { return Expr(value); }

Expr Expr::named_constant(const std::string& name, double value)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = value;
    n->name = name;
    return Expr(NodePtr(n));
}

Expr Expr::variable(int index, const std::string& name)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->var = index;
    n->name = name.empty() ? (index == 0 ? "t" : "v" + std::to_string(index)) : name;
    return Expr(NodePtr(n));
}

const Tape& Expr::tape() const
{
    std::call_once(cache_->once, [this] { cache_->tape = compile(node_); });
    return *cache_->tape;
}

double Expr::eval(std::span<const double> vars) const
{
    double r = 0.0;
    EvalFailure fail{};
    if (!run_tape(tape(), vars, r, fail))
        throw DomainError(print_node(*fail.node), fail.reason);
    return r;
}

double Expr::eval(double t) const
{
    double v[1] = {t};
    return eval(std::span<const double>(v, 1));
}

double Expr::eval(double t, double v1) const
{
    double v[2] = {t, v1};
    return eval(std::span<const double>(v, 2));
}

std::optional<double> Expr::try_eval(std::span<const double> vars) const
{
    double r = 0.0;
    EvalFailure fail{};
    if (!run_tape(tape(), vars, r, fail))
        return std::nullopt;
    return r;
}

std::optional<double> Expr::try_eval(double t) const
{
    double v[1] = {t};
    return try_eval(std::span<const double>(v, 1));
}

std::size_t Expr::node_count() const { return tape().code.size(); }

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr(a.constant_value() + b.constant_value());
    if (is_const(a, 0.0))
        return b;
    if (is_const(b, 0.0))
        return a;
    if (b.node().op == Op::Neg)
        return a - Expr(b.node().kids[0]);
    return Expr(make_node(Op::Add, a.ptr(), b.ptr()));
}

Expr operator-(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr(a.constant_value() - b.constant_value());
    if (is_const(b, 0.0))
        return a;
    if (is_const(a, 0.0))
        return -b;
    if (b.node().op == Op::Neg)
        return a + Expr(b.node().kids[0]);
    return Expr(make_node(Op::Sub, a.ptr(), b.ptr()));
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr(a.constant_value() * b.constant_value());
    if (is_const(a, 0.0) || is_const(b, 0.0))
        return Expr(0.0);
    if (is_const(a, 1.0))
        return b;
    if (is_const(b, 1.0))
        return a;
    if (is_const(a, -1.0))
        return -b;
    if (is_const(b, -1.0))
        return -a;
    if (a.node().op == Op::Neg)
        return -(Expr(a.node().kids[0]) * b);
    if (b.node().op == Op::Neg)
        return -(a * Expr(b.node().kids[0]));
    return Expr(make_node(Op::Mul, a.ptr(), b.ptr()));
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
        return Expr(a.constant_value() / b.constant_value());
    if (is_const(a, 0.0) && !is_const(b, 0.0))
        return Expr(0.0);
    if (is_const(b, 1.0))
        return a;
    if (a.node().op == Op::Neg)
        return -(Expr(a.node().kids[0]) / b);
    return Expr(make_node(Op::Div, a.ptr(), b.ptr()));
}

Expr operator-(const Expr& a)
{
    if (a.is_constant() && a.node().name.empty())
        return Expr(-a.constant_value());
    if (a.node().op == Op::Neg)
        return Expr(a.node().kids[0]);
    return Expr(make_node(Op::Neg, a.ptr()));
}

Expr pow(const Expr& a, const Expr& b)
{
    if (is_const(b, 0.0))
        return Expr(1.0);
    if (is_const(b, 1.0))
        return a;
    if (a.is_constant() && b.is_constant()) {
        double av = a.constant_value(), bv = b.constant_value();
        if (is_integer(bv) && !(av == 0.0 && bv < 0))
            return Expr(int_pow(av, static_cast<long>(bv)));
        if (av > 0.0)
            return Expr(std::pow(av, bv));
    }
    return Expr(make_node(Op::Pow, a.ptr(), b.ptr()));
}

namespace {

Expr unary(Op op, const Expr& a, double (*fn)(double))
{
    if (a.is_constant() && fn) {
        double v = fn(a.constant_value());
        if (std::isfinite(v))
            return Expr(v);
    }
    return Expr(make_node(op, a.ptr()));
}

double sign_fn(double v) { return (v > 0.0) - (v < 0.0); }
double sqrt_fn(double v) { return v >= 0.0 ? std::sqrt(v) : NAN; }
double log_fn(double v) { return v > 0.0 ? std::log(v) : NAN; }
double sin_fn(double v) { return std::sin(v); }
double cos_fn(double v) { return std::cos(v); }
double tan_fn(double v) { return std::tan(v); }
double atan_fn(double v) { return std::atan(v); }
double exp_fn(double v) { return std::exp(v); }
double abs_fn(double v) { return std::fabs(v); }

} // namespace

Expr sin(const Expr& a) { return unary(Op::Sin, a, sin_fn); }
Expr cos(const Expr& a) { return unary(Op::Cos, a, cos_fn); }
Expr tan(const Expr& a) { return unary(Op::Tan, a, tan_fn); }
Expr atan(const Expr& a) { return unary(Op::Atan, a, atan_fn); }
Expr sqrt(const Expr& a) { return unary(Op::Sqrt, a, sqrt_fn); }
Expr exp(const Expr& a) { return unary(Op::Exp, a, exp_fn); }
Expr log(const Expr& a) { return unary(Op::Log, a, log_fn); }
Expr abs(const Expr& a) { return unary(Op::Abs, a, abs_fn); }
Expr sign(const Expr& a) { return unary(Op::Sign, a, sign_fn); }
Expr square(const Expr& a) { return a * a; }

Expr atan2(const Expr& y, const Expr& x)
{
    if (y.is_constant() && x.is_constant() && !(y.constant_value() == 0.0 && x.constant_value() == 0.0))
        return Expr(std::atan2(y.constant_value(), x.constant_value()));
    return Expr(make_node(Op::Atan2, y.ptr(), x.ptr()));
}

namespace {

class Differentiator {
public:
    explicit Differentiator(int var) : var_(var) {}

    Expr d(const Expr& e)
    {
        auto it = memo_.find(e.ptr().get());
        if (it != memo_.end())
            return it->second;
        Expr r = compute(e);
        memo_.emplace(e.ptr().get(), r);
        keep_.push_back(e.ptr());
        return r;
    }

private:
    Expr compute(const Expr& e)
    {
        const Node& n = e.node();
        Expr a = n.kids[0] ? Expr(n.kids[0]) : Expr();
        Expr b = n.kids[1] ? Expr(n.kids[1]) : Expr();
        switch (n.op) {
        case Op::Const: return Expr(0.0);
        case Op::Var: return Expr(n.var == var_ ? 1.0 : 0.0);
        case Op::Add: return d(a) + d(b);
        case Op::Sub: return d(a) - d(b);
        case Op::Mul: return d(a) * b + a * d(b);
        case Op::Div: {
            Expr db = d(b);
            if (db.is_constant(0.0))
                return d(a) / b;
            return (d(a) * b - a * db) / (b * b);
        }
        case Op::Neg: return -d(a);
        case Op::Pow: {
            Expr db = d(b);
            if (db.is_constant(0.0)) {
                if (b.is_constant()) {
                    double k = b.constant_value();
                    Expr lower = is_const(b, 2.0) ? a : pow(a, Expr(k - 1.0));
                    return Expr(k) * lower * d(a);
                }
                return b * pow(a, b - Expr(1.0)) * d(a);
            }
            return e * (db * log(a) + b * d(a) / a);
        }
        case Op::Sin: return cos(a) * d(a);
        case Op::Cos: return -(sin(a) * d(a));
        case Op::Tan: return d(a) / (cos(a) * cos(a));
        case Op::Atan: return d(a) / (Expr(1.0) + a * a);
        case Op::Atan2: {
            // atan2(y, x): (y'x - x'y)/(x^2 + y^2)
            return (d(a) * b - d(b) * a) / (b * b + a * a);
        }
        case Op::Sqrt: return d(a) / (Expr(2.0) * e);
        case Op::Exp: return e * d(a);
        case Op::Log: return d(a) / a;
        case Op::Abs: return sign(a) * d(a);
        case Op::Sign: return Expr(0.0);
        }
        return Expr(0.0);
    }

    int var_;
    std::unordered_map<const Node*, Expr> memo_;
    std::vector<NodePtr> keep_;
};

template <class F>
Expr rebuild(const Expr& e, F&& leaf, std::unordered_map<const Node*, Expr>& memo)
{
    auto it = memo.find(e.ptr().get());
    if (it != memo.end())
        return it->second;
    const Node& n = e.node();
    Expr r;
    if (n.op == Op::Const || n.op == Op::Var) {
        r = leaf(e);
    } else {
        Expr a = rebuild(Expr(n.kids[0]), leaf, memo);
        Expr b = n.kids[1] ? rebuild(Expr(n.kids[1]), leaf, memo) : Expr();
        switch (n.op) {
        case Op::Add: r = a + b; break;
        case Op::Sub: r = a - b; break;
        case Op::Mul: r = a * b; break;
        case Op::Div: r = a / b; break;
        case Op::Neg: r = -a; break;
        case Op::Pow: r = pow(a, b); break;
        case Op::Sin: r = sin(a); break;
        case Op::Cos: r = cos(a); break;
        case Op::Tan: r = tan(a); break;
        case Op::Atan: r = atan(a); break;
        case Op::Atan2: r = atan2(a, b); break;
        case Op::Sqrt: r = sqrt(a); break;
        case Op::Exp: r = exp(a); break;
        case Op::Log: r = log(a); break;
        case Op::Abs: r = abs(a); break;
        case Op::Sign: r = sign(a); break;
        default: r = e; break;
        }
    }
    memo.emplace(e.ptr().get(), r);
    return r;
}

template <class F>
void visit(const Expr& e, F&& f)
{
    std::unordered_map<const Node*, bool> seen;
    std::vector<NodePtr> stack{e.ptr()};
    while (!stack.empty()) {
        NodePtr n = stack.back();
        stack.pop_back();
        if (seen[n.get()])
            continue;
        seen[n.get()] = true;
        f(n);
        for (const auto& k : n->kids)
            if (k)
                stack.push_back(k);
    }
}

} // namespace

Expr diff(const Expr& e, int var)
{
    Differentiator d(var);
    return d.d(e);
}

Expr diff_n(const Expr& e, int order, int var)
{
    Expr r = e;
    for (int i = 0; i < order; ++i)
        r = diff(r, var);
    return r;
}

Expr substitute(const Expr& e, int var, const Expr& value)
{
    std::unordered_map<const Node*, Expr> memo;
    return rebuild(e, [&](const Expr& leaf) {
        if (leaf.node().op == Op::Var && leaf.node().var == var)
            return value;
        return leaf;
    }, memo);
}

std::vector<Expr> nonsmooth_arguments(const Expr& e)
{
    std::vector<Expr> out;
    visit(e, [&](const NodePtr& n) {
        if (n->op == Op::Abs || n->op == Op::Sign)
            out.emplace_back(n->kids[0]);
    });
    return out;
}

int max_variable(const Expr& e)
{
    int m = -1;
    visit(e, [&](const NodePtr& n) {
        if (n->op == Op::Var)
            m = std::max(m, n->var);
    });
    return m;
}

std::string print(const Expr& e) { return print_node(e.node()); }

} // namespace helico
