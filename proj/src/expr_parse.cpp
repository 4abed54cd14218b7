#include "helico/expr.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace helico {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
    double number = 0.0;
};

const char* token_text(Tok k)
{
    switch (k) {
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Star: return "*";
    case Tok::Slash: return "/";
    case Tok::Caret: return "^";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::Comma: return ",";
    case Tok::End: return "end of input";
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    }
    return "?";
}

std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char ch = static_cast<unsigned char>(s[i]);
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(ch) || (ch == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            double v = 0.0;
            auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
            if (res.ec != std::errc())
                throw ParseError("malformed number at offset " + std::to_string(i), i, {"number"});
            i = static_cast<std::size_t>(res.ptr - s.data());
            out.push_back({Tok::Number, start, s.substr(start, i - start), v});
            continue;
        }
        if (std::isalpha(ch) || ch == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Tok::Ident, start, s.substr(start, i - start)});
            continue;
        }
        Tok k;
        switch (ch) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        default:
            throw ParseError(std::string("unexpected character '") + s[i] + "' at offset " + std::to_string(i), i,
                             {"number", "identifier", "(", "-"});
        }
        out.push_back({k, start, std::string(1, s[i])});
        ++i;
    }
    out.push_back({Tok::End, s.size(), ""});
    return out;
}

struct FunctionSpec {
    const char* name;
    int arity;
};

constexpr FunctionSpec kFunctions[] = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"atan", 1}, {"atan2", 2}, {"sqrt", 1},
    {"exp", 1}, {"log", 1}, {"abs", 1}, {"sign", 1},
};

Expr apply_function(const std::string& name, const std::vector<Expr>& a)
{
    if (name == "sin") return sin(a[0]);
    if (name == "cos") return cos(a[0]);
    if (name == "tan") return tan(a[0]);
    if (name == "atan") return atan(a[0]);
    if (name == "atan2") return atan2(a[0], a[1]);
    if (name == "sqrt") return sqrt(a[0]);
    if (name == "exp") return exp(a[0]);
    if (name == "log") return log(a[0]);
    if (name == "abs") return abs(a[0]);
    return sign(a[0]);
}

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& vars)
        : toks_(tokenize(src)), vars_(vars) {}

    Expr parse_all()
    {
        Expr e = expression();
        if (peek().kind != Tok::End)
            fail({"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    bool accept(Tok k)
    {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const Token& t = peek();
        std::string msg = "syntax error at offset " + std::to_string(t.offset) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            msg += (i ? ", '" : "'") + expected[i] + "'";
        msg += ", found ";
        msg += t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
        throw ParseError(msg, t.offset, std::move(expected));
    }

    void expect(Tok k)
    {
        if (!accept(k))
            fail({token_text(k)});
    }

    Expr expression()
    {
        Expr e = term();
        for (;;) {
            if (accept(Tok::Plus))
                e = e + term();
            else if (accept(Tok::Minus))
                e = e - term();
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            if (accept(Tok::Star))
                e = e * unary();
            else if (accept(Tok::Slash))
                e = e / unary();
            else
                return e;
        }
    }

    Expr unary()
    {
        if (accept(Tok::Minus))
            return -unary();
        if (accept(Tok::Plus))
            return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept(Tok::Caret))
            return pow(base, unary());
        return base;
    }

    Expr primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number:
            next();
            return Expr(t.number);
        case Tok::LParen: {
            next();
            Expr e = expression();
            expect(Tok::RParen);
            return e;
        }
        case Tok::Ident:
            return identifier();
        default:
            fail({"number", "identifier", "(", "-"});
        }
    }

    Expr identifier()
    {
        Token t = next();
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == t.text)
                return Expr::variable(static_cast<int>(i), t.text);
        if (t.text == "pi")
            return Expr::named_constant("pi", std::numbers::pi);
        if (t.text == "e")
            return Expr::named_constant("e", std::numbers::e);
        for (const auto& f : kFunctions) {
            if (t.text != f.name)
                continue;
            expect(Tok::LParen);
            std::vector<Expr> args{expression()};
            for (int k = 1; k < f.arity; ++k) {
                expect(Tok::Comma);
                args.push_back(expression());
            }
            expect(Tok::RParen);
            return apply_function(t.text, args);
        }
        throw UnknownIdentifier(t.text, t.offset);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::vector<std::string>& vars_;
};

} // namespace

Expr parse(const std::string& source, const std::vector<std::string>& variables)
{
    Parser p(source, variables);
    return p.parse_all();
}

} // namespace helico
