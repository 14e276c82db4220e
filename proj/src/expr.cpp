#include "lfract/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "lfract/errors.hpp"

namespace lfract {

namespace {

enum class Tok {
    X,
    Alpha,
    S,
    AbsWord,
    Number,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LPar,
    RPar,
    End,
};

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::X: return "'x'";
        case Tok::Alpha: return "'a'";
        case Tok::S: return "'s'";
        case Tok::AbsWord: return "'abs'";
        case Tok::Number: return "number";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LPar: return "'('";
        case Tok::RPar: return "')'";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            case '^': current_.kind = Tok::Caret; ++pos_; return;
            case '(': current_.kind = Tok::LPar; ++pos_; return;
            case ')': current_.kind = Tok::RPar; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[end]))) {
                ++end;
            }
            const std::string_view word = text_.substr(pos_, end - pos_);
            if (word == "x") {
                current_.kind = Tok::X;
            } else if (word == "a") {
                current_.kind = Tok::Alpha;
            } else if (word == "s") {
                current_.kind = Tok::S;
            } else if (word == "abs") {
                current_.kind = Tok::AbsWord;
            } else {
                throw ParseError("unknown identifier '" + std::string(word) + "'", pos_,
                                 "'x', 'a', 's', or 'abs'");
            }
            pos_ = end;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                         "expression token");
    }

    void lex_number() {
        std::size_t end = pos_;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
            ++end;
        }
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (end < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[end]))) {
                ++end;
            }
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) {
                ++exp;
            }
            if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
                end = exp;
                while (end < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[end]))) {
                    ++end;
                }
            }
        }
        const std::string buf(text_.substr(pos_, end - pos_));
        current_.kind = Tok::Number;
        current_.number = std::strtod(buf.c_str(), nullptr);
        pos_ = end;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_{};
};

ExprPtr make(ExprKind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

ExprPtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = v;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        expect(Tok::End, "'+', '-', '*', '^', or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const char* expected) {
        throw ParseError(std::string("unexpected ") + tok_name(lex_.peek().kind),
                         lex_.peek().offset, expected);
    }

    void expect(Tok k, const char* expected) {
        if (lex_.peek().kind != k) {
            fail(expected);
        }
        lex_.take();
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const Tok op = lex_.take().kind;
            ExprPtr r = parse_term();
            e = make(op == Tok::Plus ? ExprKind::Add : ExprKind::Sub, e, r);
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            e = make(ExprKind::Mul, e, parse_unary());
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return make(ExprKind::Neg, parse_factor());
        }
        return parse_factor();
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            return make(ExprKind::Pow, base, parse_exponent());
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::X:
                lex_.take();
                return make(ExprKind::Variable);
            case Tok::Number:
                lex_.take();
                return make_number(t.number);
            case Tok::LPar: {
                lex_.take();
                ExprPtr e = parse_expr();
                expect(Tok::RPar, "')'");
                return e;
            }
            case Tok::AbsWord: {
                lex_.take();
                expect(Tok::LPar, "'(' after abs");
                ExprPtr e = parse_expr();
                expect(Tok::RPar, "')'");
                return make(ExprKind::Abs, e);
            }
            default:
                fail("'x', number, '(', or 'abs('");
        }
    }

    // Exponents are parameter expressions: either parenthesized, or a bare
    // number / 'a' / 's'.
    ExprPtr parse_exponent() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::LPar: {
                lex_.take();
                ExprPtr e = parse_param_expr();
                expect(Tok::RPar, "')'");
                return e;
            }
            case Tok::Number:
                lex_.take();
                return make_number(t.number);
            case Tok::Alpha:
                lex_.take();
                return make(ExprKind::Alpha);
            case Tok::S:
                lex_.take();
                return make(ExprKind::SParam);
            case Tok::X:
                throw ParseError("exponent must not contain x", t.offset,
                                 "parameter expression");
            default:
                fail("'(', number, 'a', or 's' as exponent");
        }
    }

    ExprPtr parse_param_expr() {
        ExprPtr e = parse_param_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const Tok op = lex_.take().kind;
            e = make(op == Tok::Plus ? ExprKind::Add : ExprKind::Sub, e, parse_param_term());
        }
        return e;
    }

    ExprPtr parse_param_term() {
        ExprPtr e = parse_param_unary();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const Tok op = lex_.take().kind;
            e = make(op == Tok::Star ? ExprKind::Mul : ExprKind::Div, e, parse_param_unary());
        }
        return e;
    }

    ExprPtr parse_param_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return make(ExprKind::Neg, parse_param_atom());
        }
        return parse_param_atom();
    }

    ExprPtr parse_param_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Number:
                lex_.take();
                return make_number(t.number);
            case Tok::Alpha:
                lex_.take();
                return make(ExprKind::Alpha);
            case Tok::S:
                lex_.take();
                return make(ExprKind::SParam);
            case Tok::LPar: {
                lex_.take();
                ExprPtr e = parse_param_expr();
                expect(Tok::RPar, "')'");
                return e;
            }
            case Tok::X:
                throw ParseError("exponent must not contain x", t.offset,
                                 "parameter expression");
            default:
                fail("number, 'a', 's', or '('");
        }
    }

    Lexer lex_;
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_rec(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case ExprKind::Variable: out += "x"; return;
        case ExprKind::Alpha: out += "a"; return;
        case ExprKind::SParam: out += "s"; return;
        case ExprKind::Number: out += format_number(e->number); return;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div: {
            const char* op = e->kind == ExprKind::Add   ? " + "
                             : e->kind == ExprKind::Sub ? " - "
                             : e->kind == ExprKind::Mul ? "*"
                                                        : "/";
            out += "(";
            print_rec(e->lhs, out);
            out += op;
            print_rec(e->rhs, out);
            out += ")";
            return;
        }
        case ExprKind::Pow: {
            // parenthesize the base so unary minus and nested powers re-parse
            // to the same tree
            const bool atom_base = e->lhs->kind == ExprKind::Variable ||
                                   e->lhs->kind == ExprKind::Number ||
                                   e->lhs->kind == ExprKind::Abs;
            if (!atom_base) out += "(";
            print_rec(e->lhs, out);
            if (!atom_base) out += ")";
            out += "^(";
            print_rec(e->rhs, out);
            out += ")";
            return;
        }
        case ExprKind::Neg: {
            const bool atom = e->lhs->kind == ExprKind::Variable ||
                              e->lhs->kind == ExprKind::Number ||
                              e->lhs->kind == ExprKind::Alpha ||
                              e->lhs->kind == ExprKind::SParam;
            out += "-";
            if (!atom) out += "(";
            print_rec(e->lhs, out);
            if (!atom) out += ")";
            return;
        }
        case ExprKind::Abs:
            out += "abs(";
            print_rec(e->lhs, out);
            out += ")";
            return;
    }
}

} // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string print_expression(const ExprPtr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

double eval_expression(const ExprPtr& e, double x, double alpha, double s) {
    switch (e->kind) {
        case ExprKind::Variable: return x;
        case ExprKind::Number: return e->number;
        case ExprKind::Alpha: return alpha;
        case ExprKind::SParam: return s;
        case ExprKind::Add:
            return eval_expression(e->lhs, x, alpha, s) + eval_expression(e->rhs, x, alpha, s);
        case ExprKind::Sub:
            return eval_expression(e->lhs, x, alpha, s) - eval_expression(e->rhs, x, alpha, s);
        case ExprKind::Mul:
            return eval_expression(e->lhs, x, alpha, s) * eval_expression(e->rhs, x, alpha, s);
        case ExprKind::Div: {
            const double d = eval_expression(e->rhs, x, alpha, s);
            if (d == 0.0) {
                throw DomainError("division by zero in parameter expression");
            }
            return eval_expression(e->lhs, x, alpha, s) / d;
        }
        case ExprKind::Pow: {
            const double b = eval_expression(e->lhs, x, alpha, s);
            const double p = eval_expression(e->rhs, x, alpha, s);
            if (b < 0.0 && std::nearbyint(p) != p) {
                throw DomainError("negative base under fractional exponent");
            }
            if (b == 0.0 && p == 0.0) {
                return 1.0; // x^0 is the constant 1 on [0, inf)
            }
            return std::pow(b, p);
        }
        case ExprKind::Neg: return -eval_expression(e->lhs, x, alpha, s);
        case ExprKind::Abs: return std::fabs(eval_expression(e->lhs, x, alpha, s));
    }
    throw Error("eval_expression: corrupt node");
}

bool expr_contains_x(const ExprPtr& e) {
    if (!e) return false;
    if (e->kind == ExprKind::Variable) return true;
    return expr_contains_x(e->lhs) || expr_contains_x(e->rhs);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == ExprKind::Number && a->number != b->number) return false;
    return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

} // namespace lfract
