#include "qcx/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>

namespace qcx {

std::vector<std::string> default_var_names(int dim) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(dim));
    for (int i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::vector<std::string> complex_var_names(int n) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(2 * n));
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
    return names;
}

namespace {

struct Token {
    enum Kind { Num, Ident, Op, LParen, RParen, Comma, End } kind;
    double value = 0;
    char op = 0;
    std::string ident;
    size_t offset = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        size_t at = pos_;
        if (pos_ >= src_.size()) return {Token::End, 0, 0, {}, at};
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(at);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Ident, 0, 0, src_.substr(start, pos_ - start), at};
        }
        ++pos_;
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                return {Token::Op, 0, c, {}, at};
            case '(': return {Token::LParen, 0, 0, {}, at};
            case ')': return {Token::RParen, 0, 0, {}, at};
            case ',': return {Token::Comma, 0, 0, {}, at};
            default: throw ParseError(std::string("unexpected character '") + c + "'", at);
        }
    }

  private:
    Token lex_number(size_t at) {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                pos_ = mark;  // bare 'e' belongs to the next token
            } else {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        if (text == ".") throw ParseError("malformed number", at);
        return {Token::Num, std::strtod(text.c_str(), nullptr), 0, {}, at};
    }

    const std::string& src_;
    size_t pos_ = 0;
};

ExprPtr make(ExprOp op, std::vector<ExprPtr> kids) {
    auto n = std::make_shared<ExprAst>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
}

const std::map<std::string, std::pair<ExprOp, int>>& function_table() {
    // name -> (op, arity); -1 means variadic with at least one argument
    static const std::map<std::string, std::pair<ExprOp, int>> t = {
        {"exp", {ExprOp::Exp, 1}},   {"ln", {ExprOp::Ln, 1}},
        {"abs", {ExprOp::Abs, 1}},   {"sqrt", {ExprOp::Sqrt, 1}},
        {"min", {ExprOp::Min, -1}},  {"max", {ExprOp::Max, -1}},
        {"norm2", {ExprOp::Norm2, -1}},
    };
    return t;
}

class Parser {
  public:
    Parser(const std::string& src, const std::vector<std::string>& names)
        : lexer_(src), names_(names) {
        advance();
    }

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        if (cur_.kind != Token::End) throw ParseError("trailing input", cur_.offset);
        return e;
    }

  private:
    void advance() { cur_ = lexer_.next(); }

    ExprPtr parse_sum() {
        ExprPtr left = parse_term();
        while (cur_.kind == Token::Op && (cur_.op == '+' || cur_.op == '-')) {
            char op = cur_.op;
            advance();
            left = make(op == '+' ? ExprOp::Add : ExprOp::Sub, {left, parse_term()});
        }
        return left;
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        while (cur_.kind == Token::Op && (cur_.op == '*' || cur_.op == '/')) {
            char op = cur_.op;
            advance();
            left = make(op == '*' ? ExprOp::Mul : ExprOp::Div, {left, parse_factor()});
        }
        return left;
    }

    ExprPtr parse_factor() {
        if (cur_.kind == Token::Op && cur_.op == '-') {
            advance();
            return make(ExprOp::Neg, {parse_factor()});
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr left = parse_atom();
        while (cur_.kind == Token::Op && cur_.op == '^') {
            advance();
            left = make(ExprOp::Pow, {left, parse_atom()});
        }
        return left;
    }

    ExprPtr parse_atom() {
        if (cur_.kind == Token::Num) {
            auto n = std::make_shared<ExprAst>();
            n->op = ExprOp::Num;
            n->value = cur_.value;
            advance();
            return n;
        }
        if (cur_.kind == Token::LParen) {
            advance();
            ExprPtr e = parse_sum();
            expect_rparen();
            return e;
        }
        if (cur_.kind == Token::Ident) {
            std::string name = cur_.ident;
            size_t at = cur_.offset;
            advance();
            if (cur_.kind == Token::LParen) {
                auto fn = function_table().find(name);
                if (fn == function_table().end())
                    throw ParseError("unknown function '" + name + "'", at);
                advance();
                std::vector<ExprPtr> args;
                args.push_back(parse_sum());
                while (cur_.kind == Token::Comma) {
                    advance();
                    args.push_back(parse_sum());
                }
                expect_rparen();
                int arity = fn->second.second;
                if (arity >= 0 && static_cast<int>(args.size()) != arity)
                    throw ParseError("function '" + name + "' expects " +
                                         std::to_string(arity) + " argument(s)",
                                     at);
                return make(fn->second.first, std::move(args));
            }
            for (size_t i = 0; i < names_.size(); ++i) {
                if (names_[i] == name) {
                    auto n = std::make_shared<ExprAst>();
                    n->op = ExprOp::Var;
                    n->var = static_cast<int>(i);
                    return n;
                }
            }
            throw ParseError("unknown variable '" + name + "'", at);
        }
        throw ParseError("expected a value", cur_.offset);
    }

    void expect_rparen() {
        if (cur_.kind != Token::RParen) throw ParseError("expected ')'", cur_.offset);
        advance();
    }

    Lexer lexer_;
    const std::vector<std::string>& names_;
    Token cur_;
};

double checked(double v, const char* what) {
    if (std::isnan(v)) throw EvalError(std::string("non-real value in ") + what);
    if (v == kInf) throw EvalError(std::string("+infinity in ") + what);
    return v;
}

double eval_node(const ExprAst& n, const Point& p) {
    switch (n.op) {
        case ExprOp::Num: return n.value;
        case ExprOp::Var: return p[static_cast<size_t>(n.var)];
        case ExprOp::Add: return checked(eval_node(*n.kids[0], p) + eval_node(*n.kids[1], p), "+");
        case ExprOp::Sub: return checked(eval_node(*n.kids[0], p) - eval_node(*n.kids[1], p), "-");
        case ExprOp::Mul: return checked(eval_node(*n.kids[0], p) * eval_node(*n.kids[1], p), "*");
        case ExprOp::Div: return checked(eval_node(*n.kids[0], p) / eval_node(*n.kids[1], p), "/");
        case ExprOp::Pow:
            return checked(std::pow(eval_node(*n.kids[0], p), eval_node(*n.kids[1], p)), "^");
        case ExprOp::Neg: return checked(-eval_node(*n.kids[0], p), "unary -");
        case ExprOp::Exp: return checked(std::exp(eval_node(*n.kids[0], p)), "exp");
        case ExprOp::Ln: return checked(std::log(eval_node(*n.kids[0], p)), "ln");
        case ExprOp::Abs: return checked(std::fabs(eval_node(*n.kids[0], p)), "abs");
        case ExprOp::Sqrt: return checked(std::sqrt(eval_node(*n.kids[0], p)), "sqrt");
        case ExprOp::Min: {
            double v = eval_node(*n.kids[0], p);
            for (size_t i = 1; i < n.kids.size(); ++i) v = std::fmin(v, eval_node(*n.kids[i], p));
            return v;
        }
        case ExprOp::Max: {
            double v = eval_node(*n.kids[0], p);
            for (size_t i = 1; i < n.kids.size(); ++i) v = std::fmax(v, eval_node(*n.kids[i], p));
            return v;
        }
        case ExprOp::Norm2: {
            double s = 0;
            for (const auto& k : n.kids) {
                double v = eval_node(*k, p);
                s += v * v;
            }
            return checked(std::sqrt(s), "norm2");
        }
    }
    throw EvalError("corrupt expression node");
}

// Precedence levels used for minimal parenthesization.
int level(ExprOp op) {
    switch (op) {
        case ExprOp::Add: case ExprOp::Sub: return 1;
        case ExprOp::Mul: case ExprOp::Div: return 2;
        case ExprOp::Neg: return 3;
        case ExprOp::Pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_node(const ExprAst& n, const std::vector<std::string>& names, int min_level,
                std::string& out) {
    int lv = level(n.op);
    bool parens = lv < min_level;
    if (parens) out += '(';
    switch (n.op) {
        case ExprOp::Num:
            if (n.value < 0 || (n.value == 0 && std::signbit(n.value))) {
                bool p2 = 3 < (parens ? 0 : min_level);
                if (p2) out += '(';
                out += '-';
                out += format_number(-n.value);
                if (p2) out += ')';
            } else {
                out += format_number(n.value);
            }
            break;
        case ExprOp::Var: out += names[static_cast<size_t>(n.var)]; break;
        case ExprOp::Add:
        case ExprOp::Sub:
            print_node(*n.kids[0], names, 1, out);
            out += (n.op == ExprOp::Add ? " + " : " - ");
            print_node(*n.kids[1], names, 2, out);
            break;
        case ExprOp::Mul:
        case ExprOp::Div:
            print_node(*n.kids[0], names, 2, out);
            out += (n.op == ExprOp::Mul ? "*" : "/");
            print_node(*n.kids[1], names, 3, out);
            break;
        case ExprOp::Neg:
            out += '-';
            print_node(*n.kids[0], names, 3, out);
            break;
        case ExprOp::Pow:
            print_node(*n.kids[0], names, 4, out);
            out += '^';
            print_node(*n.kids[1], names, 5, out);
            break;
        default: {
            static const std::map<ExprOp, std::string> fn = {
                {ExprOp::Exp, "exp"},   {ExprOp::Ln, "ln"},   {ExprOp::Abs, "abs"},
                {ExprOp::Sqrt, "sqrt"}, {ExprOp::Min, "min"}, {ExprOp::Max, "max"},
                {ExprOp::Norm2, "norm2"}};
            out += fn.at(n.op);
            out += '(';
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ", ";
                print_node(*n.kids[i], names, 0, out);
            }
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

Expr parse_expr(const std::string& src, int dim) { return parse_expr(src, default_var_names(dim)); }

Expr parse_expr(const std::string& src, std::vector<std::string> names) {
    Parser parser(src, names);
    Expr e;
    e.root = parser.parse();
    e.dim = static_cast<int>(names.size());
    e.names = std::move(names);
    e.source = src;
    return e;
}

std::string print_expr(const Expr& e) {
    std::string out;
    print_node(*e.root, e.names, 0, out);
    return out;
}

double eval_expr(const Expr& e, const Point& p) {
    if (static_cast<int>(p.size()) != e.dim)
        throw EvalError("point dimension does not match expression");
    double v = eval_node(*e.root, p);
    if (std::isnan(v) || v == kInf) throw EvalError("expression value is not an extended real");
    return v;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->op != b->op || a->kids.size() != b->kids.size()) return false;
    if (a->op == ExprOp::Num)
        return a->value == b->value || (std::isnan(a->value) && std::isnan(b->value));
    if (a->op == ExprOp::Var) return a->var == b->var;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

}  // namespace qcx
