#include "nbvp/expr.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace nbvp {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

Expr make(Node n) { return Expr::from_node(std::make_shared<const Node>(std::move(n))); }

Expr make_binary(Op op, const Expr& a, const Expr& b) {
    Node n;
    n.op = op;
    n.lhs = a.ptr();
    n.rhs = b.ptr();
    return make(std::move(n));
}

Expr make_unary(Op op, const Expr& a, int exponent = 0) {
    Node n;
    n.op = op;
    n.lhs = a.ptr();
    n.exponent = exponent;
    return make(std::move(n));
}

const Node& value_of(const Expr& e) { return e.node(); }

double pow_float(double base, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r *= base;
    }
    return r;
}

// Shared scalar semantics for every evaluator (tree walk, tape, folding).
double apply(Op op, double a, double b, int n) {
    switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div:
        if (b == 0.0) {
            throw DivisionByZero();
        }
        return a / b;
    case Op::neg: return -a;
    case Op::pow_int: return pow_float(a, n);
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::exp: return std::exp(a);
    default: break;
    }
    throw std::logic_error("apply: not an operator node");
}

Interval apply(Op op, const Interval& a, const Interval& b, int n) {
    switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return a / b;
    case Op::neg: return -a;
    case Op::pow_int: return pow_int(a, n);
    case Op::sin: return sin(a);
    case Op::cos: return cos(a);
    case Op::exp: return exp(a);
    default: break;
    }
    throw std::logic_error("apply: not an operator node");
}

bool is_binary(Op op) {
    return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

Expr fold(Op op, const Expr& a, const Expr& b, int n) {
    const Node& na = value_of(a);
    const Node& nb = is_binary(op) ? value_of(b) : na;
    return Expr::constant(apply(op, na.value, nb.value, n), apply(op, na.enclosure, nb.enclosure, n));
}

} // namespace

Expr::Expr() {
    static const auto zero = std::make_shared<const Node>();
    node_ = zero;
}

Expr Expr::constant(double value) { return constant(value, Interval(value)); }

Expr Expr::constant(double value, const Interval& enclosure) {
    Node n;
    n.op = Op::constant;
    n.value = value;
    n.enclosure = enclosure;
    return make(std::move(n));
}

Expr Expr::variable(Var var) {
    Node n;
    n.op = Op::variable;
    n.var = var;
    return make(std::move(n));
}

Expr Expr::pi() { return constant(const_pi().lo(), const_pi()); }

Op Expr::op() const { return node_->op; }
Expr Expr::lhs() const { return Expr(node_->lhs); }
Expr Expr::rhs() const { return Expr(node_->rhs); }

bool Expr::is_constant() const { return node_->op == Op::constant; }

bool Expr::is_exactly(double v) const {
    return is_constant() && node_->value == v && node_->enclosure == Interval(v);
}

bool Expr::depends_on(Var var) const {
    std::unordered_set<const Node*> seen;
    std::function<bool(const Node*)> walk = [&](const Node* n) -> bool {
        if (n == nullptr || !seen.insert(n).second) {
            return false;
        }
        if (n->op == Op::variable) {
            return n->var == var;
        }
        return walk(n->lhs.get()) || walk(n->rhs.get());
    };
    return walk(node_.get());
}

std::size_t Expr::dag_size() const {
    std::unordered_set<const Node*> seen;
    std::function<void(const Node*)> walk = [&](const Node* n) {
        if (n == nullptr || !seen.insert(n).second) {
            return;
        }
        walk(n->lhs.get());
        walk(n->rhs.get());
    };
    walk(node_.get());
    return seen.size();
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_exactly(0.0)) {
        return b;
    }
    if (b.is_exactly(0.0)) {
        return a;
    }
    if (a.is_constant() && b.is_constant()) {
        return fold(Op::add, a, b, 0);
    }
    return make_binary(Op::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_exactly(0.0)) {
        return a;
    }
    if (a.is_exactly(0.0)) {
        return -b;
    }
    if (a.is_constant() && b.is_constant()) {
        return fold(Op::sub, a, b, 0);
    }
    return make_binary(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_exactly(0.0) || b.is_exactly(0.0)) {
        return Expr();
    }
    if (a.is_exactly(1.0)) {
        return b;
    }
    if (b.is_exactly(1.0)) {
        return a;
    }
    if (a.is_constant() && b.is_constant()) {
        return fold(Op::mul, a, b, 0);
    }
    return make_binary(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_exactly(1.0)) {
        return a;
    }
    const bool b_nonzero_const = b.is_constant() && !b.node().enclosure.contains_zero();
    if (a.is_exactly(0.0) && b_nonzero_const) {
        return Expr();
    }
    if (a.is_constant() && b_nonzero_const) {
        return fold(Op::div, a, b, 0);
    }
    return make_binary(Op::div, a, b);
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) {
        return fold(Op::neg, a, a, 0);
    }
    if (a.op() == Op::neg) {
        return a.lhs();
    }
    return make_unary(Op::neg, a);
}

Expr pow_int(const Expr& base, int exponent) {
    if (exponent < 0) {
        throw std::invalid_argument("pow_int requires a non-negative exponent");
    }
    if (exponent == 0) {
        return Expr::constant(1.0);
    }
    if (exponent == 1) {
        return base;
    }
    if (base.is_constant()) {
        return fold(Op::pow_int, base, base, exponent);
    }
    return make_unary(Op::pow_int, base, exponent);
}

Expr sin(const Expr& a) {
    if (a.is_exactly(0.0)) {
        return Expr();
    }
    if (a.is_constant()) {
        return fold(Op::sin, a, a, 0);
    }
    return make_unary(Op::sin, a);
}

Expr cos(const Expr& a) {
    if (a.is_exactly(0.0)) {
        return Expr::constant(1.0);
    }
    if (a.is_constant()) {
        return fold(Op::cos, a, a, 0);
    }
    return make_unary(Op::cos, a);
}

Expr exp(const Expr& a) {
    if (a.is_exactly(0.0)) {
        return Expr::constant(1.0);
    }
    if (a.is_constant()) {
        return fold(Op::exp, a, a, 0);
    }
    return make_unary(Op::exp, a);
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    Expr parse_all() {
        Expr e = parse_sum();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + parse_product();
            } else if (accept('-')) {
                lhs = lhs - parse_product();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * parse_unary();
            } else if (accept('/')) {
                lhs = lhs / parse_unary();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) {
            return -parse_unary();
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) {
            const bool paren = accept('(');
            skip_space();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
                ++pos_;
            }
            if (start == pos_) {
                throw ParseError("exponent must be a non-negative integer literal", start);
            }
            if (pos_ - start > 6) {
                throw ParseError("exponent too large", start);
            }
            const int n = std::stoi(text_.substr(start, pos_ - start));
            if (paren) {
                expect(')');
            }
            return pow_int(base, n);
        }
        return base;
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0) {
                ++pos_;
            }
            const std::string name = text_.substr(start, pos_ - start);
            if (name == "x") {
                return Expr::variable(Var::x);
            }
            if (name == "u") {
                return Expr::variable(Var::u);
            }
            if (name == "up") {
                return Expr::variable(Var::v);
            }
            if (name == "pi") {
                return Expr::pi();
            }
            if (name == "sin" || name == "cos" || name == "exp") {
                expect('(');
                Expr arg = parse_sum();
                expect(')');
                if (name == "sin") {
                    return sin(arg);
                }
                if (name == "cos") {
                    return cos(arg);
                }
                return exp(arg);
            }
            throw ParseError("unknown identifier '" + name + "'", start);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
                ++p;
            }
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])) != 0) {
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])) != 0) {
                    ++p;
                }
                pos_ = p;
            }
        }
        const std::string literal = text_.substr(start, pos_ - start);
        try {
            const Interval enc = enclose_decimal(literal);
            return Expr::constant(std::strtod(literal.c_str(), nullptr), enc);
        } catch (const std::exception&) {
            throw ParseError("malformed number '" + literal + "'", start);
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

int precedence(const Node& n) {
    switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow_int: return 4;
    case Op::constant: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    default: return 5;
    }
}

std::string constant_text(const Node& n) {
    if (n.enclosure == const_pi() && n.value == const_pi().lo()) {
        return "pi";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", n.value);
    return buf;
}

void print(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out.push_back('(');
        print(child, out);
        out.push_back(')');
    } else {
        print(child, out);
    }
}

void print(const Node& n, std::string& out) {
    switch (n.op) {
    case Op::constant: out += constant_text(n); return;
    case Op::variable: out += n.var == Var::x ? "x" : (n.var == Var::u ? "u" : "up"); return;
    case Op::add:
    case Op::sub:
        print_child(*n.lhs, 1, out);
        out += n.op == Op::add ? " + " : " - ";
        print_child(*n.rhs, 2, out);
        return;
    case Op::mul:
    case Op::div:
        print_child(*n.lhs, 2, out);
        out += n.op == Op::mul ? "*" : "/";
        print_child(*n.rhs, 3, out);
        return;
    case Op::neg:
        out += "-";
        print_child(*n.lhs, 4, out);
        return;
    case Op::pow_int:
        print_child(*n.lhs, 5, out);
        out += "^" + std::to_string(n.exponent);
        return;
    case Op::sin:
    case Op::cos:
    case Op::exp:
        out += n.op == Op::sin ? "sin(" : (n.op == Op::cos ? "cos(" : "exp(");
        print(*n.lhs, out);
        out += ")";
        return;
    }
}

} // namespace

Expr parse(const std::string& text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
    std::string out;
    print(e.node(), out);
    return out;
}

// ---------------------------------------------------------- transformations

Expr diff(const Expr& e, Var var) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> d = [&](const Expr& f) -> Expr {
        if (auto it = memo.find(f.id()); it != memo.end()) {
            return it->second;
        }
        Expr r;
        switch (f.op()) {
        case Op::constant: r = Expr(); break;
        case Op::variable: r = f.node().var == var ? Expr::constant(1.0) : Expr(); break;
        case Op::add: r = d(f.lhs()) + d(f.rhs()); break;
        case Op::sub: r = d(f.lhs()) - d(f.rhs()); break;
        case Op::neg: r = -d(f.lhs()); break;
        case Op::mul: r = d(f.lhs()) * f.rhs() + f.lhs() * d(f.rhs()); break;
        case Op::div: {
            const Expr a = f.lhs();
            const Expr b = f.rhs();
            const Expr db = d(b);
            r = db.is_exactly(0.0) ? d(a) / b : (d(a) * b - a * db) / pow_int(b, 2);
            break;
        }
        case Op::pow_int: {
            const int n = f.node().exponent;
            r = Expr::constant(n) * pow_int(f.lhs(), n - 1) * d(f.lhs());
            break;
        }
        case Op::sin: r = cos(f.lhs()) * d(f.lhs()); break;
        case Op::cos: r = -(sin(f.lhs()) * d(f.lhs())); break;
        case Op::exp: r = f * d(f.lhs()); break;
        }
        memo.emplace(f.id(), r);
        return r;
    };
    return d(e);
}

Expr substitute(const Expr& e, Var var, const Expr& replacement) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> s = [&](const Expr& f) -> Expr {
        if (auto it = memo.find(f.id()); it != memo.end()) {
            return it->second;
        }
        Expr r;
        switch (f.op()) {
        case Op::constant: r = f; break;
        case Op::variable: r = f.node().var == var ? replacement : f; break;
        case Op::add: r = s(f.lhs()) + s(f.rhs()); break;
        case Op::sub: r = s(f.lhs()) - s(f.rhs()); break;
        case Op::mul: r = s(f.lhs()) * s(f.rhs()); break;
        case Op::div: r = s(f.lhs()) / s(f.rhs()); break;
        case Op::neg: r = -s(f.lhs()); break;
        case Op::pow_int: r = pow_int(s(f.lhs()), f.node().exponent); break;
        case Op::sin: r = sin(s(f.lhs())); break;
        case Op::cos: r = cos(s(f.lhs())); break;
        case Op::exp: r = exp(s(f.lhs())); break;
        }
        memo.emplace(f.id(), r);
        return r;
    };
    return s(e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    std::function<bool(const Node*, const Node*)> eq = [&](const Node* p, const Node* q) -> bool {
        if (p == q) {
            return true;
        }
        if (p == nullptr || q == nullptr || p->op != q->op) {
            return false;
        }
        switch (p->op) {
        case Op::constant: return p->value == q->value;
        case Op::variable: return p->var == q->var;
        case Op::pow_int: return p->exponent == q->exponent && eq(p->lhs.get(), q->lhs.get());
        default: return eq(p->lhs.get(), q->lhs.get()) && eq(p->rhs.get(), q->rhs.get());
        }
    };
    return eq(a.id(), b.id());
}

namespace {

template <class T>
T eval_tree(const Expr& e, const T& x, const T& u, const T& v) {
    std::unordered_map<const Node*, T> memo;
    std::function<T(const Node*)> ev = [&](const Node* n) -> T {
        if (auto it = memo.find(n); it != memo.end()) {
            return it->second;
        }
        T r;
        if (n->op == Op::constant) {
            if constexpr (std::is_same_v<T, double>) {
                r = n->value;
            } else {
                r = n->enclosure;
            }
        } else if (n->op == Op::variable) {
            r = n->var == Var::x ? x : (n->var == Var::u ? u : v);
        } else if (is_binary(n->op)) {
            const T a = ev(n->lhs.get());
            const T b = ev(n->rhs.get());
            r = apply(n->op, a, b, 0);
        } else {
            const T a = ev(n->lhs.get());
            r = apply(n->op, a, a, n->exponent);
        }
        memo.emplace(n, r);
        return r;
    };
    return ev(e.id());
}

} // namespace

double eval_float(const Expr& e, double x, double u, double v) { return eval_tree<double>(e, x, u, v); }

Interval eval_interval(const Expr& e, const Interval& x, const Interval& u, const Interval& v) {
    return eval_tree<Interval>(e, x, u, v);
}

// ------------------------------------------------------------------ paths

PathExpr::PathExpr() = default;

PathExpr::PathExpr(Expr e) : expr_(std::move(e)) {
    if (expr_.depends_on(Var::u) || expr_.depends_on(Var::v)) {
        throw std::invalid_argument("path expression must depend on x only: " + to_string(expr_));
    }
}

PathExpr PathExpr::derivative() const { return PathExpr(diff(expr_, Var::x)); }

double PathExpr::operator()(double x) const { return eval_float(expr_, x, 0.0, 0.0); }

Interval PathExpr::operator()(const Interval& x) const {
    return eval_interval(expr_, x, Interval(0.0), Interval(0.0));
}

PathExpr substitute_path(const Expr& e, const Expr& w, const Expr& dw) {
    if (w.depends_on(Var::u) || w.depends_on(Var::v) || dw.depends_on(Var::u) ||
        dw.depends_on(Var::v)) {
        throw std::invalid_argument("substitute_path: path must be a function of x");
    }
    // u and v are replaced simultaneously; neither replacement contains them.
    return PathExpr(substitute(substitute(e, Var::u, w), Var::v, dw));
}

// ------------------------------------------------------------------- tape

namespace {

struct InstrKey {
    Op op;
    std::size_t a;
    std::size_t b;
    int exponent;
    Var var;
    std::uint64_t value_bits;
    std::uint64_t lo_bits;
    std::uint64_t hi_bits;
    bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
    std::size_t operator()(const InstrKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.op);
        const auto mix = [&h](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(k.a);
        mix(k.b);
        mix(static_cast<std::uint64_t>(k.exponent));
        mix(static_cast<std::uint64_t>(k.var));
        mix(k.value_bits);
        mix(k.lo_bits);
        mix(k.hi_bits);
        return h;
    }
};

} // namespace

Tape::Tape(const Expr& output) : Tape(std::span<const Expr>(&output, 1)) {}

Tape::Tape(std::span<const Expr> outputs) {
    std::unordered_map<const Node*, std::size_t> slot_of;
    std::unordered_map<InstrKey, std::size_t, InstrKeyHash> cse;

    // Iterative post-order so deep derivative DAGs do not exhaust the stack.
    const auto emit = [&](const Node* root) -> std::size_t {
        std::vector<std::pair<const Node*, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [n, expanded] = stack.back();
            stack.pop_back();
            if (slot_of.contains(n)) {
                continue;
            }
            if (!expanded) {
                stack.emplace_back(n, true);
                if (n->rhs) {
                    stack.emplace_back(n->rhs.get(), false);
                }
                if (n->lhs) {
                    stack.emplace_back(n->lhs.get(), false);
                }
                continue;
            }
            Instr ins{n->op, 0, 0, n->exponent, n->var, n->value, n->enclosure};
            if (n->lhs) {
                ins.a = slot_of.at(n->lhs.get());
            }
            if (n->rhs) {
                ins.b = slot_of.at(n->rhs.get());
            }
            InstrKey key{ins.op,
                         ins.a,
                         ins.b,
                         n->op == Op::pow_int ? ins.exponent : 0,
                         n->op == Op::variable ? ins.var : Var::x,
                         n->op == Op::constant ? std::bit_cast<std::uint64_t>(ins.value) : 0,
                         n->op == Op::constant ? std::bit_cast<std::uint64_t>(ins.enclosure.lo()) : 0,
                         n->op == Op::constant ? std::bit_cast<std::uint64_t>(ins.enclosure.hi()) : 0};
            auto [it, fresh] = cse.try_emplace(key, code_.size());
            if (fresh) {
                code_.push_back(ins);
            }
            slot_of.emplace(n, it->second);
        }
        return slot_of.at(root);
    };
    for (const Expr& e : outputs) {
        outputs_.push_back(emit(e.id()));
    }
}

template <class T>
void Tape::run(const T& x, const T& u, const T& v, std::vector<T>& scratch, std::span<T> out) const {
    if (out.size() != outputs_.size()) {
        throw std::invalid_argument("Tape::eval: output span has wrong size");
    }
    scratch.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& ins = code_[i];
        switch (ins.op) {
        case Op::constant:
            if constexpr (std::is_same_v<T, double>) {
                scratch[i] = ins.value;
            } else {
                scratch[i] = ins.enclosure;
            }
            break;
        case Op::variable: scratch[i] = ins.var == Var::x ? x : (ins.var == Var::u ? u : v); break;
        default: scratch[i] = apply(ins.op, scratch[ins.a], scratch[ins.b], ins.exponent); break;
        }
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) {
        out[k] = scratch[outputs_[k]];
    }
}

void Tape::eval(double x, double u, double v, std::vector<double>& scratch, std::span<double> out) const {
    run<double>(x, u, v, scratch, out);
}

void Tape::eval(const Interval& x, const Interval& u, const Interval& v, std::vector<Interval>& scratch,
                std::span<Interval> out) const {
    run<Interval>(x, u, v, scratch, out);
}

double Tape::eval1(double x, double u, double v) const {
    std::vector<double> scratch;
    double r = 0.0;
    eval(x, u, v, scratch, std::span<double>(&r, 1));
    return r;
}

Interval Tape::eval1(const Interval& x, const Interval& u, const Interval& v) const {
    std::vector<Interval> scratch;
    Interval r;
    eval(x, u, v, scratch, std::span<Interval>(&r, 1));
    return r;
}

} // namespace nbvp
