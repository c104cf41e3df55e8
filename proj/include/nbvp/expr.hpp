#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nbvp/interval.hpp"

namespace nbvp {

/// Independent variables of a right-hand side f(x, u, v) with v standing for u'.
enum class Var { x, u, v };

enum class Op { constant, variable, add, sub, mul, div, neg, pow_int, sin, cos, exp };

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t position);
    [[nodiscard]] std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

class DivisionByZero : public std::runtime_error {
  public:
    DivisionByZero() : std::runtime_error("division by zero in float evaluation") {}
};

struct Node;

/// Immutable expression handle. Sub-expressions are shared, so derivatives
/// and substitutions produce DAGs rather than copies.
///
/// Constants carry a double (used by float evaluation) together with an
/// interval enclosure of the real number they denote (used by interval
/// evaluation); `pi` and decimal literals such as 0.1 are therefore exact in
/// the rigorous path.
class Expr {
  public:
    Expr();
    static Expr constant(double value);
    static Expr constant(double value, const Interval& enclosure);
    static Expr variable(Var var);
    static Expr pi();

    static Expr from_node(std::shared_ptr<const Node> node) { return Expr(std::move(node)); }

    [[nodiscard]] const Node& node() const { return *node_; }
    [[nodiscard]] const Node* id() const { return node_.get(); }
    [[nodiscard]] const std::shared_ptr<const Node>& ptr() const { return node_; }
    [[nodiscard]] Op op() const;
    [[nodiscard]] Expr lhs() const;
    [[nodiscard]] Expr rhs() const;

    [[nodiscard]] bool is_constant() const;
    /// Constant whose enclosure is exactly the point `v`.
    [[nodiscard]] bool is_exactly(double v) const;
    [[nodiscard]] bool depends_on(Var var) const;
    /// Number of distinct nodes in the DAG.
    [[nodiscard]] std::size_t dag_size() const;

  private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Op op = Op::constant;
    double value = 0.0;
    Interval enclosure;
    Var var = Var::x;
    int exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

// Constructors apply the simplification rules: constant folding, +0/-0
// elimination, *1 and *0, double negation, pow 0/1.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow_int(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

/// Parses the expression grammar: identifiers x, u, up; functions sin, cos,
/// exp; constant pi; + - * / ^ with the usual precedence; decimal literals.
/// The exponent of ^ must be a non-negative integer literal.
Expr parse(const std::string& text);
std::string to_string(const Expr& e);

Expr diff(const Expr& e, Var var);
/// Replaces every occurrence of `var` by `replacement`.
Expr substitute(const Expr& e, Var var, const Expr& replacement);
bool structurally_equal(const Expr& a, const Expr& b);

double eval_float(const Expr& e, double x, double u, double v);
Interval eval_interval(const Expr& e, const Interval& x, const Interval& u, const Interval& v);

/// An expression in x alone, e.g. f(x, w(x), w'(x)) for a fixed path w.
class PathExpr {
  public:
    PathExpr();
    /// Throws std::invalid_argument if `e` depends on u or v.
    explicit PathExpr(Expr e);

    [[nodiscard]] const Expr& expr() const { return expr_; }
    [[nodiscard]] PathExpr derivative() const;
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Interval operator()(const Interval& x) const;

  private:
    Expr expr_;
};

/// Substitutes u := w(x) and v := w'(x).
PathExpr substitute_path(const Expr& e, const Expr& w, const Expr& dw);

/// Flattened, common-subexpression-eliminated evaluation program for one
/// or more expressions. Evaluation performs exactly the operations the
/// tree-walking evaluators perform, so results agree bit for bit.
class Tape {
  public:
    Tape() = default;
    explicit Tape(std::span<const Expr> outputs);
    explicit Tape(const Expr& output);

    [[nodiscard]] std::size_t size() const { return code_.size(); }
    [[nodiscard]] std::size_t outputs() const { return outputs_.size(); }

    /// `scratch` is resized as needed; reuse it across calls.
    void eval(double x, double u, double v, std::vector<double>& scratch, std::span<double> out) const;
    void eval(const Interval& x, const Interval& u, const Interval& v, std::vector<Interval>& scratch,
              std::span<Interval> out) const;

    [[nodiscard]] double eval1(double x, double u = 0.0, double v = 0.0) const;
    [[nodiscard]] Interval eval1(const Interval& x, const Interval& u = Interval(0.0),
                                 const Interval& v = Interval(0.0)) const;

  private:
    struct Instr {
        Op op;
        std::size_t a;
        std::size_t b;
        int exponent;
        Var var;
        double value;
        Interval enclosure;
    };
    template <class T>
    void run(const T& x, const T& u, const T& v, std::vector<T>& scratch, std::span<T> out) const;

    std::vector<Instr> code_;
    std::vector<std::size_t> outputs_;
};

} // namespace nbvp
