#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "gklo/diffop.hpp"

namespace gklo {

/// Expression over difference operators. Relations are built once as a DAG
/// and then evaluated exactly or at random points mod p.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;
using CoeffMap = std::function<RatFunc(const RatFunc&)>;

struct ExprNode {
    enum class Kind { Leaf, Sum, Product, Transform };
    Kind kind = Kind::Leaf;
    DiffOp leaf;
    /// Sum: sum of f_k * child_k, f_k multiplied on the left.
    std::vector<std::pair<RatFunc, Expr>> terms;
    Expr left, right;
    /// Transform: fn applied to every coefficient of `left`; always
    /// materialized exactly (truncation, coefficient extraction).
    CoeffMap fn;
    /// Shared nodes keep their exact value for every evaluator.
    bool shared = false;
    mutable std::once_flag once;
    mutable DiffOp value;
};

Expr leaf(const DiffOp& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator*(const RatFunc& f, const Expr& a);
Expr linear(std::vector<std::pair<RatFunc, Expr>> terms);
Expr comm(const Expr& a, const Expr& b);
Expr anti(const Expr& a, const Expr& b);
Expr transform(const Expr& a, CoeffMap fn);
/// Proper part in `var` of every coefficient.
Expr truncated(const Expr& a, VarIndex var);
/// Same value as `a`; the exact value is computed once and reused by every
/// ExactEvaluator (thread-safe).
Expr memoized(const Expr& a);

/// Memoized exact evaluation.
class ExactEvaluator {
public:
    DiffOp eval(const Expr& e);

private:
    DiffOp compute(const Expr& e);
    // holds the node so its address cannot be reused while memoized
    std::unordered_map<const ExprNode*, std::pair<Expr, DiffOp>> memo_;
};

/// Value of an expression at one point: shift monomial -> F_p value.
using FpOp = std::map<ShiftMonomial, std::uint64_t>;

/// Evaluates at a base point P. A product evaluates its right factor at
/// P + lambda*hbar for each shift lambda of the left factor. Transform nodes
/// go through `exact`, which may be shared across points.
class ModularEvaluator {
public:
    ModularEvaluator(const PrimeField& F, const FpPoint& base, ExactEvaluator& exact)
        : F_(F), base_(base), exact_(exact) {}
    /// Throws PoleHit.
    FpOp eval(const Expr& e) { return eval(e, ShiftMonomial()); }

private:
    FpOp eval(const Expr& e, const ShiftMonomial& offset);
    const FpPoint& point(const ShiftMonomial& offset);

    const PrimeField& F_;
    FpPoint base_;
    ExactEvaluator& exact_;
    std::map<ShiftMonomial, FpPoint> points_;
    std::map<std::pair<const ExprNode*, ShiftMonomial>, FpOp> memo_;
    std::vector<Expr> alive_;
};

/// Variables that may occur in the value (hbar always included).
std::uint64_t expr_support(const Expr& e);

}  // namespace gklo
