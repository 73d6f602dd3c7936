#include "gklo/expr.hpp"

#include <unordered_set>

#include "gklo/error.hpp"

namespace gklo {

namespace {

std::shared_ptr<ExprNode> node(ExprNode::Kind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

}  // namespace

Expr leaf(const DiffOp& a) {
    auto n = node(ExprNode::Kind::Leaf);
    n->leaf = a;
    return n;
}

Expr linear(std::vector<std::pair<RatFunc, Expr>> terms) {
    auto n = node(ExprNode::Kind::Sum);
    for (auto& [f, e] : terms)
        if (!f.is_zero()) n->terms.emplace_back(std::move(f), std::move(e));
    return n;
}

Expr operator+(const Expr& a, const Expr& b) { return linear({{RatFunc(1), a}, {RatFunc(1), b}}); }
Expr operator-(const Expr& a, const Expr& b) { return linear({{RatFunc(1), a}, {RatFunc(-1), b}}); }
Expr operator-(const Expr& a) { return linear({{RatFunc(-1), a}}); }
Expr operator*(const RatFunc& f, const Expr& a) { return linear({{f, a}}); }

Expr operator*(const Expr& a, const Expr& b) {
    auto n = node(ExprNode::Kind::Product);
    n->left = a;
    n->right = b;
    return n;
}

Expr comm(const Expr& a, const Expr& b) { return a * b - b * a; }
Expr anti(const Expr& a, const Expr& b) { return a * b + b * a; }

Expr transform(const Expr& a, CoeffMap fn) {
    auto n = node(ExprNode::Kind::Transform);
    n->left = a;
    n->fn = std::move(fn);
    return n;
}

Expr truncated(const Expr& a, VarIndex var) {
    return transform(a, [var](const RatFunc& f) { return truncate_proper(f, var); });
}

Expr memoized(const Expr& a) {
    auto n = node(ExprNode::Kind::Sum);
    n->terms.emplace_back(RatFunc(1), a);
    n->shared = true;
    return n;
}

DiffOp ExactEvaluator::eval(const Expr& e) {
    if (e->kind == ExprNode::Kind::Leaf) return e->leaf;
    if (e->shared) {
        std::call_once(e->once, [&] { e->value = compute(e); });
        return e->value;
    }
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second.second;
    DiffOp r = compute(e);
    memo_.emplace(e.get(), std::pair{e, r});
    return r;
}

DiffOp ExactEvaluator::compute(const Expr& e) {
    DiffOp r;
    switch (e->kind) {
        case ExprNode::Kind::Sum: {
            std::vector<DiffOp> parts;
            for (const auto& [f, c] : e->terms) {
                DiffOp x = eval(c);
                parts.push_back(f == RatFunc(1) ? std::move(x) : f * x);
            }
            r = DiffOp::sum(parts);
            break;
        }
        case ExprNode::Kind::Product: r = eval(e->left) * eval(e->right); break;
        case ExprNode::Kind::Transform: r = eval(e->left).map_coefficients(e->fn); break;
        case ExprNode::Kind::Leaf: r = e->leaf; break;
    }
    return r;
}

const FpPoint& ModularEvaluator::point(const ShiftMonomial& offset) {
    auto it = points_.find(offset);
    if (it != points_.end()) return it->second;
    FpPoint p = base_;
    const std::uint64_t h = base_[hbar_var()];
    for (const auto& [v, k] : offset.exponents()) {
        std::uint64_t step = F_.mul(F_.from_int(k), h);
        p[v] = F_.add(p[v], step);
    }
    return points_.emplace(offset, p).first->second;
}

FpOp ModularEvaluator::eval(const Expr& e, const ShiftMonomial& offset) {
    auto key = std::make_pair(e.get(), offset);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    FpOp out;
    auto add = [&](const ShiftMonomial& m, std::uint64_t val) {
        if (val == 0) return;
        auto [it, fresh] = out.emplace(m, val);
        if (!fresh) {
            it->second = F_.add(it->second, val);
            if (it->second == 0) out.erase(it);
        }
    };
    switch (e->kind) {
        case ExprNode::Kind::Leaf: {
            const FpPoint& p = point(offset);
            for (const auto& [m, c] : e->leaf.terms()) add(m, c.evaluate(F_, p));
            break;
        }
        case ExprNode::Kind::Transform: {
            DiffOp x = exact_.eval(e);
            const FpPoint& p = point(offset);
            for (const auto& [m, c] : x.terms()) add(m, c.evaluate(F_, p));
            break;
        }
        case ExprNode::Kind::Sum:
            for (const auto& [f, c] : e->terms) {
                FpOp x = eval(c, offset);
                if (x.empty()) continue;
                std::uint64_t s = f.evaluate(F_, point(offset));
                for (const auto& [m, val] : x) add(m, F_.mul(s, val));
            }
            break;
        case ExprNode::Kind::Product: {
            FpOp a = eval(e->left, offset);
            for (const auto& [l, av] : a) {
                FpOp b = eval(e->right, offset * l);
                for (const auto& [m, bv] : b) add(l * m, F_.mul(av, bv));
            }
            break;
        }
    }
    if (memo_.emplace(key, out).second && offset.is_identity()) alive_.push_back(e);
    return out;
}

std::uint64_t expr_support(const Expr& root) {
    std::uint64_t s = std::uint64_t{1} << hbar_var();
    std::unordered_set<const ExprNode*> seen;
    std::vector<const ExprNode*> stack{root.get()};
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& [m, c] : n->leaf.terms()) s |= c.support();
        for (const auto& [f, c] : n->terms) {
            s |= f.support();
            stack.push_back(c.get());
        }
        if (n->left) stack.push_back(n->left.get());
        if (n->right) stack.push_back(n->right.get());
    }
    return s;
}

}  // namespace gklo
