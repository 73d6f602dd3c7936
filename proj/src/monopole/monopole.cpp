#include "gklo/monopole.hpp"

#include "gklo/error.hpp"

namespace gklo {

namespace {

RatFunc hb() { return RatFunc::variable(hbar_var()); }

void require_positive(const GkloContext& ctx, int i) {
    if (i < 0 || i >= ctx.node_count() || !ctx.quiver().is_positive(i))
        throw Error(ErrorCode::NotMinusculeContext, "minuscule coweights are indexed by positive nodes");
}

std::string node_name(const GkloContext& ctx, int j, int k) {
    return ctx.quiver().node_id(j) + "," + std::to_string(k);
}

}  // namespace

const char* to_string(WeightSummand::Kind k) {
    switch (k) {
        case WeightSummand::Kind::ArrowHom: return "arrow-hom";
        case WeightSummand::Kind::AltWedge: return "alt-wedge";
        case WeightSummand::Kind::FramingHom: return "framing-hom";
    }
    return "?";
}

const char* to_string(Direction d) { return d == Direction::Plus ? "plus" : "minus"; }

VarIndex monopole_var() { return intern_var("x"); }

std::string WeightSummand::to_string(const GkloContext& ctx) const {
    const auto& q = ctx.quiver();
    switch (kind) {
        case Kind::ArrowHom: {
            const auto& h = q.arrows()[arrow];
            return "Hom(e_{" + node_name(ctx, h.source, a) + "}, e_{" + node_name(ctx, h.target, b) + "})";
        }
        case Kind::AltWedge: {
            const auto& h = q.arrows()[arrow];
            return "e_{" + node_name(ctx, h.target, a) + "} ^ e_{" + node_name(ctx, h.target, b) + "}";
        }
        case Kind::FramingHom:
            return "Hom(f_{" + node_name(ctx, node, a) + "}, e_{" + node_name(ctx, node, b) + "})";
    }
    return "?";
}

std::vector<WeightSummand> weight_summands(const GkloContext& ctx) {
    const auto& q = ctx.quiver();
    std::vector<WeightSummand> out;
    for (int h = 0; h < static_cast<int>(q.arrows().size()); ++h) {
        const auto& ar = q.arrows()[h];
        if (ar.fixed) {
            for (int a = 1; a <= ctx.v(ar.target); ++a)
                for (int b = a + 1; b <= ctx.v(ar.target); ++b) {
                    WeightSummand s{WeightSummand::Kind::AltWedge, h, -1, a, b, ctx.x(ar.target, a) + ctx.x(ar.target, b), {}};
                    s.x_terms = {{ar.target, a, 1}, {ar.target, b, 1}};
                    out.push_back(std::move(s));
                }
        } else if (ar.positive) {
            for (int a = 1; a <= ctx.v(ar.source); ++a)
                for (int b = 1; b <= ctx.v(ar.target); ++b) {
                    WeightSummand s{WeightSummand::Kind::ArrowHom, h, -1, a, b, ctx.x(ar.target, b) - ctx.x(ar.source, a), {}};
                    s.x_terms = {{ar.target, b, 1}, {ar.source, a, -1}};
                    out.push_back(std::move(s));
                }
        }
    }
    for (int j = 0; j < ctx.node_count(); ++j)
        for (int a = 1; a <= ctx.w(j); ++a)
            for (int b = 1; b <= ctx.v(j); ++b) {
                RatFunc alpha = ctx.x(j, b) - RatFunc::variable(ctx.framing_var(j, a));
                WeightSummand s{WeightSummand::Kind::FramingHom, -1, j, a, b, alpha, {{j, b, 1}}};
                out.push_back(std::move(s));
            }
    return out;
}

int pairing(const GkloContext& ctx, const Cocharacter& lambda, const WeightSummand& s) {
    require_positive(ctx, lambda.node);
    if (lambda.index < 1 || lambda.index > ctx.v(lambda.node) || (lambda.sign != 1 && lambda.sign != -1))
        throw Error(ErrorCode::NotMinusculeContext, "cocharacter is not +-eps_{i,r}");
    const int i = lambda.node, ti = ctx.tau(i);
    int m = 0;
    for (const auto& [j, b, c] : s.x_terms)
        if (b == lambda.index) m += c * ((j == i) - (j == ti));
    return lambda.sign * m;
}

RatFunc euler_contribution(const GkloContext& ctx, const WeightSummand& s, const Cocharacter& lambda) {
    const int m = pairing(ctx, lambda, s);
    RatFunc out(1);
    for (int k = 1; k <= -m; ++k) out *= s.alpha - Rational(2 * k - 1, 2) * hb();
    return out;
}

RatFunc tangent_euler(const GkloContext& ctx, const Cocharacter& lambda) {
    require_positive(ctx, lambda.node);
    RatFunc out(1);
    // roots x_{i,a} - x_{i,b} of GL(V_i); other factors pair to zero
    const int i = lambda.node;
    for (int a = 1; a <= ctx.v(i); ++a)
        for (int b = 1; b <= ctx.v(i); ++b) {
            if (a == b) continue;
            const int n = lambda.sign * ((a == lambda.index) - (b == lambda.index));
            for (int k = 0; k < n; ++k) out *= ctx.x(i, a) - ctx.x(i, b) + RatFunc(k) * hb();
        }
    return out;
}

DiffOp minuscule_monopole(const GkloContext& ctx, int i, const RatFunc& f, Direction d) {
    require_positive(ctx, i);
    if (ctx.v(i) == 0) throw Error(ErrorCode::EmptyNode, "node " + ctx.quiver().node_id(i) + " has v = 0");
    const VarIndex t = monopole_var();
    if (f.denominator().degree_in(t) != 0) throw Error(ErrorCode::InvalidArgument, "f must be a polynomial in x");
    const auto summands = weight_summands(ctx);
    const int sign = d == Direction::Plus ? 1 : -1;
    std::vector<DiffOp> parts;
    for (int r = 1; r <= ctx.v(i); ++r) {
        Cocharacter lambda{i, r, sign};
        RatFunc at = d == Direction::Plus ? ctx.x(i, r) : ctx.x(i, r) - hb();
        RatFunc coef = f.substitute(t, at);
        for (const auto& s : summands) coef *= euler_contribution(ctx, s, lambda);
        coef /= tangent_euler(ctx, lambda);
        parts.emplace_back(coef, ShiftMonomial::unit(ctx.node_var(i, r), sign));
    }
    return DiffOp::sum(parts);
}

PsiResult psi_crosscheck(const GkloContext& ctx, int i, int r_max) {
    const auto& q = ctx.quiver();
    PsiResult res;
    res.node = i;
    int e = 1;
    for (const auto& h : q.arrows())
        if (h.source == i) e += h.fixed ? ctx.v(i) - 1 : ctx.v(h.target);
    res.sign = e % 2 == 0 ? 1 : -1;
    const bool plus = q.is_positive(i);
    const int p = plus ? i : ctx.tau(i);
    res.direction = plus ? Direction::Plus : Direction::Minus;
    const RatFunc x = RatFunc::variable(monopole_var()), h2 = Rational(1, 2) * hb();
    // Plus caps (-c_1(Q_i) - hbar/2)^r, evaluated at x_{i,r}. Minus caps
    // (c_1(S_{tau i}) + hbar/2)^r, evaluated at the S-weight x_{tau i,r} - hbar.
    res.convention = plus ? "(-x-hbar/2)^r at x_{i,r}, direction plus"
                          : "(x+hbar/2)^r at x_{tau i,r}-hbar, direction minus";
    const RatFunc base = plus ? -x - h2 : x + h2;
    for (int r = 0; r <= r_max; ++r) {
        PsiTerm term;
        term.r = r;
        if (ctx.v(p) > 0) term.psi = RatFunc(res.sign) * minuscule_monopole(ctx, p, base.pow(r), res.direction);
        DiffOp diff = term.psi - ctx.B_coeff(i, r);
        term.pass = diff.is_zero();
        if (!term.pass) {
            const auto& [m, c] = *diff.terms().begin();
            term.witness = m.to_string() + ": " + c.to_string();
            res.pass = false;
        }
        res.terms.push_back(std::move(term));
    }
    return res;
}

}  // namespace gklo
