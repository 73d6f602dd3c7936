#include <gtest/gtest.h>

#include "gklo/monopole.hpp"

using namespace gklo;

namespace {

RatFunc var(const std::string& n) { return RatFunc::variable(n); }
RatFunc h() { return RatFunc::variable(hbar_var()); }
RatFunc h2() { return Rational(1, 2) * h(); }

struct Fixture {
    InvolutiveQuiver q;
    std::unique_ptr<GkloContext> ctx;
};

Fixture make(const RawQuiver& raw, std::vector<int> v, std::vector<int> w, Corruption c = Corruption::None) {
    Fixture f{validate_quiver(raw), nullptr};
    f.ctx = std::make_unique<GkloContext>(f.q, DimensionData{std::move(v), std::move(w)}, c);
    return f;
}

std::vector<RawQuiver> matrix_quivers() { return {edgeless_pair(), diagonal_a(1), diagonal_a(2), aiii(1), aiii(2)}; }

int sgn_pow(int e) { return e % 2 == 0 ? 1 : -1; }

// The plus-direction display, transcribed factor by factor.
DiffOp plus_display(const GkloContext& c, int i, const RatFunc& f) {
    const auto& q = c.quiver();
    const int ti = q.tau(i);
    std::vector<DiffOp> parts;
    for (int r = 1; r <= c.v(i); ++r) {
        RatFunc xr = c.x(i, r);
        RatFunc coef = f.substitute(monopole_var(), xr);
        for (const auto& a : q.arrows()) {
            if (a.source != i) continue;
            if (a.fixed)
                coef *= RatFunc(sgn_pow(c.v(i) - 1)) * c.V_r(ti, r, xr + h2());
            else
                coef *= RatFunc(sgn_pow(c.v(a.target))) * c.V(a.target, xr + h2());
        }
        coef *= c.W(ti, c.x(ti, r) - h2()) / c.V_r(i, r, xr);
        parts.emplace_back(coef, c.d(i, r));
    }
    return DiffOp::sum(parts);
}

// The minus-direction display, transcribed factor by factor.
DiffOp minus_display(const GkloContext& c, int i, const RatFunc& f) {
    const auto& q = c.quiver();
    const int ti = q.tau(i);
    std::vector<DiffOp> parts;
    for (int r = 1; r <= c.v(i); ++r) {
        RatFunc xr = c.x(i, r), xt = c.x(ti, r);
        RatFunc coef = f.substitute(monopole_var(), xr - h());
        for (const auto& a : q.arrows()) {
            if (!a.fixed && a.source == ti) coef *= RatFunc(sgn_pow(c.v(a.target))) * c.V(a.target, xt + h2());
            if (a.fixed && a.target == i) coef *= RatFunc(sgn_pow(c.v(i) - 1)) * c.V_r(i, r, xt + h2());
        }
        coef *= c.W(i, xr - h2()) / (RatFunc(sgn_pow(c.v(i) - 1)) * c.V_r(i, r, xr));
        parts.emplace_back(coef, ShiftMonomial(c.d(i, r)).inverse());
    }
    return DiffOp::sum(parts);
}

}  // namespace

TEST(Monopole, EulerContributionExamples) {
    auto e = make(edgeless_pair(), {1, 1}, {0, 1});
    const auto& c = *e.ctx;
    Cocharacter lam{0, 1, 1};
    int framing = 0;
    for (const auto& s : weight_summands(c)) {
        ASSERT_EQ(s.kind, WeightSummand::Kind::FramingHom);
        ASSERT_EQ(s.node, 1);
        EXPECT_EQ(euler_contribution(c, s, lam), -var("w_{2,1}") + c.x(1, 1) - h2());
        EXPECT_EQ(euler_contribution(c, s, lam), -var("w_{2,1}") - var("x_{1,1}") - h2());
        ++framing;
    }
    EXPECT_EQ(framing, 1);

    auto a = make(aiii(1), {2, 2}, {0, 0});
    int wedges = 0;
    for (const auto& s : weight_summands(*a.ctx)) {
        ASSERT_EQ(s.kind, WeightSummand::Kind::AltWedge);
        EXPECT_EQ(euler_contribution(*a.ctx, s, Cocharacter{0, 1, 1}), -var("x_{1,2}") - var("x_{1,1}") - h2());
        ++wedges;
    }
    EXPECT_EQ(wedges, 1);

    auto d = make(aiii(2), {1, 1, 1, 1}, {0, 0, 0, 0});
    for (const auto& s : weight_summands(*d.ctx))
        if (pairing(*d.ctx, Cocharacter{0, 1, 1}, s) == 0)
            EXPECT_EQ(euler_contribution(*d.ctx, s, Cocharacter{0, 1, 1}), RatFunc(1));
    EXPECT_THROW(pairing(*d.ctx, Cocharacter{3, 1, 1}, weight_summands(*d.ctx).front()), Error);
    EXPECT_THROW(pairing(*d.ctx, Cocharacter{0, 2, 1}, weight_summands(*d.ctx).front()), Error);
}

TEST(Monopole, SummandCounts) {
    // AIII n=2, v=2, w=1: h1 (Q1+) 4 + h2 fixed 1 + framing 4*2
    auto a = make(aiii(2), {2, 2, 2, 2}, {1, 1, 1, 1});
    auto s = weight_summands(*a.ctx);
    int counts[3] = {0, 0, 0};
    for (const auto& x : s) ++counts[static_cast<int>(x.kind)];
    EXPECT_EQ(counts[0], 4);
    EXPECT_EQ(counts[1], 1);
    EXPECT_EQ(counts[2], 8);
}

TEST(Monopole, OppositeDirectionsContributeOnce) {
    for (auto raw : matrix_quivers())
        for (int v = 1; v <= 2; ++v)
            for (int w = 0; w <= 2; ++w) {
                auto q = validate_quiver(raw);
                const auto n = static_cast<std::size_t>(q.node_count());
                auto f = make(raw, std::vector<int>(n, v), std::vector<int>(n, w));
                for (int i : q.positive_nodes())
                    for (int r = 1; r <= v; ++r)
                        for (const auto& s : weight_summands(*f.ctx)) {
                            Cocharacter lp{i, r, 1}, lm{i, r, -1};
                            const int m = pairing(*f.ctx, lp, s);
                            EXPECT_EQ(pairing(*f.ctx, lm, s), -m);
                            if (m == 0) continue;
                            const bool plus = !(euler_contribution(*f.ctx, s, lp) == RatFunc(1));
                            const bool minus = !(euler_contribution(*f.ctx, s, lm) == RatFunc(1));
                            EXPECT_NE(plus, minus) << s.to_string(*f.ctx);
                        }
            }
}

TEST(Monopole, TangentEulerClass) {
    auto f = make(aiii(2), {2, 2, 2, 2}, {0, 0, 0, 0});
    const auto& c = *f.ctx;
    for (int i : c.quiver().positive_nodes())
        for (int r = 1; r <= 2; ++r) {
            EXPECT_EQ(tangent_euler(c, Cocharacter{i, r, 1}), c.V_r(i, r, c.x(i, r)));
            EXPECT_EQ(tangent_euler(c, Cocharacter{i, r, -1}), RatFunc(-1) * c.V_r(i, r, c.x(i, r)));
        }
}

TEST(Monopole, MinusculeExamples) {
    auto e = make(edgeless_pair(), {1, 1}, {0, 0});
    auto d11 = ShiftMonomial::unit(e.ctx->node_var(0, 1));
    EXPECT_EQ(minuscule_monopole(*e.ctx, 0, RatFunc(1), Direction::Plus), DiffOp(RatFunc(1), d11));
    EXPECT_EQ(minuscule_monopole(*e.ctx, 0, RatFunc(1), Direction::Minus), DiffOp(RatFunc(1), d11.inverse()));
    auto a = make(aiii(1), {1, 1}, {0, 0});
    EXPECT_EQ(minuscule_monopole(*a.ctx, 0, RatFunc(1), Direction::Plus),
              DiffOp(RatFunc(1), ShiftMonomial::unit(a.ctx->node_var(0, 1))));

    EXPECT_THROW(minuscule_monopole(*a.ctx, 1, RatFunc(1), Direction::Plus), Error);
    auto z = make(edgeless_pair(), {0, 0}, {1, 1});
    try {
        minuscule_monopole(*z.ctx, 0, RatFunc(1), Direction::Plus);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::EmptyNode);
    }
    EXPECT_THROW(minuscule_monopole(*a.ctx, 0, RatFunc::variable(monopole_var()).inverse(), Direction::Plus), Error);
}

TEST(Monopole, MatchesDisplayedFormulas) {
    const RatFunc x = RatFunc::variable(monopole_var());
    const RatFunc f = x * x + h() * x - RatFunc(Rational(3, 2));
    for (auto raw : matrix_quivers())
        for (int v = 1; v <= 2; ++v)
            for (int w = 0; w <= 2; ++w) {
                auto q = validate_quiver(raw);
                const auto n = static_cast<std::size_t>(q.node_count());
                auto fx = make(raw, std::vector<int>(n, v), std::vector<int>(n, w));
                for (int i : q.positive_nodes()) {
                    EXPECT_EQ(minuscule_monopole(*fx.ctx, i, f, Direction::Plus), plus_display(*fx.ctx, i, f));
                    EXPECT_EQ(minuscule_monopole(*fx.ctx, i, f, Direction::Minus), minus_display(*fx.ctx, i, f));
                }
            }
}

TEST(Monopole, DenominatorsAreTangentWeights) {
    for (auto raw : matrix_quivers()) {
        auto q = validate_quiver(raw);
        const auto n = static_cast<std::size_t>(q.node_count());
        auto fx = make(raw, std::vector<int>(n, 2), std::vector<int>(n, 1));
        const auto& c = *fx.ctx;
        for (int i : q.positive_nodes()) {
            DiffOp m = minuscule_monopole(c, i, RatFunc(1), Direction::Plus);
            for (int r = 1; r <= 2; ++r) {
                RatFunc coef = m.coefficient(c.d(i, r));
                EXPECT_TRUE((coef * c.V_r(i, r, c.x(i, r))).denominator().is_constant());
                EXPECT_FALSE(coef.denominator().is_constant());
            }
        }
    }
}

TEST(Monopole, PsiCrosscheckExamples) {
    auto e = make(edgeless_pair(), {1, 1}, {0, 0});
    auto res = psi_crosscheck(*e.ctx, 0, 0);
    EXPECT_TRUE(res.pass);
    EXPECT_EQ(res.sign, -1);
    EXPECT_EQ(res.terms[0].psi, DiffOp(RatFunc(-1), ShiftMonomial::unit(e.ctx->node_var(0, 1))));

    auto a = make(aiii(1), {1, 1}, {0, 0});
    EXPECT_TRUE(psi_crosscheck(*a.ctx, 0, 2).pass);
    auto b = make(aiii(2), {2, 2, 2, 2}, {1, 1, 1, 1});
    for (int i = 0; i < 4; ++i) {
        auto r = psi_crosscheck(*b.ctx, i, 2);
        EXPECT_TRUE(r.pass) << i;
        EXPECT_EQ(r.direction, b.q.is_positive(i) ? Direction::Plus : Direction::Minus);
    }
}

TEST(Monopole, PsiCrosscheckDetectsCorruption) {
    auto a = make(aiii(1), {1, 1}, {1, 1}, Corruption::BizFraming);
    auto r = psi_crosscheck(*a.ctx, 0, 1);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.terms[0].witness.empty());
}
