#include <gtest/gtest.h>

#include <random>

#include "gklo/error.hpp"
#include "gklo/ratfunc.hpp"

using namespace gklo;

namespace {

RatFunc V(const char* n) { return RatFunc::variable(n); }
VarIndex I(const char* n) { return intern_var(n); }

// numerator(a) * denominator(b) == numerator(b) * denominator(a)
bool cross_equal(const RatFunc& a, const RatFunc& b) {
    return a.numerator() * b.denominator() == b.numerator() * a.denominator();
}

RatFunc random_linear(std::mt19937_64& rng, const std::vector<const char*>& names) {
    std::uniform_int_distribution<int> c(-3, 3);
    RatFunc r(c(rng));
    for (auto* n : names) r += RatFunc(c(rng)) * V(n);
    return r;
}

RatFunc random_ratfunc(std::mt19937_64& rng) {
    std::vector<const char*> names{"a", "b", "hbar"};
    RatFunc num(1), den(1);
    int nf = 1 + int(rng() % 3), df = int(rng() % 3);
    for (int k = 0; k < nf; ++k) num *= random_linear(rng, names);
    for (int k = 0; k < df; ++k) {
        RatFunc l = random_linear(rng, names);
        if (!l.is_zero()) den *= l;
    }
    num += random_linear(rng, names);
    return num / den;
}

// Random linear form in the symbols, guaranteed nonzero.
Poly random_root(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(-4, 4);
    for (;;) {
        Poly p = Poly(c(rng)) + Poly::variable(I("a")) * Rational(c(rng)) + Poly::variable(I("b")) * Rational(c(rng)) +
                 Poly::variable(I("hbar")) * Rational(c(rng), 2);
        if (!p.is_zero()) return p;
    }
}

// f(z) = N(z) / prod (z - r_k) with distinct symbolic roots r_k.
RatFunc random_simple_pole_function(std::mt19937_64& rng, VarIndex z, int poles, int num_degree, bool avoid_zero) {
    std::vector<Poly> roots;
    while (static_cast<int>(roots.size()) < poles) {
        Poly r = random_root(rng);
        if (avoid_zero && r.is_constant()) continue;
        bool dup = false;
        for (const auto& s : roots) dup |= (s == r);
        if (!dup) roots.push_back(r);
    }
    RatFunc f(1);
    for (const auto& r : roots) f /= RatFunc(Poly::variable(z) - r);
    RatFunc num;
    for (int k = 0; k <= num_degree; ++k) num += RatFunc(random_root(rng)) * RatFunc(Poly::variable(z)).pow(k);
    if (num.is_zero()) num = RatFunc(1);
    return num * f;
}

}  // namespace

TEST(RatFunc, SelfDifferenceIsZero) {
    RatFunc x = V("x_{1,1}"), h = V("hbar");
    RatFunc f = x / (x - h);
    RatFunc d = f - f;
    EXPECT_TRUE(d.is_zero());
    EXPECT_TRUE(d.numerator().is_zero());
    EXPECT_TRUE(d.denominator().is_one());
}

TEST(RatFunc, SumOfSimpleFractions) {
    RatFunc u = V("u"), a = V("a");
    RatFunc s = RatFunc(1) / (u - a) + RatFunc(1) / (u + a);
    RatFunc expected = RatFunc(2) * u / (u * u - a * a);
    EXPECT_TRUE(cross_equal(s, expected));
    EXPECT_EQ(s, expected);
    EXPECT_EQ(s.denominator(), (u * u - a * a).numerator());
    EXPECT_EQ(s.numerator(), (RatFunc(2) * u).numerator());
}

TEST(RatFunc, CommonFactorCancels) {
    RatFunc x = V("x_{1,1}"), h = V("hbar");
    RatFunc f = RatFunc((x * x - h * h).numerator()) / (x - h);
    EXPECT_EQ(f.numerator(), (x + h).numerator());
    EXPECT_TRUE(f.denominator().is_one());
}

TEST(RatFunc, DivisionByZeroThrows) {
    RatFunc x = V("x_{1,1}");
    EXPECT_THROW(x / (x - x), Error);
}

TEST(RatFunc, CanonicalFormIsUnique) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        RatFunc a = random_ratfunc(rng), h = random_ratfunc(rng);
        if (h.is_zero()) continue;
        RatFunc b = (a * h) / h;  // same function, different construction
        EXPECT_TRUE((a - b).is_zero());
        EXPECT_EQ(a.numerator(), b.numerator());
        EXPECT_EQ(a.denominator(), b.denominator());
        EXPECT_EQ(a.to_string(), b.to_string());
        RatFunc c = random_ratfunc(rng);
        EXPECT_EQ((a - c).is_zero(), cross_equal(a, c));
        // reduced form: numerator and denominator coprime, denominator monic
        Poly g = gcd(a.numerator(), a.denominator());
        EXPECT_TRUE(g.is_one() || a.is_zero());
        EXPECT_EQ(a.denominator().leading().c, 1);
    }
}

TEST(RatFunc, ShiftExamples) {
    VarIndex x1 = I("x_{1,1}"), x2 = I("x_{1,2}");
    RatFunc x = V("x_{1,1}"), y = V("x_{1,2}"), h = V("hbar"), u = V("u");
    EXPECT_EQ(x.shift({{x1, 1}}), x + h);
    EXPECT_EQ((RatFunc(1) / (u - x)).shift({{x1, -1}}), RatFunc(1) / (u - x + h));
    EXPECT_EQ((x * y).shift({{x1, 2}}), (x + RatFunc(2) * h) * y);
    EXPECT_THROW(x.shift({{I("u"), 1}}), Error);
    (void)x2;
}

TEST(RatFunc, ShiftIsRingHomomorphism) {
    std::mt19937_64 rng(22);
    VarIndex a = I("a");
    (void)a;
    // shifts act on node variables only; build triples in node variables
    RatFunc x = V("x_{1,1}"), y = V("x_{1,2}"), h = V("hbar");
    Shift s{{I("x_{1,1}"), 1}, {I("x_{1,2}"), -2}};
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> c(-3, 3);
        auto rnd = [&] {
            RatFunc n = RatFunc(c(rng)) * x + RatFunc(c(rng)) * y + RatFunc(c(rng)) * h + RatFunc(1);
            RatFunc d = RatFunc(c(rng)) * x + RatFunc(c(rng)) * y + RatFunc(long(1 + rng() % 3)) * h;
            return d.is_zero() ? n : n / d;
        };
        RatFunc p = rnd(), q = rnd(), r = rnd();
        EXPECT_EQ((p * q + r).shift(s), p.shift(s) * q.shift(s) + r.shift(s));
        if (!q.is_zero()) EXPECT_EQ((p / q).shift(s), p.shift(s) / q.shift(s));
    }
}

TEST(RatFunc, LaurentExamples) {
    VarIndex u = I("u");
    RatFunc U = V("u"), a = V("a"), x = V("x_{1,1}"), h = V("hbar");
    int ks1[] = {-1, -2, -3};
    auto c1 = laurent_coefficients(RatFunc(1) / (U - a), u, ks1);
    EXPECT_EQ(c1[0], RatFunc(1));
    EXPECT_EQ(c1[1], a);
    EXPECT_EQ(c1[2], a * a);
    auto c2 = laurent_coefficients(RatFunc(1) / ((U + x) * (U + x) - h * h / RatFunc(4)), u, ks1);
    EXPECT_EQ(c2[0], RatFunc(0));
    EXPECT_EQ(c2[1], RatFunc(1));
    EXPECT_EQ(c2[2], RatFunc(-2) * x);
    int ks3[] = {1, 0, -1};
    auto c3 = laurent_coefficients(U * U / (U - a), u, ks3);
    EXPECT_EQ(c3[0], RatFunc(1));
    EXPECT_EQ(c3[1], a);
    EXPECT_EQ(c3[2], a * a);
}

TEST(RatFunc, TruncateExamples) {
    VarIndex z = I("z");
    RatFunc Z = V("z"), a = V("a"), b = V("b");
    RatFunc f1 = RatFunc(1) / (Z - a);
    EXPECT_EQ(truncate_proper(f1, z), f1);
    EXPECT_EQ(truncate_proper(Z * Z / (Z - a), z), a * a / (Z - a));
    RatFunc f3 = Z / ((Z - a) * (Z - b));
    RatFunc expected = a / ((a - b) * (Z - a)) + b / ((b - a) * (Z - b));
    EXPECT_TRUE(cross_equal(truncate_proper(f3, z), expected));
    EXPECT_THROW(truncate_proper(RatFunc(1) / ((Z - a) * (Z - a)), z), Error);
    EXPECT_THROW(truncate_proper(RatFunc(1) / (Z * Z - a), z), Error);
    EXPECT_TRUE(truncate_proper(Z * Z + a, z).is_zero());
}

TEST(RatFunc, TruncateMatchesSeriesOnRandomFunctions) {
    std::mt19937_64 rng(23);
    VarIndex z = I("z");
    std::vector<int> neg;
    for (int k = -1; k >= -10; --k) neg.push_back(k);
    for (int trial = 0; trial < 100; ++trial) {
        int poles = 1 + trial % 4;
        RatFunc f = random_simple_pole_function(rng, z, poles, int(rng() % (poles + 2)), false);
        RatFunc t = truncate_proper(f, z);
        auto cf = laurent_coefficients(f, z, neg), ct = laurent_coefficients(t, z, neg);
        for (std::size_t k = 0; k < neg.size(); ++k) EXPECT_EQ(cf[k], ct[k]) << "degree " << neg[k];
        EXPECT_EQ(truncate_proper(t, z), t);
        auto rest = laurent_coefficients(f - t, z, neg);
        for (const auto& c : rest) EXPECT_TRUE(c.is_zero());
        EXPECT_TRUE(laurent_coefficient(t, z, 0).is_zero());
    }
}

TEST(RatFunc, TruncationDividedByZIdentity) {
    std::mt19937_64 rng(24);
    VarIndex z = I("z"), u = I("u"), v = I("v");
    RatFunc U = V("u"), Vv = V("v");
    for (int trial = 0; trial < 50; ++trial) {
        int poles = 1 + trial % 3;
        RatFunc f = random_simple_pole_function(rng, z, poles, int(rng() % (poles + 2)), true);
        RatFunc ft = f / V("z");
        Poly zu = Poly::variable(u), zv = -Poly::variable(v);
        RatFunc lhs = U * truncate_proper(ft.substitute(z, zu), u) + Vv * truncate_proper(ft.substitute(z, zv), v);
        RatFunc rhs = truncate_proper(f.substitute(z, zu), u) - truncate_proper(f.substitute(z, zv), v);
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(RatFunc, BernoulliMatchesGeneratingFunction) {
    // t e^{tx} / (e^t - 1) = sum Ber_n(x) t^n / n!, expanded as power series
    // in t with polynomial coefficients in x.
    const unsigned N = 12;
    VarIndex x = I("bx");
    std::vector<Rational> inv_series(N + 1);  // t/(e^t - 1) = 1 / sum t^k/(k+1)!
    std::vector<Rational> d(N + 1);
    Rational fact = 1;
    for (unsigned k = 0; k <= N; ++k) {
        fact *= Rational(k + 1);
        d[k] = 1 / fact;
    }
    for (unsigned k = 0; k <= N; ++k) {
        Rational s = k == 0 ? Rational(1) : Rational(0);
        for (unsigned j = 1; j <= k; ++j) s -= d[j] * inv_series[k - j];
        inv_series[k] = s / d[0];
    }
    Rational kfact = 1;
    for (unsigned n = 0; n <= N; ++n) {
        if (n > 0) kfact *= Rational(n);
        // coefficient of t^n: sum_j inv[n-j] * x^j / j!
        Poly coeff;
        Rational jf = 1;
        for (unsigned j = 0; j <= n; ++j) {
            if (j > 0) jf *= Rational(j);
            Monomial m;
            m.exp[x] = static_cast<std::uint8_t>(j);
            coeff += Poly::monomial(m, inv_series[n - j] / jf);
        }
        EXPECT_EQ(bernoulli_polynomial(n, x), coeff * kfact) << "n=" << n;
    }
    Poly X = Poly::variable(x);
    EXPECT_EQ(bernoulli_polynomial(0, x), Poly(1));
    EXPECT_EQ(bernoulli_polynomial(1, x), X - Poly(Rational(1, 2)));
    EXPECT_EQ(bernoulli_polynomial(2, x), X * X - X + Poly(Rational(1, 6)));
}

TEST(RatFunc, BernoulliDifferenceIdentity) {
    VarIndex x = I("bx");
    Poly X = Poly::variable(x);
    for (unsigned n = 1; n <= 12; ++n) {
        Poly b = bernoulli_polynomial(n, x);
        EXPECT_EQ(b.substitute(x, X + Poly(1)) - b, X.pow(n - 1) * Rational(n)) << "n=" << n;
    }
}

TEST(RatFunc, Evaluation) {
    VarIndex x = I("x_{1,1}"), h = hbar_var();
    RatFunc X = V("x_{1,1}"), H = V("hbar");
    EXPECT_EQ((X + H) / X, (X + H) / X);
    EXPECT_EQ(((X + H) / X).evaluate({{x, Rational(2)}, {h, Rational(1)}}), Rational(3, 2));
    try {
        (RatFunc(1) / (X - H)).evaluate({{x, Rational(1)}, {h, Rational(1)}});
        FAIL() << "expected PoleHit";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PoleHit);
    }
    PrimeField F(kMersenne61);
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        RatFunc f = random_ratfunc(rng);
        FpPoint pt{};
        for (auto& v : pt) v = rng() % kMersenne61;
        try {
            EXPECT_EQ((f - f).evaluate(F, pt), 0u);
            std::uint64_t a = f.evaluate(F, pt), b = (f * RatFunc(2)).evaluate(F, pt);
            EXPECT_EQ(F.add(a, a), b);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::PoleHit);
        }
    }
}

TEST(RatFunc, TextRoundTrip) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 40; ++trial) {
        RatFunc f = random_ratfunc(rng);
        std::string s = f.to_string();
        RatFunc g = parse_ratfunc(s);
        EXPECT_EQ(g, f) << s;
        EXPECT_EQ(g.to_string(), s);
    }
    EXPECT_EQ(parse_ratfunc("1/((u+x_{1,1})^2 - hbar^2/4)"),
              RatFunc(1) / ((V("u") + V("x_{1,1}")).pow(2) - V("hbar").pow(2) / RatFunc(4)));
    EXPECT_THROW(parse_ratfunc("(x +"), Error);
    EXPECT_THROW(parse_ratfunc("x $ y"), Error);
}

TEST(RatFuncPrinting, IndependentOfInterningOrder) {
    // interned in reverse of printing order
    auto w = RatFunc::variable("w_{7,1}"), b = RatFunc::variable("x_{7,10}"), a = RatFunc::variable("x_{7,2}");
    auto h = RatFunc::variable("hbar"), u = RatFunc::variable("u");
    EXPECT_EQ((w + b + a + h).to_string(), "hbar + x_{7,2} + x_{7,10} + w_{7,1}");
    EXPECT_EQ((RatFunc(1) / (RatFunc(2) * w - a)).to_string(), "-1/((x_{7,2} - 2*w_{7,1}))");
    auto f = (a * a - Rational(1, 3) * u * w) / ((u + b - h) * (a - b) * (a - b));
    auto s = f.to_string();
    EXPECT_EQ(s, "(1/3*u*w_{7,1} - x_{7,2}^2)/((x_{7,2} - x_{7,10})^2*(hbar - u - x_{7,10}))") << s;
    EXPECT_EQ(parse_ratfunc(s), f);
    EXPECT_EQ(parse_ratfunc(s).to_string(), s);
}
