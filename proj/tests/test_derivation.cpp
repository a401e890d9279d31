#include <gtest/gtest.h>

#include "support.hpp"

using namespace dalg;
using namespace dalg::test;

namespace {

DerSpec spec(std::map<Var, RatFun> eta, std::map<Var, RatFun> images = {}) {
    DerSpec d;
    d.eta = std::move(eta);
    d.images = std::move(images);
    return d;
}

}  // namespace

TEST(TwistedLift, Examples) {
    Var x = v("x");
    auto a = twisted_lift(R("x^2"), spec({}));
    EXPECT_EQ(a.lift, R("2*x*y_x"));
    EXPECT_TRUE(a.coeff_only.is_zero());
    auto b = twisted_lift(R("c*x"), spec({{v("c"), RatFun(1)}}));
    EXPECT_EQ(b.lift, R("x + c*y_x"));
    EXPECT_EQ(b.coeff_only, R("x"));
    auto c = twisted_lift(R("x^2/t"), spec({{v("t"), RatFun(1)}}));
    EXPECT_EQ(c.lift, R("-x^2/t^2 + 2*x/t*y_x"));
    EXPECT_EQ(lift_var(x), v("y_x"));
}

TEST(TwistedLift, UndeclaredParameterWithCoords) {
    EXPECT_THROW(twisted_lift(R("x^2 - c"), spec({}), std::set<Var>{v("x")}), DomainError);
}

TEST(ApplyDerivation, Examples) {
    EXPECT_EQ(apply_derivation(R("x^2"), spec({}, {{v("x"), RatFun(1)}})), R("2*x"));
    EXPECT_EQ(apply_derivation(R("x*y"), spec({}, {{v("x"), R("u")}, {v("y"), R("w")}})), R("u*y + x*w"));
    EXPECT_EQ(apply_derivation(R("x^2/t"), spec({{v("t"), RatFun(1)}}, {{v("x"), R("u")}})), R("-x^2/t^2 + 2*x*u/t"));
    EXPECT_THROW(apply_derivation(R("x"), spec({})), DomainError);
}

TEST(ImplicitDelta, Examples) {
    EXPECT_EQ(implicit_delta(P("x^2 - t"), v("x"), spec({{v("t"), RatFun(1)}})), R("1/(2*x)"));
    EXPECT_EQ(implicit_delta(P("x - y"), v("x"), spec({}, {{v("y"), R("w")}})), R("w"));
    EXPECT_EQ(implicit_delta(P("x*y - 1"), v("x"), spec({}, {{v("y"), R("w")}})), R("-x*w/y"));
}

TEST(Tower, SquareRootOfT) {
    Tower base({{v("t"), RatFun(1)}});
    Tower t = extend_to_algebraic(base, P("c^2 - t"), v("c"));
    EXPECT_TRUE(t.field().equal(*t.generator_derivative(v("c")), R("1/(2*c)")));
    EXPECT_TRUE(t.field().equal(*t.generator_derivative(v("c")), R("c/(2*t)")));
}

TEST(Tower, LinearMinpolyIsIdentityCase) {
    Tower base({{v("t"), RatFun(1)}});
    Tower t = extend_to_algebraic(base, P("c - t"), v("c"));
    EXPECT_TRUE(t.field().equal(*t.generator_derivative(v("c")), RatFun(1)));
}

TEST(Tower, EulerOperator) {
    Tower base({{v("u"), R("u")}});
    Tower t = extend_to_algebraic(base, P("c^2 - u"), v("c"));
    EXPECT_TRUE(t.field().equal(*t.generator_derivative(v("c")), R("c/2")));
    EXPECT_TRUE(t.field().equal(*t.generator_derivative(v("c")), R("u/(2*c)")));
}

TEST(Tower, ArithmeticAndInverse) {
    TowerField f = TowerField({v("t")}).adjoin(P("c^2 - t"), v("c"));
    EXPECT_TRUE(f.is_zero(R("c^2 - t")));
    EXPECT_TRUE(f.equal(f.inverse(R("c")), R("c/t")));
    EXPECT_TRUE(f.equal(f.inverse(R("c + 1")) * R("c + 1"), RatFun(1)));
    EXPECT_TRUE(f.equal(f.normalize(R("c^3")), R("t*c")));
    EXPECT_THROW(f.inverse(R("c^2 - t")), PoleError);
}

TEST(Tower, VanishingSeparantRejected) {
    Tower base({{v("t"), RatFun(1)}});
    EXPECT_THROW(extend_to_algebraic(base, P("c^2"), v("c")), DomainError);
}

TEST(Tower, ReducibleStageDetectedOnInverse) {
    TowerField f = TowerField({v("t")}).adjoin(P("c^2 - 1"), v("c"));
    EXPECT_THROW(f.inverse(R("c - 1")), DomainError);
}

TEST(DerivationProperties, LeibnizAdditivityAndSpecialization) {
    Rng rng(21);
    std::vector<Var> xs{v("x1"), v("x2"), v("x3")};
    std::vector<Var> all{v("x1"), v("x2"), v("x3"), v("t")};
    for (int i = 0; i < 200; ++i) {
        DerSpec d;
        d.eta[v("t")] = RatFun(rng.poly({v("t")}, 2, 2));
        for (auto x : xs) d.images[x] = RatFun(rng.poly(all, 2, 3));
        RatFun p = RatFun(rng.poly(all, 4)), q = rng.ratfun(all, 3);
        ASSERT_EQ(apply_derivation(p * q, d), apply_derivation(p, d) * q + p * apply_derivation(q, d));
        ASSERT_EQ(apply_derivation(p + q, d), apply_derivation(p, d) + apply_derivation(q, d));
        auto tl = twisted_lift(q, d);
        std::map<Var, RatFun> sub;
        for (auto x : xs) sub[lift_var(x)] = d.images[x];
        ASSERT_EQ(tl.lift.substitute(sub), apply_derivation(q, d));
    }
}

TEST(DerivationProperties, TowerExtensionAnnihilatesMinpoly) {
    Rng rng(22);
    for (int i = 0; i < 20; ++i) {
        Tower base({{v("t"), RatFun(1)}});
        Poly m = P("c^2") * Poly(Rational(rng.integer(1, 3))) + rng.poly({v("t")}, 2) * Poly(v("c")) +
                 rng.poly({v("t")}, 2) + Poly(v("t"));
        Tower t;
        try {
            t = extend_to_algebraic(base, m, v("c"));
        } catch (const DomainError&) {
            continue;
        }
        DerSpec d = t.derivation();
        ASSERT_TRUE(t.field().is_zero(apply_derivation(RatFun(m), d)));
        DerSpec base_d;
        base_d.eta = {{v("t"), RatFun(1)}};
        ASSERT_TRUE(t.field().equal(implicit_delta(m, v("c"), base_d), *t.generator_derivative(v("c"))));
    }
}
