#include <gtest/gtest.h>

#include "support.hpp"

using namespace dalg;
using namespace dalg::test;

namespace {

MonoidElem D1() { return th({1, 0}); }
MonoidElem D2() { return th({0, 1}); }

Configuration linear2(const std::string& q1, const std::string& q2) {
    return Configuration(2, {D1(), D2()},
                         {{D1(), P("x[d1] - (" + q1 + ")", 2)}, {D2(), P("x[d2] - (" + q2 + ")", 2)}});
}

Configuration from_corpus(const std::string& name) {
    std::ifstream in(std::string(DALG_CORPUS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace

TEST(Configuration, Accessors) {
    auto c = linear2("x[0]", "2*x[0]");
    EXPECT_EQ(c.k(), 2u);
    EXPECT_EQ(c.theta(), th({1, 1}));
    EXPECT_TRUE(c.is_minimal_leader(D1()));
    EXPECT_TRUE(c.is_leader(th({2, 3})));
    EXPECT_TRUE(c.is_free(th({0, 0})));
    EXPECT_FALSE(c.in_V(th({1, 1})));
    EXPECT_EQ(c.free_materialized(), std::vector<MonoidElem>{th({0, 0})});
}

TEST(Configuration, Rejections) {
    EXPECT_THROW(Configuration(1, {th({1}), th({2})}, {{th({1}), P("x[d1]", 1)}, {th({2}), P("x[d1^2]", 1)}}),
                 DomainError);
    EXPECT_THROW(Configuration(1, {th({0})}, {{th({0}), P("x[0]", 1)}}), DomainError);
    EXPECT_THROW(Configuration(1, {th({1})}, {{th({1}), P("x[d1] - c", 1)}}), DomainError);
    EXPECT_THROW(Configuration(1, {th({1})}, {{th({1}), P("x[0] - 1", 1)}}), DomainError);
    EXPECT_THROW(Configuration(2, {D1(), D2()}, {{D1(), P("x[d1] - x[d2]", 2)}, {D2(), P("x[d2]", 2)}}),
                 DomainError);
    EXPECT_THROW(Configuration(1, {th({2})}, {{th({2}), P("x[d1^2] - x[d1^3]", 1)}}), DomainError);
    EXPECT_THROW(Configuration(2, {D1(), D2()}, {{D1(), P("x[d1]", 2)}}), DomainError);
}

TEST(Configuration, NoncommutingParameterTablesRejected) {
    std::vector<std::map<Var, RatFun>> eta{{{v("t"), RatFun(1)}, {v("s"), RatFun(0)}},
                                           {{v("t"), RatFun(0)}, {v("s"), R("t")}}};
    EXPECT_THROW(Configuration(2, {D1(), D2()}, {{D1(), P("x[d1]", 2)}, {D2(), P("x[d2]", 2)}}, eta), DomainError);
}

TEST(Configuration, CanonicalFactorization) {
    auto c = linear2("x[0]", "2*x[0]");
    auto [w, pi] = c.canonical_factorization(th({2, 1}));
    EXPECT_EQ(pi, D1());
    EXPECT_EQ(w, wd(2, {2, 1}));
    EXPECT_THROW(c.canonical_factorization(th({0, 0})), DomainError);
}

TEST(GFunctions, LinearConfigurationMatchesClosedForm) {
    auto c = linear2("3*x[0]", "-2*x[0]");
    std::map<Var, RatFun> on_w0{{xj(D1()), R("3*x[0]", 2)}, {xj(D2()), R("-2*x[0]", 2)}};
    for (std::uint32_t m = 0; m <= 4; ++m)
        for (std::uint32_t n = 0; n <= 4; ++n) {
            if (m + n == 0) continue;
            Rational coeff = 1;
            for (std::uint32_t i = 0; i < m; ++i) coeff *= 3;
            for (std::uint32_t i = 0; i < n; ++i) coeff *= -2;
            EXPECT_EQ(canonical_f(th({m, n}), c).value.substitute(on_w0), RatFun(Poly(xj(th({0, 0}))) * Poly(coeff)));
        }
}

TEST(GFunctions, SecondOrderSingleDerivation) {
    auto c = from_corpus("single.cfg");
    auto f3 = canonical_f(th({3}), c).value;
    EXPECT_EQ(f3, R("2*x[d1]*x[d1^2] + x[d1]", 1));
    std::map<Var, RatFun> on_w0{{xj(th({2})), R("x[d1]^2 + x[0]", 1)}};
    EXPECT_EQ(f3.substitute(on_w0), R("2*x[d1]^3 + 2*x[d1]*x[0] + x[d1]", 1));
    EXPECT_EQ(canonical_f(th({1}), c).value, R("x[d1]", 1));
    EXPECT_FALSE(canonical_f(th({1}), c).witness.has_value());
    EXPECT_TRUE(canonical_f(th({4}), c).witness.has_value());
}

TEST(GFunctions, ImplicitLeader) {
    auto c = Configuration(1, {th({1})}, {{th({1}), P("x[d1]^2 - x[0]", 1)}});
    EXPECT_EQ(compute_f(wd(1, {1}), th({1}), c).value, R("1/2", 1));
}

TEST(GFunctions, ParameterDerivations) {
    auto c = from_corpus("param.cfg");
    EXPECT_EQ(compute_f(wd(2, {1}), D1(), c).value, R("t*x[d1] + x[0]", 2));
    EXPECT_EQ(compute_f(wd(2, {2}), D1(), c).value, R("t*x[d2]", 2));
    EXPECT_EQ(compute_f(wd(2, {1}), D2(), c).value, R("x[d1]", 2));
    std::map<Var, RatFun> on_w0{{xj(D1()), R("t*x[0]", 2)}, {xj(D2()), R("x[0]", 2)}};
    EXPECT_EQ(compute_f(wd(2, {1}), D1(), c).value.substitute(on_w0), R("x[0] + t^2*x[0]", 2));
    EXPECT_EQ(compute_f(wd(2, {2}), D1(), c).value.substitute(on_w0), R("t*x[0]", 2));
    EXPECT_EQ(compute_f(wd(2, {1}), D2(), c).value.substitute(on_w0), R("t*x[0]", 2));
}

TEST(GFunctions, RecursionAlongWords) {
    auto c = from_corpus("mixed.cfg");
    for (const auto& pi : c.leaders())
        for (std::size_t lv = 0; lv <= 2; ++lv)
            for (const auto& vw : words_of_length(2, lv))
                for (std::size_t lw = 1; lw <= 2; ++lw)
                    for (const auto& w : words_of_length(2, lw)) {
                        RatFun lhs = compute_f(vw, pi, c).value;
                        auto letters = w.data();
                        for (auto it = letters.rbegin(); it != letters.rend(); ++it) lhs = R_apply(*it, lhs, c);
                        ASSERT_EQ(lhs, compute_f(compose(w, vw), pi, c).value);
                    }
}

TEST(Commutation, CorpusVerdicts) {
    EXPECT_TRUE(check_local(from_corpus("commuting.cfg")).commutes);
    EXPECT_TRUE(check_local(from_corpus("riccati.cfg")).commutes);
    EXPECT_TRUE(verify_global(from_corpus("riccati.cfg"), 5).commutes);
    EXPECT_TRUE(verify_global(from_corpus("param.cfg"), 4).commutes);
}

TEST(Commutation, NoncommutingWitness) {
    auto rep = check_local(from_corpus("noncomm.cfg"));
    ASSERT_FALSE(rep.commutes);
    const auto* bad = &rep.results.front();
    for (const auto& r : rep.results)
        if (r.status != CommutationStatus::commutes) bad = &r;
    EXPECT_EQ(bad->alpha, th({1, 1}));
    EXPECT_EQ(bad->status, CommutationStatus::fails);
    ASSERT_TRUE(bad->witness.has_value());
    EXPECT_EQ(bad->witness->reduced_difference, P("x[0]^2", 2));
    ASSERT_TRUE(bad->witness->value.has_value());
    EXPECT_NE(*bad->witness->value, 0);
    std::string s = to_string(CommutationStatus::unconfirmed);
    EXPECT_EQ(s, "symbolically-nonzero, unconfirmed");
}

TEST(Commutation, ParallelMatchesSerial) {
    auto c = from_corpus("riccati.cfg");
    auto a = verify_global(c, 5, {}, 1);
    auto b = verify_global(from_corpus("riccati.cfg"), 5, {}, 3);
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) EXPECT_EQ(a.results[i].alpha, b.results[i].alpha);
}

TEST(Commutation, ProportionalFieldsCommute) {
    Rng rng(31);
    for (int i = 0; i < 15; ++i) {
        Poly q = rng.poly({xj(th({0, 0}))}, 3);
        Rational k = rng.rational();
        if (k == 0) k = 1;
        auto c = Configuration(2, {D1(), D2()},
                               {{D1(), Poly(xj(D1())) - q}, {D2(), Poly(xj(D2())) - q * Poly(k)}});
        ASSERT_TRUE(verify_global(c, 4).commutes);
    }
}

TEST(Reduction, ModuloConfiguration) {
    auto c = from_corpus("mixed.cfg");
    EXPECT_EQ(reduce_modulo_configuration(P("x[d2]^2", 2), c), P("x[0]", 2));
    EXPECT_TRUE(reduce_modulo_configuration(P("x[d1^2] - x[0]", 2), c).is_zero());
}

TEST(Realization, EulerModel) {
    auto c = linear2("x[0]", "2*x[0]");
    DiffModel m({{{v("u"), R("u")}}, {{v("u"), R("2*u")}}});
    auto rep = realize_check(c, m, R("u"), 5);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.checked, theta_up_to_degree(2, 5).size());
}

TEST(Realization, PointOutsideW0) {
    auto c = linear2("x[0]", "3*x[0]");
    DiffModel m({{{v("u"), R("u")}}, {{v("u"), R("2*u")}}});
    EXPECT_THROW(realize_check(c, m, R("u^2"), 3), DomainError);
    auto c2 = Configuration(1, {th({1})}, {{th({1}), P("x[d1]^2 - x[0]", 1)}});
    DiffModel m2({{{v("u"), RatFun(0)}}});
    EXPECT_THROW(realize_check(c2, m2, RatFun(0), 3), DomainError);
}

TEST(Realization, SecondOrderModel) {
    auto c = Configuration(1, {th({2})}, {{th({2}), P("x[d1^2] - x[0]", 1)}});
    DiffModel m({{{v("u"), R("u")}}});
    auto rep = realize_check(c, m, R("u + 1/u"), 6);
    EXPECT_TRUE(rep.ok);
}
