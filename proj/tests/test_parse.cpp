#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace dalg;
using namespace dalg::test;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
std::pair<std::size_t, std::size_t> error_at(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}

}  // namespace

TEST(ParseMonoid, Forms) {
    EXPECT_EQ(parse_monoid("0", MonoidKind::commutative, 2), th({0, 0}));
    EXPECT_EQ(parse_monoid("d1^2 d2", MonoidKind::commutative, 2), th({2, 1}));
    EXPECT_EQ(parse_monoid("d2 d1", MonoidKind::free, 2), wd(2, {2, 1}));
    EXPECT_EQ(parse_monoid("d2 d1", MonoidKind::commutative, 2), th({1, 1}));
    EXPECT_THROW(parse_monoid("d3", MonoidKind::commutative, 2), ParseError);
    EXPECT_THROW(parse_monoid("e1", MonoidKind::commutative, 2), ParseError);
}

TEST(ParsePoly, Basics) {
    EXPECT_EQ(P("(x + 1)^2"), P("x^2 + 2*x + 1"));
    EXPECT_EQ(P("2/4*x"), P("1/2*x"));
    EXPECT_EQ(P("x[d1]", 1), Poly(xj(th({1}))));
    EXPECT_EQ(R("(x^2 - 1)/(x + 1)"), R("x - 1"));
    EXPECT_THROW(P("1/x"), ParseError);
    EXPECT_THROW(R("1/0"), ParseError);
    EXPECT_THROW(R("1/(x - x)"), ParseError);
}

TEST(ParsePoly, ErrorPositions) {
    EXPECT_EQ(error_at([] { P("x["); }), (std::pair<std::size_t, std::size_t>{1, 2}));
    EXPECT_EQ(error_at([] { P("x + * y"); }).second, 5u);
    EXPECT_EQ(error_at([] { P("x y"); }).second, 3u);
    EXPECT_EQ(error_at([] { parse_config("k=1\nP: d1\neta: none\np[d1] = x[d1] +\n"); }).first, 4u);
}

TEST(ParseTerm, Forms) {
    auto t = parse_term("d1(x * d1(x))");
    EXPECT_EQ(t.to_string(), "d1(x * d1(x))");
    auto u = parse_term("d2(c * d1(u)) - u^2", {"c"});
    EXPECT_EQ(u.to_string(), "d2(c * d1(u)) + -(u * u)");
    EXPECT_EQ(parse_term("-3/6").to_string(), "-1/2");
    EXPECT_EQ(parse_term("c", {"c"}).kind(), DiffTerm::Kind::parameter);
    EXPECT_THROW(parse_term("d3(x)", {}, ParseOptions{MonoidKind::commutative, 2}), ParseError);
    EXPECT_THROW(parse_term("x^0"), ParseError);
    EXPECT_THROW(parse_term("d1(x"), ParseError);
}

TEST(ParseTerm, PrintedFormReparses) {
    for (auto s : {"d1(x * d1(x))", "d2(c * d1(u)) + -(u * u)", "(x + y) * (x + -1)", "d1(d2(x) * 3)"}) {
        auto t = parse_term(s, {"c"}, ParseOptions{MonoidKind::commutative, 2});
        EXPECT_EQ(parse_term(t.to_string(), {"c"}, ParseOptions{MonoidKind::commutative, 2}).to_string(),
                  t.to_string());
    }
}

TEST(ParseDerSpec, Forms) {
    auto d = parse_derspec("eta: t -> 1; d: x -> u, y -> t*v");
    EXPECT_EQ(d.eta.at(v("t")), RatFun(1));
    EXPECT_EQ(d.images.at(v("y")), R("t*v"));
    EXPECT_EQ(parse_derspec(d.to_string()).to_string(), d.to_string());
    EXPECT_TRUE(parse_derspec("eta: none").eta.empty());
}

TEST(ParseEta, Table) {
    auto e = parse_eta_table("d1: t -> 1; d2: t -> 0", 2);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0].at(v("t")), RatFun(1));
    EXPECT_TRUE(e[1].at(v("t")).is_zero());
    EXPECT_EQ(parse_eta_table(format_eta_table(e), 2), e);
}

TEST(ParseConfig, Errors) {
    EXPECT_THROW(parse_config("P: d1\n"), ParseError);
    EXPECT_THROW(parse_config("k=1\neta: none\n"), ParseError);
    EXPECT_THROW(parse_config("k=1\nP: d1\nfoo\n"), ParseError);
    EXPECT_THROW(parse_config("k=1\nP: d1, d1\np[d1] = x[d1]\n"), ParseError);
    EXPECT_THROW(parse_config("k=1\nP: d1\np[d1] = x[0]\n"), DomainError);
}

TEST(Corpus, RoundTripIsStable) {
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(DALG_CORPUS_DIR)) {
        auto ext = e.path().extension().string();
        std::string text = slurp(e.path());
        std::string once, twice;
        if (ext == ".cfg") {
            once = format_config(parse_config(text));
            twice = format_config(parse_config(once));
            auto a = parse_config(text), b = parse_config(once);
            EXPECT_EQ(a.leaders(), b.leaders());
            EXPECT_EQ(a.polys(), b.polys());
            EXPECT_EQ(a.eta(), b.eta());
        } else if (ext == ".var") {
            once = format_variety(parse_variety(text));
            twice = format_variety(parse_variety(once));
        } else if (ext == ".set") {
            once = format_definable_set(parse_definable_set(text));
            twice = format_definable_set(parse_definable_set(once));
        } else if (ext == ".sys") {
            once = format_system(parse_system(text));
            twice = format_system(parse_system(once));
        } else {
            continue;
        }
        EXPECT_EQ(once, twice) << e.path();
        ++n;
    }
    EXPECT_GE(n, 10u);
}

TEST(ParseProperties, PrintParseIdentity) {
    Rng rng(51);
    std::vector<Var> vars{v("x"), v("t"), xj(th({1, 0})), xj(th({0, 2}))};
    for (int i = 0; i < 300; ++i) {
        RatFun r = rng.ratfun(vars, 4);
        ASSERT_EQ(R(r.to_string(), 2), r) << r.to_string();
    }
}
