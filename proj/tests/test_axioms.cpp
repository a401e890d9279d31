#include <gtest/gtest.h>

#include "support.hpp"

using namespace dalg;
using namespace dalg::test;

namespace {

DefinableSetDesc load(const std::string& name) {
    std::ifstream in(std::string(DALG_CORPUS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_definable_set(ss.str());
}

}  // namespace

TEST(WideFromDeep, Product) {
    auto w = wide_from_deep(load("deep.set"), 2);
    EXPECT_EQ(w.coords, (std::vector<Var>{v("x1"), v("x2"), v("y1"), v("y2")}));
    ASSERT_EQ(w.atoms.size(), 2u);
    EXPECT_EQ(w.atoms[0].to_string(), "-x1*x2 + y2 = 0");
    EXPECT_EQ(w.atoms[1].to_string(), "-x2 + y1 = 0");
    EXPECT_EQ(w.projection, (std::vector<Var>{v("x1"), v("x2")}));
    EXPECT_EQ(w.metadata.at("n"), "2");
}

TEST(WideFromDeep, Rejections) {
    auto z = load("deep.set");
    EXPECT_THROW(wide_from_deep(z, 3), DomainError);
    EXPECT_THROW(wide_from_deep(z, 0), DomainError);
}

TEST(WideFromDeep, FreshNames) {
    auto z = parse_definable_set("coords: y1, y2, z\nz = y1 + y2\n");
    auto w = wide_from_deep(z, 2);
    EXPECT_EQ(w.coords[2], v("w1"));
}

TEST(WideFromDeep, GridTransfer) {
    auto z = load("deep_ne.set");
    const std::size_t n = 3;
    auto w = wide_from_deep(z, n);
    std::vector<Rational> grid{-2, -1, 0, 1, 2};
    for (auto a : grid)
        for (auto b : grid)
            for (auto c : grid)
                for (auto e : grid) {
                    std::map<Var, Rational> zp{{v("x1"), a}, {v("x2"), b}, {v("x3"), c}, {v("z"), e}};
                    std::map<Var, Rational> wp{{v("x1"), a}, {v("x2"), b}, {v("x3"), c},
                                               {v("y1"), b}, {v("y2"), c}, {v("y3"), e}};
                    ASSERT_EQ(z.contains(zp), w.contains(wp));
                    wp[v("y1")] = b + 1;
                    ASSERT_FALSE(w.contains(wp));
                }
}

TEST(DefinableSet, ContainsWithPole) {
    auto z = parse_definable_set("coords: x, y\n1/x = y\n");
    EXPECT_TRUE(z.contains({{v("x"), 2}, {v("y"), Rational(1, 2)}}));
    EXPECT_FALSE(z.contains({{v("x"), 0}, {v("y"), 0}}));
    EXPECT_THROW(z.contains({{v("x"), 1}}), DomainError);
}

TEST(NcNormalize, AddsMissingLeaders) {
    InitialSet V(MonoidKind::commutative, 2, {th({0, 0}), th({1, 0})});
    DefinableSetDesc z;
    z.coords = {xj(th({0, 0})), xj(th({1, 0}))};
    z.atoms.push_back({R("x[d1] - x[0]^2", 2), Relation::eq});
    auto out = nc_normalize(V, z);
    EXPECT_EQ(out.free, std::vector<MonoidElem>{th({0, 0})});
    EXPECT_EQ(out.leaders.size(), 2u);
    EXPECT_TRUE(out.V.contains(th({0, 1})));
    EXPECT_EQ(out.Z.coords.size(), 3u);
    EXPECT_EQ(out.Z.projection, std::vector<Var>{xj(th({0, 0}))});
}

TEST(NcNormalize, Rejections) {
    InitialSet V(MonoidKind::commutative, 1, {th({0}), th({1}), th({2})});
    InitialSet F(MonoidKind::commutative, 1, {th({0})});
    DefinableSetDesc z;
    z.coords = {xj(th({0}))};
    EXPECT_THROW(nc_normalize(V, F, z), DomainError);
    DefinableSetDesc bad;
    bad.coords = {v("q")};
    EXPECT_THROW(nc_normalize(V, bad), DomainError);
}

TEST(DimensionCertificate, Triangular) {
    auto cert = triangular_dimension_certificate({xj(th({0, 0})), xj(th({1, 0})), xj(th({0, 1}))},
                                                 {P("x[d1] - x[0]^2", 2), P("x[d2]^2 - x[0]", 2)});
    EXPECT_EQ(cert.dimension, 1u);
    EXPECT_EQ(cert.free, std::vector<Var>{xj(th({0, 0}))});
    EXPECT_EQ(cert.order.size(), 2u);
}

TEST(DimensionCertificate, Rejections) {
    std::vector<Var> xs{v("x0"), v("x1"), v("x2")};
    EXPECT_THROW(triangular_dimension_certificate(xs, {P("x1 - x0^2"), P("x0^2 + x1^2")}), DomainError);
    EXPECT_THROW(triangular_dimension_certificate(xs, {P("x1 - x0"), P("x2 - x1")}), DomainError);
    EXPECT_THROW(triangular_dimension_certificate(xs, {P("t - 1")}), DomainError);
    EXPECT_EQ(triangular_dimension_certificate(xs, {}).dimension, 3u);
}

TEST(DimensionCertificate, FromConfiguration) {
    auto c = Configuration(2, {th({1, 0}), th({0, 1})},
                           {{th({1, 0}), P("x[d1] - x[0]", 2)}, {th({0, 1}), P("x[d2] - 2*x[0]", 2)}});
    EXPECT_EQ(triangular_dimension_certificate(c).dimension, 1u);
}
