#ifndef DALG_PROLONG_HPP
#define DALG_PROLONG_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/linear.hpp"
#include "dalg/tower.hpp"

namespace dalg {

/// W = V(gens) in the coordinates `coords`. The caller asserts that gens
/// generate the ideal of W; no ideal computation happens here.
struct VarietyPresentation {
    std::vector<Var> coords;
    std::vector<Poly> gens;

    std::size_t n() const noexcept { return coords.size(); }
};

/// The twisted tangent bundle: equations[i] is the twisted lift of gens[i],
/// affine-linear in `ys`.
struct Prolongation {
    VarietyPresentation source;
    DerSpec dspec;
    std::vector<Var> ys;
    std::vector<RatFun> equations;
};

inline Prolongation twisted_bundle(const VarietyPresentation& v, const DerSpec& d) {
    Prolongation out{v, d, {}, {}};
    std::set<Var> coords(v.coords.begin(), v.coords.end());
    if (coords.size() != v.coords.size()) detail::domain_fail("duplicate coordinate");
    for (auto x : v.coords) {
        if (d.is_parameter(x)) detail::domain_fail(x.to_string() + " is both a coordinate and a parameter");
        out.ys.push_back(lift_var(x));
    }
    for (const auto& p : v.gens) out.equations.push_back(twisted_lift(RatFun(p), d, coords).lift);
    return out;
}

struct TowerFieldPolicy {
    const TowerField* field;
    RatFun normalize(const RatFun& r) const { return field->normalize(r); }
    bool is_zero(const RatFun& r) const { return field->is_zero(r); }
};

namespace detail {

template <class Field>
std::map<Var, RatFun> point_map(const VarietyPresentation& v, const std::vector<RatFun>& a, const Field& field) {
    if (a.size() != v.n()) domain_fail("point has " + std::to_string(a.size()) + " coordinates, expected " + std::to_string(v.n()));
    std::map<Var, RatFun> sigma;
    for (std::size_t i = 0; i < a.size(); ++i) sigma[v.coords[i]] = field.normalize(a[i]);
    for (std::size_t i = 0; i < v.gens.size(); ++i)
        if (!field.is_zero(substitute_poly(v.gens[i], sigma)))
            domain_fail("point is not on the variety: generator " + std::to_string(i + 1) + " does not vanish");
    return sigma;
}

}  // namespace detail

/// tau^d_a = { y : p_i^[d](a, y) = 0 for all i }.
template <class Field = RationalFunctionField>
AffineSpace tangent_space_at(const VarietyPresentation& v, const DerSpec& d, const std::vector<RatFun>& a,
                             const Field& field = {}) {
    auto sigma = detail::point_map(v, a, field);
    std::set<Var> coords(v.coords.begin(), v.coords.end());
    std::vector<std::vector<RatFun>> rows;
    std::vector<RatFun> rhs;
    for (const auto& p : v.gens) {
        auto tl = twisted_lift(RatFun(p), d, coords);
        std::vector<RatFun> row;
        for (auto x : v.coords) row.push_back(field.normalize(substitute_poly(p.derivative(x), sigma)));
        rows.push_back(std::move(row));
        rhs.push_back(field.normalize(tl.coeff_only.substitute(sigma)));
    }
    if (rows.empty()) {
        AffineSpace full;
        full.n = v.n();
        full.particular = std::vector<RatFun>(v.n());
        for (std::size_t j = 0; j < v.n(); ++j) {
            std::vector<RatFun> e(v.n());
            e[j] = RatFun(1);
            full.kernel.push_back(std::move(e));
        }
        return full;
    }
    return solve_affine(std::move(rows), std::move(rhs), field);
}

struct RegRank {
    std::size_t dim = 0;   // dim tau^0_a
    bool in_reg = false;   // dim == d
};

template <class Field = RationalFunctionField>
RegRank reg_rank_at(const VarietyPresentation& v, const std::vector<RatFun>& a, std::size_t d, const Field& field = {}) {
    auto sigma = detail::point_map(v, a, field);
    std::vector<std::vector<RatFun>> rows;
    for (const auto& p : v.gens) {
        std::vector<RatFun> row;
        for (auto x : v.coords) row.push_back(field.normalize(substitute_poly(p.derivative(x), sigma)));
        rows.push_back(std::move(row));
    }
    std::size_t dim = v.n();
    if (!rows.empty()) dim = solve_affine(std::move(rows), std::vector<RatFun>(v.gens.size()), field).dimension();
    return {dim, dim == d};
}

/// Extends the coefficient derivation d to the tower field holding a, with
/// eps(a_i) = y_i. Coordinates whose value is a transcendental of the tower
/// (a parameter not acted on by d) are assigned freely; algebraic stages get
/// the forced value. Fails if the result does not hit y or does not kill
/// the generators.
inline DerSpec extend_at_point(const VarietyPresentation& v, const DerSpec& d, const TowerField& field,
                               const std::vector<RatFun>& a, const std::vector<RatFun>& y) {
    TowerFieldPolicy pol{&field};
    auto sigma = detail::point_map(v, a, pol);
    if (y.size() != v.n()) detail::domain_fail("fiber point has the wrong number of coordinates");
    std::set<Var> coords(v.coords.begin(), v.coords.end());
    std::map<Var, RatFun> at = sigma;
    for (std::size_t i = 0; i < v.n(); ++i) at[lift_var(v.coords[i])] = y[i];
    for (const auto& p : v.gens)
        if (!field.is_zero(twisted_lift(RatFun(p), d, coords).lift.substitute(at)))
            detail::domain_fail("(a, y) is not on the twisted tangent bundle");

    std::map<Var, RatFun> eta;
    for (auto p : field.params()) {
        if (auto it = d.eta.find(p); it != d.eta.end()) {
            eta[p] = it->second;
            continue;
        }
        eta[p] = RatFun(0);
    }
    for (const auto& [p, r] : d.eta)
        if (!field.is_param(p)) eta[p] = r;
    for (std::size_t i = 0; i < v.n(); ++i) {
        const RatFun& ai = sigma.at(v.coords[i]);
        if (ai.is_polynomial() && ai.num().size() == 1 && ai.den().constant_value() == 1) {
            const auto& [m, c] = *ai.num().terms().begin();
            if (c == 1 && m.factors().size() == 1 && m.factors()[0].second == 1) {
                Var t = m.factors()[0].first;
                if (field.is_param(t) && !d.is_parameter(t)) eta[t] = y[i];
            }
        }
    }
    Tower tower(eta, "eps");
    for (const auto& s : field.stages()) tower = extend_to_algebraic(tower, s.minpoly, s.gen);
    for (std::size_t i = 0; i < v.n(); ++i)
        if (!field.equal(tower.derive(sigma.at(v.coords[i])), y[i]))
            detail::domain_fail("no extension with eps(a_" + std::to_string(i + 1) + ") = y_" + std::to_string(i + 1) +
                                ": the coordinate is not a free transcendental and the forced value differs");
    for (std::size_t i = 0; i < v.gens.size(); ++i)
        if (!field.is_zero(tower.derive(substitute_poly(v.gens[i], sigma))))
            throw Error("extended derivation does not annihilate generator " + std::to_string(i + 1));
    return tower.derivation();
}

}  // namespace dalg

#endif
