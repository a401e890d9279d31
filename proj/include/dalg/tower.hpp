#ifndef DALG_TOWER_HPP
#define DALG_TOWER_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/derivation.hpp"

namespace dalg {

struct TowerStage {
    Var gen;
    Poly minpoly;  // in gen over the previous stages; leading coefficient free of generators
};

/// Q(params)(c_1)...(c_m), each c_j a root of its stage polynomial.
///
/// Elements are RatFun values. The canonical form has a numerator of degree
/// below the stage degree in every generator and a denominator free of
/// generators. Zero testing reduces the numerator by pseudo-division against
/// the stages from the top down; this is exact as long as every stage
/// polynomial is irreducible over the previous stage, which callers assert.
class TowerField {
public:
    TowerField() = default;
    explicit TowerField(std::vector<Var> params) : params_(std::move(params)) {}

    const std::vector<Var>& params() const noexcept { return params_; }
    const std::vector<TowerStage>& stages() const noexcept { return stages_; }

    bool is_generator(Var v) const {
        return std::any_of(stages_.begin(), stages_.end(), [&](const auto& s) { return s.gen == v; });
    }
    bool is_param(Var v) const { return std::find(params_.begin(), params_.end(), v) != params_.end(); }
    bool contains_var(Var v) const { return is_param(v) || is_generator(v); }

    /// Adds a root of `minpoly` (univariate in gen over the current field).
    /// The stored polynomial is rescaled so its initial lies in Q[params].
    TowerField adjoin(const Poly& minpoly, Var gen) const {
        if (contains_var(gen)) detail::domain_fail("generator " + gen.to_string() + " already in the tower");
        if (minpoly.degree(gen) == 0)
            detail::domain_fail("minimal polynomial does not depend on " + gen.to_string());
        for (auto v : minpoly.variables())
            if (v != gen && !contains_var(v))
                detail::domain_fail("minimal polynomial is not univariate over the tower: unknown variable " +
                                    v.to_string());
        auto coeffs = minpoly.coefficients_in(gen);
        const auto deg = coeffs.rbegin()->first;
        RatFun lc = normalize(RatFun(coeffs.rbegin()->second));
        if (is_zero(lc)) detail::domain_fail("minimal polynomial has a vanishing leading coefficient");
        RatFun lc_inv = inverse(lc);
        std::vector<std::pair<std::uint32_t, RatFun>> monic;
        Poly common(1);
        for (const auto& [e, c] : coeffs) {
            RatFun r = e == deg ? RatFun(1) : normalize(RatFun(c) * lc_inv);
            if (r.is_zero()) continue;
            Poly g = gcd(common, r.den());
            common = *divide_exact(common * r.den(), g);
            monic.emplace_back(e, std::move(r));
        }
        Poly m;
        for (const auto& [e, r] : monic)
            m += r.num() * *divide_exact(common, r.den()) * Poly(Monomial(gen, e), Rational(1));
        integer_normalize(m);
        TowerField out = *this;
        out.stages_.push_back({gen, std::move(m)});
        return out;
    }

    /// Triangular reduction. Returns r with multiplier * p == r modulo the
    /// stage relations; multiplier lies in Q[params].
    Poly reduce(const Poly& p, Poly* multiplier = nullptr) const {
        Poly r = p;
        Poly mult(1);
        for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
            if (r.degree(it->gen) < it->minpoly.degree(it->gen)) continue;
            auto pd = pseudo_divide(r, it->minpoly, it->gen);
            r = std::move(pd.remainder);
            mult *= pd.multiplier;
        }
        if (multiplier) *multiplier = std::move(mult);
        return r;
    }

    bool is_zero(const RatFun& r) const { return reduce(r.num()).is_zero(); }
    bool equal(const RatFun& a, const RatFun& b) const { return is_zero(a - b); }

    RatFun normalize(const RatFun& r) const {
        if (stages_.empty()) return r;
        Poly mult;
        Poly n = reduce(r.num(), &mult);
        Poly d = r.den() * mult;
        if (!has_generator(d)) return RatFun(std::move(n), std::move(d));
        RatFun inv = inverse_poly(reduce(d));
        return normalize_from_gen_free(n * inv.num(), inv.den());
    }

    RatFun inverse(const RatFun& r) const {
        RatFun c = normalize(r);
        if (c.is_zero()) throw PoleError("inverse of zero in tower", "0");
        RatFun inv = inverse_poly(c.num());
        return normalize(inv * RatFun(c.den()));
    }

private:
    bool has_generator(const Poly& p) const {
        return std::any_of(stages_.begin(), stages_.end(), [&](const auto& s) { return p.depends_on(s.gen); });
    }

    RatFun normalize_from_gen_free(const Poly& num, const Poly& den) const {
        Poly mult;
        Poly n = reduce(num, &mult);
        return RatFun(std::move(n), den * mult);
    }

    using UPoly = std::vector<RatFun>;  // coefficients, lowest degree first

    void trim(UPoly& u) const {
        while (!u.empty() && is_zero(u.back())) u.pop_back();
    }

    /// Inverse of a reduced nonzero polynomial via the extended Euclidean
    /// algorithm against the top stage it involves.
    RatFun inverse_poly(const Poly& p) const {
        if (p.is_zero()) throw PoleError("inverse of zero in tower", "0");
        std::optional<std::size_t> top;
        for (std::size_t j = 0; j < stages_.size(); ++j)
            if (p.depends_on(stages_[j].gen)) top = j;
        if (!top) return RatFun(Poly(1), p);
        const Var g = stages_[*top].gen;

        auto to_upoly = [&](const Poly& q) {
            UPoly u;
            for (const auto& [e, c] : q.coefficients_in(g)) {
                if (u.size() <= e) u.resize(e + 1);
                u[e] = normalize(RatFun(c));
            }
            trim(u);
            return u;
        };
        UPoly r0 = to_upoly(stages_[*top].minpoly);
        UPoly r1 = to_upoly(p);
        UPoly s0;
        UPoly s1{RatFun(1)};
        while (r1.size() > 1) {
            // r0 = q * r1 + rem
            RatFun lc_inv = inverse(r1.back());
            UPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0);
            UPoly rem = r0;
            while (rem.size() >= r1.size()) {
                auto shift = rem.size() - r1.size();
                RatFun f = normalize(rem.back() * lc_inv);
                q[shift] = f;
                for (std::size_t i = 0; i < r1.size(); ++i)
                    rem[i + shift] = normalize(rem[i + shift] - f * r1[i]);
                rem.pop_back();
                trim(rem);
            }
            UPoly s2 = s0;
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j) {
                    if (s2.size() <= i + j) s2.resize(i + j + 1);
                    s2[i + j] = normalize(s2[i + j] - q[i] * s1[j]);
                }
            trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
            if (r1.empty())
                throw DomainError("element " + p.to_string() +
                                  " is not invertible in the tower (the stage polynomial for " + g.to_string() +
                                  " is not irreducible)");
        }
        if (r1.empty()) throw PoleError("inverse of zero in tower", p.to_string());
        RatFun c_inv = inverse(r1[0]);
        RatFun acc;
        for (std::size_t i = 0; i < s1.size(); ++i)
            acc += s1[i] * c_inv * RatFun(Poly(Monomial(g, static_cast<std::uint32_t>(i)), Rational(1)));
        return normalize(acc);
    }

    std::vector<Var> params_;
    std::vector<TowerStage> stages_;
};

/// A tower with one derivation: eta on the base parameters and the
/// derivative of every algebraic generator, the latter computed by
/// d := -p^eps(c) / p'(c).
class Tower {
public:
    Tower() = default;
    /// Base field Q(params) with derivation eta (keys are the parameters).
    explicit Tower(const std::map<Var, RatFun>& eta, std::string name = "d") {
        std::vector<Var> params;
        for (const auto& [v, r] : eta) params.push_back(v);
        std::sort(params.begin(), params.end(), CanonicalVarLess{});
        field_ = TowerField(std::move(params));
        der_.name = std::move(name);
        der_.eta = eta;
    }

    const TowerField& field() const noexcept { return field_; }
    const DerSpec& derivation() const noexcept { return der_; }

    RatFun derive(const RatFun& x) const { return field_.normalize(apply_derivation(x, der_)); }

    std::optional<RatFun> generator_derivative(Var gen) const {
        if (auto it = der_.images.find(gen); it != der_.images.end()) return it->second;
        return std::nullopt;
    }

    friend Tower extend_to_algebraic(const Tower& t, const Poly& minpoly, Var gen);

private:
    TowerField field_;
    DerSpec der_;
};

/// Extends the tower by a root `gen` of `minpoly` and extends the derivation
/// to it; the new derivative annihilates the defining relation.
inline Tower extend_to_algebraic(const Tower& t, const Poly& minpoly, Var gen) {
    Tower out;
    out.field_ = t.field_.adjoin(minpoly, gen);
    const Poly& m = out.field_.stages().back().minpoly;
    Poly sep = m.derivative(gen);
    if (out.field_.is_zero(RatFun(sep)))
        throw DomainError("vanishing separant: " + gen.to_string() + " is a multiple root of " + minpoly.to_string());
    DerSpec coeff = t.der_;
    coeff.images[gen] = RatFun(0);
    RatFun m_eps = apply_derivation(RatFun(m), coeff);
    RatFun d = out.field_.normalize(-m_eps * out.field_.inverse(RatFun(sep)));
    out.der_ = t.der_;
    out.der_.images[gen] = d;
    if (!out.field_.is_zero(apply_derivation(RatFun(m), out.der_)))
        throw Error("extended derivation does not annihilate the minimal polynomial of " + gen.to_string());
    return out;
}

/// A field with several derivations sharing one tower: the model used by the
/// jet oracle and the realization check.
class DiffModel {
public:
    DiffModel() = default;
    /// etas[i] is the action of the i-th derivation on the base parameters;
    /// all tables must have the same key set.
    explicit DiffModel(const std::vector<std::map<Var, RatFun>>& etas) {
        for (std::size_t i = 0; i < etas.size(); ++i) {
            if (i > 0) {
                std::set<Var> a, b;
                for (const auto& e : etas[0]) a.insert(e.first);
                for (const auto& e : etas[i]) b.insert(e.first);
                if (a != b) detail::domain_fail("model derivations act on different parameter sets");
            }
            ders_.emplace_back(etas[i], "d" + std::to_string(i + 1));
        }
    }

    std::size_t k() const noexcept { return ders_.size(); }
    const TowerField& field() const {
        static const TowerField empty;
        return ders_.empty() ? empty : ders_.front().field();
    }
    const Tower& tower(std::size_t i) const { return ders_.at(i); }

    DiffModel adjoin(const Poly& minpoly, Var gen) const {
        DiffModel out;
        for (const auto& t : ders_) out.ders_.push_back(extend_to_algebraic(t, minpoly, gen));
        return out;
    }

    /// Applies derivation i (0-based).
    RatFun derive(std::size_t i, const RatFun& x) const { return ders_.at(i).derive(x); }

    /// Checks d_i d_j g = d_j d_i g on every parameter and generator.
    bool commutes() const {
        std::vector<Var> gens = field().params();
        for (const auto& s : field().stages()) gens.push_back(s.gen);
        for (std::size_t i = 0; i < k(); ++i)
            for (std::size_t j = i + 1; j < k(); ++j)
                for (auto g : gens) {
                    RatFun x(g);
                    if (!field().equal(derive(i, derive(j, x)), derive(j, derive(i, x)))) return false;
                }
        return true;
    }

private:
    std::vector<Tower> ders_;
};

}  // namespace dalg

#endif
