#ifndef DALG_AXIOMS_HPP
#define DALG_AXIOMS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/config.hpp"

namespace dalg {

/// A quantifier-free definable set: a conjunction of polynomial atoms over
/// `coords`, together with the coordinates it is projected to.
struct DefinableSetDesc {
    std::vector<Var> coords;
    std::vector<JetAtom> atoms;
    std::vector<Var> projection;
    std::map<std::string, std::string> metadata;

    /// Atoms may mention coordinates only.
    void validate() const {
        std::set<Var> cs(coords.begin(), coords.end());
        if (cs.size() != coords.size()) detail::domain_fail("duplicate coordinate in definable set");
        for (const auto& a : atoms)
            for (auto v : a.expr.variables())
                if (!cs.contains(v)) detail::domain_fail("atom mentions undeclared coordinate " + v.to_string());
        for (auto v : projection)
            if (!cs.contains(v)) detail::domain_fail("projection onto undeclared coordinate " + v.to_string());
    }

    /// Membership of a rational point. An atom whose expression has a pole
    /// at the point is false.
    bool contains(const std::map<Var, Rational>& point) const {
        std::map<Var, RatFun> sigma;
        for (auto v : coords) {
            auto it = point.find(v);
            if (it == point.end()) detail::domain_fail("point misses coordinate " + v.to_string());
            sigma[v] = RatFun(it->second);
        }
        for (const auto& a : atoms) {
            try {
                bool zero = a.expr.substitute(sigma).is_zero();
                if (zero != (a.rel == Relation::eq)) return false;
            } catch (const PoleError&) {
                return false;
            }
        }
        return true;
    }
};

namespace detail {

inline std::string fresh_prefix(const DefinableSetDesc& z, std::size_t n) {
    std::set<std::string> used;
    for (auto v : z.coords) used.insert(v.to_string());
    for (const auto& a : z.atoms)
        for (auto v : a.expr.variables()) used.insert(v.to_string());
    for (std::string prefix : {"y", "w", "u", "v", "y_"}) {
        bool clash = false;
        for (std::size_t i = 1; i <= n; ++i) clash = clash || used.contains(prefix + std::to_string(i));
        if (!clash) return prefix;
    }
    domain_fail("no fresh coordinate names available");
}

}  // namespace detail

/// Z over (x_1..x_n, z)  ->  W over (x_1..x_n, y_1..y_n) with
/// (x, y_n) in Z and y_i = x_{i+1} for i < n. Pi_n(W) = Pi_n(Z).
inline DefinableSetDesc wide_from_deep(const DefinableSetDesc& z, std::size_t n) {
    z.validate();
    if (n == 0) detail::domain_fail("wide_from_deep needs n >= 1");
    if (z.coords.size() != n + 1)
        detail::domain_fail("arity mismatch: Z has " + std::to_string(z.coords.size()) + " coordinates, expected " +
                            std::to_string(n + 1));
    auto prefix = detail::fresh_prefix(z, n);
    DefinableSetDesc w;
    std::vector<Var> ys;
    for (std::size_t i = 0; i < n; ++i) w.coords.push_back(z.coords[i]);
    for (std::size_t i = 1; i <= n; ++i) ys.push_back(Var::plain(prefix + std::to_string(i)));
    w.coords.insert(w.coords.end(), ys.begin(), ys.end());
    std::map<Var, RatFun> rename{{z.coords[n], RatFun(ys[n - 1])}};
    for (const auto& a : z.atoms) w.atoms.push_back({a.expr.substitute(rename), a.rel});
    for (std::size_t i = 0; i + 1 < n; ++i) w.atoms.push_back({RatFun(ys[i]) - RatFun(z.coords[i + 1]), Relation::eq});
    w.projection.assign(z.coords.begin(), z.coords.begin() + static_cast<long>(n));
    w.metadata["projection"] = "Pi_n(W) = Pi_n(Z)";
    w.metadata["jet_recovery"] = "c -> Jet^n(c_1)";
    w.metadata["n"] = std::to_string(n);
    return w;
}

struct NcNormalized {
    InitialSet V;
    std::vector<MonoidElem> free;     // F
    std::vector<MonoidElem> leaders;  // P' = minimal leaders of F
    DefinableSetDesc Z;
};

/// Enlarges V = F u P to F u P' with P' all minimal leaders of F and pulls Z
/// back along the projection. Z's coordinates are base[mu] for mu in V.
inline NcNormalized nc_normalize(const InitialSet& v, const InitialSet& f, const DefinableSetDesc& z,
                                 const std::string& base = "x") {
    z.validate();
    for (const auto& mu : f.elements())
        if (!v.contains(mu)) detail::domain_fail("free set is not contained in V");
    auto leaders = minimal_leaders(f).leaders;
    for (const auto& mu : v.elements())
        if (!f.contains(mu) && std::find(leaders.begin(), leaders.end(), mu) == leaders.end())
            detail::domain_fail(mu.to_string() + " is in V but neither free nor a minimal leader");
    std::set<Var> declared;
    for (const auto& mu : v.elements()) declared.insert(Var::jet(base, mu));
    for (auto c : z.coords)
        if (!declared.contains(c)) detail::domain_fail("Z coordinate " + c.to_string() + " is not indexed by V");

    std::set<MonoidElem> all = v.elements();
    all.insert(leaders.begin(), leaders.end());
    NcNormalized out{InitialSet(v.kind(), v.k(), all), {f.elements().begin(), f.elements().end()}, leaders, {}};
    for (const auto& mu : all) out.Z.coords.push_back(Var::jet(base, mu));
    out.Z.atoms = z.atoms;
    for (const auto& mu : out.free) out.Z.projection.push_back(Var::jet(base, mu));
    out.Z.metadata = z.metadata;
    out.Z.metadata["projection"] = "Pi_F(Z') = Pi_F(Z)";
    return out;
}

/// As above with F = V minus its maximal elements.
inline NcNormalized nc_normalize(const InitialSet& v, const DefinableSetDesc& z, const std::string& base = "x") {
    std::set<MonoidElem> f;
    for (const auto& mu : v.elements()) {
        bool maximal = true;
        for (const auto& nu : v.elements())
            if (nu != mu && preceq(mu, nu)) maximal = false;
        if (!maximal) f.insert(mu);
    }
    return nc_normalize(v, InitialSet(v.kind(), v.k(), std::move(f)), z, base);
}

struct DimensionCertificate {
    std::size_t dimension = 0;
    std::vector<Var> free;                            // coordinates left free
    std::vector<std::pair<Var, std::size_t>> order;  // (main variable, equation index) in solve order
};

/// Dimension of a triangular system: coords are listed in increasing order,
/// the main variable of each equation is its greatest coordinate, main
/// variables are pairwise distinct and every other coordinate occurring in
/// an equation is free. Variables outside coords are parameters.
inline DimensionCertificate triangular_dimension_certificate(const std::vector<Var>& coords,
                                                             const std::vector<Poly>& eqs) {
    std::map<Var, std::size_t> pos;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!pos.emplace(coords[i], i).second) detail::domain_fail("duplicate coordinate " + coords[i].to_string());
    std::vector<Var> mains;
    std::map<Var, std::size_t> main_of;
    for (std::size_t e = 0; e < eqs.size(); ++e) {
        std::optional<Var> main;
        for (auto v : eqs[e].variables())
            if (pos.contains(v) && (!main || pos[v] > pos[*main])) main = v;
        if (!main) detail::domain_fail("not triangular: equation " + std::to_string(e + 1) + " has no coordinate");
        if (eqs[e].derivative(*main).is_zero())
            detail::domain_fail("not triangular: equation " + std::to_string(e + 1) + " has zero separant");
        if (!main_of.emplace(*main, e).second)
            detail::domain_fail("not triangular: equations " + std::to_string(main_of[*main] + 1) + " and " +
                                std::to_string(e + 1) + " share the main variable " + main->to_string());
        mains.push_back(*main);
    }
    for (std::size_t e = 0; e < eqs.size(); ++e)
        for (auto v : eqs[e].variables())
            if (v != mains[e] && main_of.contains(v))
                detail::domain_fail("not triangular: equation " + std::to_string(e + 1) + " involves " +
                                    v.to_string() + ", the main variable of another equation");
    DimensionCertificate out;
    for (auto c : coords)
        if (!main_of.contains(c)) out.free.push_back(c);
    out.dimension = out.free.size();
    for (auto c : coords)
        if (auto it = main_of.find(c); it != main_of.end()) out.order.emplace_back(c, it->second);
    return out;
}

/// The configuration system p_pi = 0 over x_V.
inline DimensionCertificate triangular_dimension_certificate(const Configuration& c) {
    std::vector<Var> coords;
    for (const auto& mu : c.V_materialized()) coords.push_back(Configuration::x(mu));
    std::vector<Poly> eqs;
    for (const auto& pi : c.leaders()) eqs.push_back(c.poly(pi));
    return triangular_dimension_certificate(coords, eqs);
}

}  // namespace dalg

#endif
