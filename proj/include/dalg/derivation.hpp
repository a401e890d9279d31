#ifndef DALG_DERIVATION_HPP
#define DALG_DERIVATION_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/ratfun.hpp"

namespace dalg {

/// A derivation given by its action on generators.
///
/// `eta` is the coefficient derivation: its keys are the declared parameters
/// and its values their derivatives (an empty table means coefficients in Q).
/// `images` prescribes the derivative of the remaining variables; it may be
/// partial, in which case only the twisted lift (with fresh y-variables) is
/// available.
struct DerSpec {
    std::string name = "d";
    std::map<Var, RatFun> eta;
    std::map<Var, RatFun> images;

    bool is_parameter(Var v) const { return eta.contains(v); }

    /// Derivative of a single generator, if known.
    std::optional<RatFun> image(Var v) const {
        if (auto it = eta.find(v); it != eta.end()) return it->second;
        if (auto it = images.find(v); it != images.end()) return it->second;
        return std::nullopt;
    }

    /// "eta: t -> 1; d: x -> u, y -> v"; entries sorted canonically.
    std::string to_string() const {
        auto block = [](const std::map<Var, RatFun>& m) {
            if (m.empty()) return std::string("none");
            std::vector<std::pair<Var, const RatFun*>> entries;
            for (const auto& [v, r] : m) entries.emplace_back(v, &r);
            std::sort(entries.begin(), entries.end(),
                      [](const auto& a, const auto& b) { return CanonicalVarLess{}(a.first, b.first); });
            std::string out;
            for (const auto& [v, r] : entries) {
                if (!out.empty()) out += ", ";
                out += v.to_string() + " -> " + r->to_string();
            }
            return out;
        };
        std::string out = "eta: " + block(eta);
        if (!images.empty()) out += "; " + name + ": " + block(images);
        return out;
    }
};

/// The y-variable paired with x in twisted lifts: "y_" + base, same index.
inline Var lift_var(Var x) {
    JetVar jv = x.jet();
    jv.base = "y_" + jv.base;
    return Var::of(jv);
}

/// q^eta: apply the coefficient derivation to the coefficients of q only.
inline RatFun coefficient_derivative(const RatFun& q, const std::map<Var, RatFun>& eta) {
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : q.variables())
        if (auto it = eta.find(v); it != eta.end()) parts.emplace_back(q.derivative(v), it->second);
    return linear_combination(parts);
}

struct TwistedLift {
    RatFun lift;        // q^eta + sum_i dq/dx_i * y_i
    RatFun coeff_only;  // lift with every y_i = 0, i.e. q^eta
    std::vector<Var> xs;  // the x-variables that received a y partner
};

/// Twisted lift p -> p^[eta]. Every non-parameter variable of q is an
/// x-variable; if `coords` is given, variables outside coords and the
/// parameter table are rejected as undeclared parameters.
inline TwistedLift twisted_lift(const RatFun& q, const DerSpec& d,
                                const std::optional<std::set<Var>>& coords = std::nullopt) {
    TwistedLift out;
    out.coeff_only = coefficient_derivative(q, d.eta);
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : q.variables()) {
        if (d.is_parameter(v)) continue;
        if (coords && !coords->contains(v))
            detail::domain_fail("undeclared parameter " + v.to_string());
        out.xs.push_back(v);
        parts.emplace_back(q.derivative(v), RatFun(lift_var(v)));
    }
    out.lift = out.coeff_only + linear_combination(parts);
    return out;
}

/// Derivation of a polynomial numerator; shared by apply_derivation.
inline RatFun derive_poly(const Poly& p, const DerSpec& d) {
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : p.variables()) {
        auto img = d.image(v);
        if (!img) detail::domain_fail("derivation '" + d.name + "' has no image for " + v.to_string());
        parts.emplace_back(RatFun(p.derivative(v)), *img);
    }
    return linear_combination(parts);
}

/// eps'(q) = q^eps + sum_i dq/dx_i * eps'(x_i).
inline RatFun apply_derivation(const RatFun& q, const DerSpec& d) {
    RatFun dn = derive_poly(q.num(), d);
    if (q.is_polynomial()) return dn * RatFun(1 / q.den().constant_value());
    RatFun dd = derive_poly(q.den(), d);
    // (n/e)' = (n' e - n e') / e^2
    return (dn * RatFun(q.den()) - RatFun(q.num()) * dd) / RatFun(q.den() * q.den());
}

/// The value forced on d(main) by differentiating the constraint p = 0:
/// -(p^eta + sum_{v != main} dp/dv * d(v)) / (dp/dmain).
inline RatFun implicit_delta(const Poly& p, Var main, const DerSpec& d) {
    Poly sep = p.derivative(main);
    if (sep.is_zero()) detail::domain_fail("implicit_delta: dp/d" + main.to_string() + " is identically zero");
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : p.variables()) {
        if (v == main) continue;
        auto img = d.image(v);
        if (!img) detail::domain_fail("implicit_delta: no derivative given for " + v.to_string());
        parts.emplace_back(RatFun(p.derivative(v)), *img);
    }
    return -linear_combination(parts) / RatFun(sep);
}

}  // namespace dalg

#endif
