#ifndef DALG_CONFIG_HPP
#define DALG_CONFIG_HPP

// Configurations for k commuting derivations.
//
// A configuration fixes an anti-chain P of minimal leaders in Theta and, for
// every pi in P, a polynomial p_pi in x_pi and the free variables below pi.
// From it we derive rational functions f_{w,pi} over x_V (V = F u P), the
// derivations R^d, and the commutation test on W0 = { p_pi =^pi 0 }.
//
// Choices fixed here:
//  * W is always W0. "Equal almost everywhere on W0" means the numerator of
//    the difference has zero pseudo-remainder modulo every p_pi in x_pi.
//  * The canonical representative f_alpha of a leader alpha uses the
//    smallest pi (total order) dividing alpha and the word of alpha - pi with
//    letters in non-increasing index, e.g. (2,1) -> "d2 d1 d1".

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dalg/jet.hpp"

namespace dalg {

/// A value f_{w,pi} or f_alpha together with where it came from.
struct GFun {
    RatFun value;
    std::optional<std::pair<MonoidElem, MonoidElem>> witness;  // (word, leader); empty for a free variable
};

class Configuration {
public:
    /// Validates and builds a configuration. `eta[i]` is the action of
    /// d_{i+1} on the parameters of K0; an empty vector means K0 = Q.
    Configuration(std::size_t k, std::vector<MonoidElem> leaders, std::map<MonoidElem, Poly> polys,
                  std::vector<std::map<Var, RatFun>> eta = {})
        : state_(std::make_shared<State>()) {
        auto& s = *state_;
        s.k = k;
        if (k == 0) detail::domain_fail("configuration needs at least one derivation");
        std::sort(leaders.begin(), leaders.end());
        leaders.erase(std::unique(leaders.begin(), leaders.end()), leaders.end());
        for (const auto& pi : leaders) {
            if (pi.is_free() || pi.k() != k) detail::domain_fail("leader " + pi.to_string() + " is not in Theta with k = " + std::to_string(k));
            if (pi.is_identity()) detail::domain_fail("the identity cannot be a leader: the free set must contain 0");
        }
        for (std::size_t i = 0; i < leaders.size(); ++i)
            for (std::size_t j = 0; j < leaders.size(); ++j)
                if (i != j && preceq(leaders[i], leaders[j]))
                    detail::domain_fail("leaders are not an anti-chain: " + leaders[i].to_string() + " precedes " +
                                        leaders[j].to_string());
        s.leaders = std::move(leaders);
        eta.resize(k);
        s.eta = std::move(eta);
        for (const auto& m : s.eta)
            for (const auto& [v, r] : m) {
                if (!v.is_plain()) detail::domain_fail("eta entries must be plain parameters, got " + v.to_string());
                s.params.insert(v);
            }
        check_eta_commutes();

        if (polys.size() != s.leaders.size()) detail::domain_fail("need exactly one polynomial per leader");
        for (const auto& pi : s.leaders) {
            auto it = polys.find(pi);
            if (it == polys.end()) detail::domain_fail("missing polynomial for leader " + pi.to_string());
            const Poly& p = it->second;
            Var xpi = x(pi);
            if (p.degree(xpi) == 0) detail::domain_fail("p[" + pi.to_string() + "] does not depend on " + xpi.to_string());
            for (auto v : p.variables()) {
                if (v.is_plain()) {
                    if (!s.params.contains(v)) detail::domain_fail("undeclared parameter " + v.to_string() + " in p[" + pi.to_string() + "]");
                    continue;
                }
                if (v == xpi) continue;
                const auto& mu = v.index();
                if (v.base() != "x" || mu.is_free() || mu.k() != k)
                    detail::domain_fail("p[" + pi.to_string() + "] mentions foreign variable " + v.to_string());
                if (!is_free(mu))
                    detail::domain_fail("p[" + pi.to_string() + "] mentions leader variable " + v.to_string());
                if (!(mu < pi)) detail::domain_fail("p[" + pi.to_string() + "] mentions " + v.to_string() + ", which is not below the leader");
            }
        }
        s.polys = std::move(polys);
        s.theta = MonoidElem::identity(MonoidKind::commutative, k);
        for (const auto& pi : s.leaders) s.theta = lub(s.theta, pi);
    }

    std::size_t k() const noexcept { return state_->k; }
    const std::vector<MonoidElem>& leaders() const noexcept { return state_->leaders; }
    const std::map<MonoidElem, Poly>& polys() const noexcept { return state_->polys; }
    const Poly& poly(const MonoidElem& pi) const {
        auto it = state_->polys.find(pi);
        if (it == state_->polys.end()) detail::domain_fail(pi.to_string() + " is not a minimal leader");
        return it->second;
    }
    const std::vector<std::map<Var, RatFun>>& eta() const noexcept { return state_->eta; }
    const std::set<Var>& parameters() const noexcept { return state_->params; }
    const MonoidElem& theta() const noexcept { return state_->theta; }

    static Var x(const MonoidElem& mu) { return Var::jet("x", mu); }

    bool is_minimal_leader(const MonoidElem& mu) const {
        return std::binary_search(leaders().begin(), leaders().end(), mu);
    }
    /// mu in B: some minimal leader divides mu.
    bool is_leader(const MonoidElem& mu) const {
        return std::any_of(leaders().begin(), leaders().end(), [&](const auto& pi) { return preceq(pi, mu); });
    }
    bool is_free(const MonoidElem& mu) const { return !is_leader(mu); }
    bool in_V(const MonoidElem& mu) const { return is_free(mu) || is_minimal_leader(mu); }

    /// Free elements that are <= theta or used by some p_pi.
    std::vector<MonoidElem> free_materialized() const {
        std::set<MonoidElem> out;
        for (const auto& mu : theta_up_to_degree(k(), theta().length()))
            if (mu <= theta() && is_free(mu)) out.insert(mu);
        for (const auto& [pi, p] : polys())
            for (auto v : p.variables())
                if (!v.is_plain() && v != x(pi)) out.insert(v.index());
        return {out.begin(), out.end()};
    }

    std::vector<MonoidElem> V_materialized() const {
        auto f = free_materialized();
        std::set<MonoidElem> out(f.begin(), f.end());
        out.insert(leaders().begin(), leaders().end());
        return {out.begin(), out.end()};
    }

    /// Canonical factorization (word, pi) of a leader alpha.
    std::pair<MonoidElem, MonoidElem> canonical_factorization(const MonoidElem& alpha) const {
        for (const auto& pi : leaders())
            if (preceq(pi, alpha)) {
                auto rest = quotient(alpha, pi);
                std::vector<std::uint32_t> letters;
                for (std::size_t i = k(); i >= 1; --i)
                    letters.insert(letters.end(), rest.exponent(i), static_cast<std::uint32_t>(i));
                return {MonoidElem::word(k(), std::move(letters)), pi};
            }
        detail::domain_fail(alpha.to_string() + " is not a leader");
    }

    /// Memo table for f_{w,pi}; the only mutable state of a configuration.
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<MonoidElem, MonoidElem>, RatFun> f;
    };
    Cache& cache() const { return state_->cache; }

private:
    void check_eta_commutes() const {
        const auto& s = *state_;
        for (std::size_t i = 0; i < s.k; ++i)
            for (std::size_t j = i + 1; j < s.k; ++j)
                for (auto c : s.params) {
                    auto der = [&](std::size_t idx, const RatFun& r) {
                        DerSpec d;
                        for (auto p : s.params) {
                            auto it = s.eta[idx].find(p);
                            d.eta[p] = it == s.eta[idx].end() ? RatFun(0) : it->second;
                        }
                        return apply_derivation(r, d);
                    };
                    RatFun rc(c);
                    if (der(i, der(j, rc)) != der(j, der(i, rc)))
                        detail::domain_fail("coefficient derivations do not commute on " + c.to_string());
                }
    }

    struct State {
        std::size_t k = 0;
        std::vector<MonoidElem> leaders;
        std::map<MonoidElem, Poly> polys;
        std::vector<std::map<Var, RatFun>> eta;
        std::set<Var> params;
        MonoidElem theta;
        mutable Cache cache;
    };
    std::shared_ptr<State> state_;
};

GFun compute_f(const MonoidElem& word, const MonoidElem& pi, const Configuration& c);
GFun canonical_f(const MonoidElem& alpha, const Configuration& c);

namespace detail {

/// f_{d_i, mu} for mu in V.
inline RatFun f_letter(std::uint32_t i, const MonoidElem& mu, const Configuration& c) {
    if (c.is_minimal_leader(mu)) return compute_f(MonoidElem::word(c.k(), {i}), mu, c).value;
    return canonical_f(apply_generator(i, mu), c).value;
}

inline RatFun eta_part(std::uint32_t i, const RatFun& h, const Configuration& c) {
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : h.variables()) {
        if (!v.is_plain()) continue;
        if (!c.parameters().contains(v)) domain_fail("undeclared parameter " + v.to_string());
        auto it = c.eta()[i - 1].find(v);
        if (it != c.eta()[i - 1].end()) parts.emplace_back(h.derivative(v), it->second);
    }
    return linear_combination(parts);
}

}  // namespace detail

/// R^{d_i}(h) = h^{d_i} + sum_{mu in V} dh/dx_mu * f_{d_i, mu}.
inline RatFun R_apply(std::uint32_t i, const RatFun& h, const Configuration& c) {
    if (i < 1 || i > c.k()) detail::domain_fail("derivation index out of range");
    std::vector<std::pair<RatFun, RatFun>> parts;
    for (auto v : h.variables()) {
        if (v.is_plain()) continue;
        const auto& mu = v.index();
        if (v.base() != "x" || mu.is_free() || mu.k() != c.k() || !c.in_V(mu))
            detail::domain_fail("R_apply: " + v.to_string() + " is not a variable x_mu with mu in V");
        parts.emplace_back(h.derivative(v), detail::f_letter(i, mu, c));
    }
    return detail::eta_part(i, h, c) + linear_combination(parts);
}

/// f_{w,pi}: x_pi for the empty word, the implicit-derivative formula for a
/// single letter, and R^d(f_{w',pi}) for w = d w'.
inline GFun compute_f(const MonoidElem& word, const MonoidElem& pi, const Configuration& c) {
    if (!word.is_free() || word.k() != c.k()) detail::domain_fail("compute_f expects a word over k letters");
    if (!c.is_minimal_leader(pi)) detail::domain_fail(pi.to_string() + " is not a minimal leader");
    GFun out;
    out.witness = std::make_pair(word, pi);
    if (word.is_identity()) {
        out.value = RatFun(Configuration::x(pi));
        return out;
    }
    auto key = std::make_pair(word, pi);
    {
        std::lock_guard lock(c.cache().mutex);
        if (auto it = c.cache().f.find(key); it != c.cache().f.end()) {
            out.value = it->second;
            return out;
        }
    }
    auto letters = word.data();
    const std::uint32_t first = letters[0];
    if (letters.size() == 1) {
        const Poly& p = c.poly(pi);
        Poly sep = p.derivative(Configuration::x(pi));
        if (sep.is_zero()) detail::domain_fail("separant of p[" + pi.to_string() + "] vanishes identically");
        std::vector<std::pair<RatFun, RatFun>> parts;
        for (auto v : p.variables()) {
            if (v.is_plain() || v == Configuration::x(pi)) continue;
            parts.emplace_back(RatFun(p.derivative(v)), canonical_f(apply_generator(first, v.index()), c).value);
        }
        RatFun numer = detail::eta_part(first, RatFun(p), c) + linear_combination(parts);
        out.value = -numer / RatFun(sep);
    } else {
        auto rest = MonoidElem::word(c.k(), {letters.begin() + 1, letters.end()});
        out.value = R_apply(first, compute_f(rest, pi, c).value, c);
    }
    std::lock_guard lock(c.cache().mutex);
    c.cache().f.emplace(key, out.value);
    return out;
}

/// f_alpha: x_alpha for alpha in V, otherwise the canonical f_{w,pi}.
inline GFun canonical_f(const MonoidElem& alpha, const Configuration& c) {
    if (alpha.is_free() || alpha.k() != c.k()) detail::domain_fail("canonical_f expects a Theta element");
    if (c.in_V(alpha)) {
        GFun g{RatFun(Configuration::x(alpha)), std::nullopt};
        if (c.is_minimal_leader(alpha))
            g.witness = std::make_pair(MonoidElem::identity(MonoidKind::free, c.k()), alpha);
        return g;
    }
    auto [w, pi] = c.canonical_factorization(alpha);
    return compute_f(w, pi, c);
}

/// Pseudo-reduces p modulo every p_pi in its leader variable.
inline Poly reduce_modulo_configuration(const Poly& p, const Configuration& c) {
    Poly r = p;
    for (const auto& pi : c.leaders()) {
        Var v = Configuration::x(pi);
        if (r.degree(v) >= c.poly(pi).degree(v)) r = pseudo_remainder(r, c.poly(pi), v);
    }
    return r;
}

enum class CommutationStatus { commutes, fails, unconfirmed };

inline const char* to_string(CommutationStatus s) {
    switch (s) {
        case CommutationStatus::commutes: return "commutes";
        case CommutationStatus::fails: return "fails";
        case CommutationStatus::unconfirmed: return "symbolically-nonzero, unconfirmed";
    }
    return "";
}

struct CommutationWitness {
    MonoidElem word, leader, other_word, other_leader;
    Poly reduced_difference;
    std::optional<std::map<Var, Rational>> point;  // a point of W0 where the difference is nonzero
    std::optional<Rational> value;                  // the difference there
};

struct CommutationResult {
    MonoidElem alpha;
    CommutationStatus status = CommutationStatus::commutes;
    bool trivial = false;        // alpha in F, or a single factorization
    std::size_t factorizations = 0;
    std::optional<CommutationWitness> witness;
};

struct SampleOptions {
    std::uint64_t seed = 0x5eed;
    int attempts = 40;
    long range = 7;  // free values drawn from [-range, range]
};

namespace detail {

/// Divisors of |n| (n != 0), capped to keep root search cheap.
inline std::vector<Integer> small_divisors(const Integer& n, std::size_t cap = 2000) {
    std::vector<Integer> out;
    Integer a = abs(n);
    if (a == 0) return out;
    if (a > Integer("1000000000000")) return out;
    for (Integer d = 1; d * d <= a && out.size() < cap; ++d)
        if (a % d == 0) {
            out.push_back(d);
            if (d * d != a) out.push_back(a / d);
        }
    return out;
}

/// A rational root of a univariate polynomial in v with nonzero separant.
inline std::optional<Rational> rational_simple_root(const Poly& p, Var v) {
    auto deg = p.degree(v);
    if (deg == 0) return std::nullopt;
    Poly q = p;
    integer_normalize(q);
    auto coeffs = q.coefficients_in(v);
    auto value_at = [&](const Rational& r) {
        Rational acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            Rational term = it->second.constant_value();
            Rational pw = 1;
            for (std::uint32_t e = 0; e < it->first; ++e) pw *= r;
            acc += term * pw;
        }
        return acc;
    };
    Poly sep = q.derivative(v);
    auto sep_nonzero = [&](const Rational& r) { return substitute_poly(sep, {{v, RatFun(r)}}).constant_value() != 0; };
    if (deg == 1) {
        Rational root = -q.coefficient(v, 0).constant_value() / q.coefficient(v, 1).constant_value();
        return root;
    }
    std::uint32_t low = coeffs.begin()->first;
    if (low > 0 && low == 1 && sep_nonzero(0)) return Rational(0);
    Integer a0 = coeffs.begin()->second.constant_value().get_num();
    Integer an = coeffs.rbegin()->second.constant_value().get_num();
    for (const auto& num : small_divisors(a0))
        for (const auto& den : small_divisors(an))
            for (int sign : {1, -1}) {
                Rational r(sign * num, den);
                r.canonicalize();
                if (value_at(r) == 0 && sep_nonzero(r)) return r;
            }
    return std::nullopt;
}

/// Tries to find a rational point of W0 where `diff` is defined and nonzero.
inline std::optional<std::pair<std::map<Var, Rational>, Rational>> sample_witness(const RatFun& diff,
                                                                                  const std::vector<RatFun>& defined,
                                                                                  const Configuration& c,
                                                                                  const SampleOptions& opt) {
    std::set<Var> free_vars;
    auto collect = [&](const std::set<Var>& vs) {
        for (auto v : vs)
            if (!v.is_plain() && !c.is_minimal_leader(v.index())) free_vars.insert(v);
    };
    collect(diff.variables());
    for (const auto& r : defined) collect(r.variables());
    for (const auto& [pi, p] : c.polys()) collect(p.variables());
    std::vector<Var> params(c.parameters().begin(), c.parameters().end());

    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> dist(-opt.range, opt.range);
    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        std::map<Var, RatFun> point;
        for (auto v : free_vars) point[v] = RatFun(Rational(dist(rng)));
        for (auto v : params) point[v] = RatFun(Rational(dist(rng)));
        bool ok = true;
        for (const auto& pi : c.leaders()) {
            Var xv = Configuration::x(pi);
            Poly uni = substitute_poly(c.poly(pi), point).num();
            if (!uni.is_zero() && uni.variables() != std::set<Var>{xv}) {
                ok = false;
                break;
            }
            auto root = rational_simple_root(uni, xv);
            if (!root) {
                ok = false;
                break;
            }
            point[xv] = RatFun(*root);
        }
        if (!ok) continue;
        try {
            for (const auto& r : defined) (void)r.substitute(point);
            RatFun val = diff.substitute(point);
            if (!val.is_constant() || val.constant_value() == 0) continue;
            std::map<Var, Rational> pt;
            for (const auto& [v, r] : point) pt[v] = r.constant_value();
            return std::make_pair(std::move(pt), val.constant_value());
        } catch (const PoleError&) {
            continue;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Decides whether all f_{w,pi} with [w]pi = alpha agree on W0.
inline CommutationResult check_commutation_at(const MonoidElem& alpha, const Configuration& c,
                                              const SampleOptions& opt = {}) {
    CommutationResult out;
    out.alpha = alpha;
    if (c.is_free(alpha)) {
        out.trivial = true;
        out.factorizations = 1;
        return out;
    }
    std::vector<std::pair<MonoidElem, MonoidElem>> facts;
    facts.push_back(c.canonical_factorization(alpha));
    for (const auto& pi : c.leaders()) {
        if (!preceq(pi, alpha)) continue;
        for (auto& w : words_with_class(quotient(alpha, pi)))
            if (std::make_pair(w, pi) != facts.front()) facts.emplace_back(w, pi);
    }
    out.factorizations = facts.size();
    if (facts.size() == 1) {
        out.trivial = true;
        return out;
    }
    const RatFun base = compute_f(facts[0].first, facts[0].second, c).value;
    for (std::size_t i = 1; i < facts.size(); ++i) {
        RatFun other = compute_f(facts[i].first, facts[i].second, c).value;
        RatFun diff = other - base;
        Poly red = reduce_modulo_configuration(diff.num(), c);
        if (red.is_zero()) continue;
        CommutationWitness w{facts[0].first, facts[0].second, facts[i].first, facts[i].second, red, {}, {}};
        auto sample = detail::sample_witness(diff, {base, other}, c, opt);
        if (sample) {
            w.point = std::move(sample->first);
            w.value = sample->second;
            out.status = CommutationStatus::fails;
        } else {
            out.status = CommutationStatus::unconfirmed;
        }
        out.witness = std::move(w);
        return out;
    }
    return out;
}

struct CommutationReport {
    bool commutes = true;
    std::vector<CommutationResult> results;  // one per checked alpha in B
};

namespace detail {

inline CommutationReport check_all(const std::vector<MonoidElem>& alphas, const Configuration& c,
                                   const SampleOptions& opt, unsigned jobs) {
    std::vector<MonoidElem> todo;
    for (const auto& a : alphas)
        if (c.is_leader(a)) todo.push_back(a);
    CommutationReport rep;
    rep.results.resize(todo.size());
    if (jobs <= 1 || todo.size() <= 1) {
        for (std::size_t i = 0; i < todo.size(); ++i) rep.results[i] = check_commutation_at(todo[i], c, opt);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = next++; i < todo.size(); i = next++)
                        rep.results[i] = check_commutation_at(todo[i], c, opt);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    for (const auto& r : rep.results)
        if (r.status != CommutationStatus::commutes) rep.commutes = false;
    return rep;
}

}  // namespace detail

/// Commutation at every alpha <= theta (total order).
inline CommutationReport check_local(const Configuration& c, const SampleOptions& opt = {}, unsigned jobs = 1) {
    std::vector<MonoidElem> alphas;
    for (const auto& a : theta_up_to_degree(c.k(), c.theta().length()))
        if (a <= c.theta()) alphas.push_back(a);
    return detail::check_all(alphas, c, opt, jobs);
}

/// Commutation at every alpha with |alpha| <= degree_bound.
inline CommutationReport verify_global(const Configuration& c, std::size_t degree_bound, const SampleOptions& opt = {},
                                       unsigned jobs = 1) {
    return detail::check_all(theta_up_to_degree(c.k(), degree_bound), c, opt, jobs);
}

struct RealizeReport {
    bool ok = true;
    std::size_t checked = 0;
    std::optional<MonoidElem> mismatch_at;
    std::optional<RatFun> literal;  // b^mu computed in the model
    std::optional<RatFun> predicted;  // g_mu evaluated at b^V
};

/// Compares the literal derivatives b^mu in a commuting model with the
/// configuration's prediction g_mu(b^V) for every |mu| <= depth.
inline RealizeReport realize_check(const Configuration& c, const DiffModel& model, const RatFun& b, std::size_t depth) {
    if (model.k() != c.k()) detail::domain_fail("model and configuration have different numbers of derivations");
    if (!model.commutes()) detail::domain_fail("model derivations do not commute");
    const auto& field = model.field();
    std::map<MonoidElem, RatFun> jets;
    std::function<const RatFun&(const MonoidElem&)> jet = [&](const MonoidElem& mu) -> const RatFun& {
        if (auto it = jets.find(mu); it != jets.end()) return it->second;
        RatFun v;
        if (mu.is_identity()) {
            v = field.normalize(b);
        } else {
            std::size_t i = 0;
            while (mu.data()[i] == 0) ++i;
            std::vector<std::uint32_t> lower(mu.data().begin(), mu.data().end());
            --lower[i];
            v = model.derive(i, jet(MonoidElem::exponents(std::move(lower))));
        }
        return jets.emplace(mu, std::move(v)).first->second;
    };
    auto eval_at_b = [&](const RatFun& r) {
        std::map<Var, RatFun> point;
        for (auto v : r.variables())
            if (!v.is_plain()) point[v] = jet(v.index());
        return field.normalize(r.substitute(point));
    };
    for (const auto& pi : c.leaders()) {
        const Poly& p = c.poly(pi);
        if (!field.is_zero(eval_at_b(RatFun(p))))
            detail::domain_fail("b^V is not in W0: p[" + pi.to_string() + "] does not vanish");
        if (field.is_zero(eval_at_b(RatFun(p.derivative(Configuration::x(pi))))))
            detail::domain_fail("b^V is not in W0: the separant of p[" + pi.to_string() + "] vanishes");
    }
    RealizeReport rep;
    for (const auto& mu : theta_up_to_degree(c.k(), depth)) {
        RatFun predicted = eval_at_b(canonical_f(mu, c).value);
        const RatFun& literal = jet(mu);
        ++rep.checked;
        if (!field.equal(predicted, literal)) {
            rep.ok = false;
            rep.mismatch_at = mu;
            rep.literal = literal;
            rep.predicted = predicted;
            return rep;
        }
    }
    return rep;
}

}  // namespace dalg

#endif
