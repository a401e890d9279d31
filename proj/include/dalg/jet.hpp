#ifndef DALG_JET_HPP
#define DALG_JET_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/tower.hpp"

namespace dalg {

/// Immutable syntax tree of a differential term over +, *, unary minus,
/// rational constants, parameters, differential variables and d1..dk.
class DiffTerm {
public:
    enum class Kind { constant, parameter, variable, add, mul, neg, derive };

    static DiffTerm constant(const Rational& c) {
        auto n = std::make_shared<Node>(Kind::constant);
        n->value = c;
        return DiffTerm(std::move(n));
    }
    static DiffTerm parameter(std::string name) { return leaf(Kind::parameter, std::move(name)); }
    static DiffTerm variable(std::string name) { return leaf(Kind::variable, std::move(name)); }
    static DiffTerm derive(std::uint32_t i, const DiffTerm& t) {
        if (i == 0) detail::domain_fail("derivation symbols are numbered from 1");
        auto n = std::make_shared<Node>(Kind::derive);
        n->index = i;
        n->children = {t};
        return DiffTerm(std::move(n));
    }
    friend DiffTerm operator+(const DiffTerm& a, const DiffTerm& b) { return binary(Kind::add, a, b); }
    friend DiffTerm operator*(const DiffTerm& a, const DiffTerm& b) { return binary(Kind::mul, a, b); }
    friend DiffTerm operator-(const DiffTerm& a) {
        auto n = std::make_shared<Node>(Kind::neg);
        n->children = {a};
        return DiffTerm(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const Rational& value() const { return node_->value; }
    const std::string& name() const { return node_->name; }
    std::uint32_t derivation_index() const { return node_->index; }
    const std::vector<DiffTerm>& children() const { return node_->children; }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : children()) d = std::max(d, c.depth());
        return d + 1;
    }

    std::uint32_t max_derivation_index() const {
        std::uint32_t m = kind() == Kind::derive ? derivation_index() : 0;
        for (const auto& c : children()) m = std::max(m, c.max_derivation_index());
        return m;
    }

    /// Text in the term grammar; every nested sum and product is
    /// parenthesized.
    std::string to_string() const { return render(false); }

private:
    struct Node {
        explicit Node(Kind k) : kind(k) {}
        Kind kind;
        Rational value;
        std::string name;
        std::uint32_t index = 0;
        std::vector<DiffTerm> children;
    };

    explicit DiffTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::string render(bool nested) const {
        auto wrap = [&](std::string s) { return nested ? "(" + s + ")" : s; };
        switch (kind()) {
            case Kind::constant: return value().get_str();
            case Kind::parameter:
            case Kind::variable: return name();
            case Kind::add: return wrap(children()[0].render(true) + " + " + children()[1].render(true));
            case Kind::mul: return wrap(children()[0].render(true) + " * " + children()[1].render(true));
            case Kind::neg: return "-" + children()[0].render(true);
            case Kind::derive: return "d" + std::to_string(derivation_index()) + "(" + children()[0].render(false) + ")";
        }
        return {};
    }
    static DiffTerm leaf(Kind k, std::string name) {
        auto n = std::make_shared<Node>(k);
        n->name = std::move(name);
        return DiffTerm(std::move(n));
    }
    static DiffTerm binary(Kind k, const DiffTerm& a, const DiffTerm& b) {
        auto n = std::make_shared<Node>(k);
        n->children = {a, b};
        return DiffTerm(std::move(n));
    }

    std::shared_ptr<const Node> node_;
};

/// Coefficient derivations for jet rewriting: eta[i] is the action of d_{i+1}
/// on the parameters. A parameter missing from one table has derivative 0
/// there; a parameter missing from every table is undeclared.
struct JetSetting {
    MonoidKind mode = MonoidKind::commutative;
    std::size_t k = 1;
    std::vector<std::map<Var, RatFun>> eta;

    bool declares(Var v) const {
        return std::any_of(eta.begin(), eta.end(), [&](const auto& m) { return m.contains(v); });
    }
    RatFun eta_of(std::size_t i, Var v) const {
        if (i < eta.size())
            if (auto it = eta[i].find(v); it != eta[i].end()) return it->second;
        return RatFun(0);
    }
};

/// Jet variable x[gamma].
inline Var jet_var(const std::string& x, const MonoidElem& gamma) { return Var::jet(x, gamma); }

/// The derivation d_i on the jet ring: x[g] -> x[d_i g], parameters by eta.
inline RatFun jet_derive(std::uint32_t i, const RatFun& r, const JetSetting& s) {
    if (i < 1 || i > s.k) detail::domain_fail("derivation d" + std::to_string(i) + " out of range 1.." + std::to_string(s.k));
    DerSpec d;
    d.name = "d" + std::to_string(i);
    for (auto v : r.variables()) {
        if (v.is_plain()) {
            if (!s.declares(v)) detail::domain_fail("undeclared parameter " + v.to_string());
            d.eta[v] = s.eta_of(i - 1, v);
        } else {
            d.images[v] = RatFun(Var::jet(v.base(), apply_generator(i, v.index())));
        }
    }
    return apply_derivation(r, d);
}

/// Rewrites a differential term into a polynomial in jet variables.
inline RatFun rewrite_term(const DiffTerm& t, const JetSetting& s) {
    using K = DiffTerm::Kind;
    switch (t.kind()) {
        case K::constant: return RatFun(t.value());
        case K::parameter: {
            Var v = Var::plain(t.name());
            if (!s.declares(v)) detail::domain_fail("undeclared parameter " + t.name());
            return RatFun(v);
        }
        case K::variable: return RatFun(jet_var(t.name(), MonoidElem::identity(s.mode, s.k)));
        case K::add: return rewrite_term(t.children()[0], s) + rewrite_term(t.children()[1], s);
        case K::mul: return rewrite_term(t.children()[0], s) * rewrite_term(t.children()[1], s);
        case K::neg: return -rewrite_term(t.children()[0], s);
        case K::derive: return jet_derive(t.derivation_index(), rewrite_term(t.children()[0], s), s);
    }
    return {};
}

enum class Relation { eq, ne };

/// A polynomial atom  expr = 0  or  expr != 0.
struct JetAtom {
    RatFun expr;
    Relation rel = Relation::eq;

    std::string to_string() const { return expr.to_string() + (rel == Relation::eq ? " = 0" : " != 0"); }
};

inline JetAtom rewrite_atom(const DiffTerm& lhs, Relation rel, const DiffTerm& rhs, const JetSetting& s) {
    return {rewrite_term(lhs, s) - rewrite_term(rhs, s), rel};
}

/// Applies the word gamma to a model element (right-most letter first; on
/// Theta, d1 first, then d2, ...).
inline RatFun apply_word(const DiffModel& model, const MonoidElem& gamma, const RatFun& x) {
    RatFun r = model.field().normalize(x);
    auto d = gamma.data();
    if (gamma.is_free()) {
        for (auto it = d.rbegin(); it != d.rend(); ++it) r = model.derive(*it - 1, r);
    } else {
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::uint32_t e = 0; e < d[i]; ++e) r = model.derive(i, r);
    }
    return r;
}

/// Reference semantics: evaluates t by applying the model derivations
/// literally. sigma maps differential variables (and optionally parameters)
/// to model elements; unmapped parameters stand for themselves.
inline RatFun oracle_eval(const DiffTerm& t, const DiffModel& model, const std::map<std::string, RatFun>& sigma,
                          MonoidKind mode = MonoidKind::commutative) {
    if (mode == MonoidKind::commutative && model.k() > 1 && !model.commutes())
        detail::domain_fail("model derivations do not commute; commutative mode needs a commuting model");
    const auto& f = model.field();
    auto rec = [&](auto&& self, const DiffTerm& u) -> RatFun {
        using K = DiffTerm::Kind;
        switch (u.kind()) {
            case K::constant: return RatFun(u.value());
            case K::parameter:
            case K::variable: {
                if (auto it = sigma.find(u.name()); it != sigma.end()) return f.normalize(it->second);
                if (u.kind() == K::parameter) return RatFun(Var::plain(u.name()));
                detail::domain_fail("oracle: no value for variable " + u.name());
            }
            case K::add: return f.normalize(self(self, u.children()[0]) + self(self, u.children()[1]));
            case K::mul: return f.normalize(self(self, u.children()[0]) * self(self, u.children()[1]));
            case K::neg: return -self(self, u.children()[0]);
            case K::derive: {
                if (u.derivation_index() > model.k())
                    detail::domain_fail("oracle: model has no derivation d" + std::to_string(u.derivation_index()));
                return model.derive(u.derivation_index() - 1, self(self, u.children()[0]));
            }
        }
        return {};
    };
    return rec(rec, t);
}

/// Evaluates a jet expression with every x[gamma] bound to gamma applied to
/// sigma(x) in the model.
inline RatFun bind_jets(const RatFun& jet, const DiffModel& model, const std::map<std::string, RatFun>& sigma) {
    std::map<Var, RatFun> point;
    for (auto v : jet.variables()) {
        if (v.is_plain()) {
            if (auto it = sigma.find(v.base()); it != sigma.end()) point[v] = it->second;
            continue;
        }
        auto it = sigma.find(v.base());
        if (it == sigma.end()) detail::domain_fail("no value for differential variable " + v.base());
        point[v] = apply_word(model, v.index(), it->second);
    }
    return model.field().normalize(jet.substitute(point));
}

}  // namespace dalg

#endif
