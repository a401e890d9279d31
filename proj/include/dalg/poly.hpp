#ifndef DALG_POLY_HPP
#define DALG_POLY_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/error.hpp"
#include "dalg/var.hpp"

namespace dalg {

using Rational = mpq_class;
using Integer = mpz_class;

/// Power product of variables, stored sorted by variable id.
class Monomial {
public:
    using Factor = std::pair<Var, std::uint32_t>;

    Monomial() = default;
    explicit Monomial(Var v, std::uint32_t e = 1) {
        if (e > 0) factors_.emplace_back(v, e);
    }

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool is_one() const noexcept { return factors_.empty(); }

    std::uint32_t degree(Var v) const {
        for (const auto& [w, e] : factors_)
            if (w == v) return e;
        return 0;
    }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (const auto& f : factors_) d += f.second;
        return d;
    }

    /// The monomial with v removed entirely.
    Monomial without(Var v) const {
        Monomial m;
        for (const auto& f : factors_)
            if (f.first != v) m.factors_.push_back(f);
        return m;
    }

    /// Lowers the exponent of v by one; v must divide the monomial.
    Monomial lowered(Var v) const {
        Monomial m;
        for (const auto& [w, e] : factors_) {
            if (w != v) m.factors_.emplace_back(w, e);
            else if (e > 1) m.factors_.emplace_back(w, e - 1);
        }
        return m;
    }

    bool divides(const Monomial& other) const {
        for (const auto& [v, e] : factors_)
            if (other.degree(v) < e) return false;
        return true;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m;
        m.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
                m.factors_.push_back(*i++);
            } else if (i == a.factors_.end() || j->first < i->first) {
                m.factors_.push_back(*j++);
            } else {
                m.factors_.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        return m;
    }

    /// Exact quotient a / b; b must divide a.
    friend Monomial operator/(const Monomial& a, const Monomial& b) {
        Monomial m;
        for (const auto& [v, e] : a.factors_) {
            auto d = b.degree(v);
            if (e > d) m.factors_.emplace_back(v, e - d);
        }
        return m;
    }

    static Monomial gcd(const Monomial& a, const Monomial& b) {
        Monomial m;
        for (const auto& [v, e] : a.factors_) {
            auto d = std::min(e, b.degree(v));
            if (d > 0) m.factors_.emplace_back(v, d);
        }
        return m;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) {
        return a.factors_ <=> b.factors_;
    }

private:
    std::vector<Factor> factors_;
};

/// Sparse multivariate polynomial over Q. No zero coefficients are stored.
class Poly {
public:
    using Terms = std::map<Monomial, Rational>;

    Poly() = default;
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Poly(const Rational& c) {            // NOLINT(google-explicit-constructor)
        if (c != 0) terms_.emplace(Monomial{}, c);
    }
    Poly(Var v) { terms_.emplace(Monomial(v), Rational(1)); }  // NOLINT(google-explicit-constructor)
    Poly(const Monomial& m, const Rational& c) {
        if (c != 0) terms_.emplace(m, c);
    }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    Rational constant_value() const {
        if (!is_constant()) detail::domain_fail("polynomial is not a constant");
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }
    /// Coefficient of the monomial 1.
    Rational constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& c) {
        if (c == 0) terms_.clear();
        else
            for (auto& t : terms_) t.second *= c;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& t : a.terms_) t.second = -t.second;
        return a;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

    friend bool operator==(const Poly&, const Poly&) = default;

    Poly pow(std::uint32_t n) const {
        Poly result(1);
        Poly base = *this;
        while (n > 0) {
            if (n & 1u) result *= base;
            n >>= 1u;
            if (n > 0) base *= base;
        }
        return result;
    }

    std::uint32_t degree(Var v) const {
        std::uint32_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.first.degree(v));
        return d;
    }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.first.total_degree());
        return d;
    }

    bool depends_on(Var v) const {
        for (const auto& t : terms_)
            if (t.first.degree(v) > 0) return true;
        return false;
    }

    std::set<Var> variables() const {
        std::set<Var> vs;
        for (const auto& t : terms_)
            for (const auto& f : t.first.factors()) vs.insert(f.first);
        return vs;
    }

    /// p = sum_i c_i v^i with c_i free of v.
    std::map<std::uint32_t, Poly> coefficients_in(Var v) const {
        std::map<std::uint32_t, Poly> out;
        for (const auto& [m, c] : terms_) out[m.degree(v)].add_term(m.without(v), c);
        return out;
    }

    Poly coefficient(Var v, std::uint32_t d) const {
        Poly out;
        for (const auto& [m, c] : terms_)
            if (m.degree(v) == d) out.add_term(m.without(v), c);
        return out;
    }

    /// Leading coefficient with respect to v (the initial when v is the main variable).
    Poly leading_coefficient(Var v) const { return coefficient(v, degree(v)); }

    Poly derivative(Var v) const {
        Poly out;
        for (const auto& [m, c] : terms_) {
            auto e = m.degree(v);
            if (e > 0) out.add_term(m.lowered(v), c * e);
        }
        return out;
    }

    /// Replaces v by q.
    Poly substitute(Var v, const Poly& q) const {
        if (!depends_on(v)) return *this;
        Poly out;
        std::map<std::uint32_t, Poly> powers;
        for (const auto& [e, c] : coefficients_in(v)) {
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, q.pow(e)).first;
            out += c * it->second;
        }
        return out;
    }

    /// Simultaneous substitution; unmapped variables are kept.
    Poly substitute(const std::map<Var, Poly>& sigma) const {
        Poly out;
        std::map<std::pair<Var, std::uint32_t>, Poly> cache;
        for (const auto& [m, c] : terms_) {
            Poly term{Rational(c)};
            Monomial rest;
            for (const auto& [v, e] : m.factors()) {
                auto it = sigma.find(v);
                if (it == sigma.end()) {
                    rest = rest * Monomial(v, e);
                    continue;
                }
                auto key = std::make_pair(v, e);
                auto pit = cache.find(key);
                if (pit == cache.end()) pit = cache.emplace(key, it->second.pow(e)).first;
                term *= pit->second;
            }
            out += term * Poly(rest, Rational(1));
        }
        return out;
    }

    /// Canonical text form. Variables inside a monomial follow the JetVar
    /// order; terms are sorted by decreasing total degree, then by the
    /// exponent of the canonically smallest variable (larger first), and so on.
    std::string to_string() const;

    /// Lowest common denominator of the coefficients.
    Integer coefficient_denominator_lcm() const {
        Integer l = 1;
        for (const auto& t : terms_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.get_den_mpz_t());
        return l;
    }

    /// Gcd of the coefficient numerators (after clearing denominators if any).
    Integer coefficient_numerator_gcd() const {
        Integer g = 0;
        for (const auto& t : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_num_mpz_t());
        return g;
    }

private:
    Terms terms_;
};

namespace detail {

/// Canonically sorted (var, exponent) list of a monomial.
inline std::vector<Monomial::Factor> canonical_factors(const Monomial& m) {
    auto fs = m.factors();
    std::sort(fs.begin(), fs.end(),
              [](const auto& a, const auto& b) { return CanonicalVarLess{}(a.first, b.first); });
    return fs;
}

/// Printing order on monomials: higher total degree first, then the
/// monomial with the larger exponent at the first canonical variable where
/// they differ.
inline bool print_before(const std::vector<Monomial::Factor>& a, std::uint64_t da,
                         const std::vector<Monomial::Factor>& b, std::uint64_t db) {
    if (da != db) return da > db;
    std::size_t i = 0;
    for (; i < a.size() && i < b.size(); ++i) {
        if (a[i].first != b[i].first) return CanonicalVarLess{}(a[i].first, b[i].first);
        if (a[i].second != b[i].second) return a[i].second > b[i].second;
    }
    return a.size() > b.size();
}

inline std::string monomial_string(const std::vector<Monomial::Factor>& fs) {
    std::string out;
    for (const auto& [v, e] : fs) {
        if (!out.empty()) out += '*';
        out += v.to_string();
        if (e > 1) out += '^' + std::to_string(e);
    }
    return out;
}

}  // namespace detail

inline std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    struct Entry {
        std::vector<Monomial::Factor> fs;
        std::uint64_t deg;
        const Rational* coef;
    };
    std::vector<Entry> entries;
    entries.reserve(terms_.size());
    for (const auto& [m, c] : terms_) entries.push_back({detail::canonical_factors(m), m.total_degree(), &c});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return detail::print_before(a.fs, a.deg, b.fs, b.deg);
    });
    std::string out;
    bool first = true;
    for (const auto& e : entries) {
        Rational c = *e.coef;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        first = false;
        auto mono = detail::monomial_string(e.fs);
        if (mono.empty()) out += c.get_str();
        else if (c == 1) out += mono;
        else out += c.get_str() + "*" + mono;
    }
    return out;
}

/// The canonically leading term's coefficient (first term in printing order).
inline Rational canonical_leading_coefficient(const Poly& p) {
    if (p.is_zero()) return 0;
    const Rational* best = nullptr;
    std::vector<Monomial::Factor> best_fs;
    std::uint64_t best_deg = 0;
    for (const auto& [m, c] : p.terms()) {
        auto fs = detail::canonical_factors(m);
        auto d = m.total_degree();
        if (!best || detail::print_before(fs, d, best_fs, best_deg)) {
            best = &c;
            best_fs = std::move(fs);
            best_deg = d;
        }
    }
    return *best;
}

/// Scales p to integer coefficients with gcd 1 and a positive canonical
/// leading coefficient. Returns the factor s with result = s * p.
inline Rational integer_normalize(Poly& p) {
    if (p.is_zero()) return 1;
    Rational s(p.coefficient_denominator_lcm());
    p *= s;
    Rational g(p.coefficient_numerator_gcd());
    p *= 1 / g;
    s /= g;
    if (canonical_leading_coefficient(p) < 0) {
        p = -p;
        s = -s;
    }
    return s;
}

struct PseudoDivision {
    Poly remainder;
    Poly multiplier;  // a power of the initial of the divisor
    Poly quotient;
};

/// multiplier * f = quotient * p + remainder with deg_main(remainder) < deg_main(p).
inline PseudoDivision pseudo_divide(const Poly& f, const Poly& p, Var main) {
    const auto m = p.degree(main);
    if (m == 0) detail::domain_fail("pseudo-division by a polynomial free of " + main.to_string());
    const Poly lc = p.leading_coefficient(main);
    PseudoDivision r{f, Poly(1), Poly()};
    while (!r.remainder.is_zero()) {
        auto d = r.remainder.degree(main);
        if (d < m) break;
        Poly lr = r.remainder.leading_coefficient(main);
        Poly shift = lr * Poly(Monomial(main, d - m), Rational(1));
        r.remainder = lc * r.remainder - shift * p;
        r.quotient = lc * r.quotient + shift;
        r.multiplier *= lc;
    }
#ifdef DALG_CHECK_INVARIANTS
    if (r.multiplier * f != r.quotient * p + r.remainder)
        throw Error("pseudo-division identity violated");
#endif
    return r;
}

inline Poly pseudo_remainder(const Poly& f, const Poly& p, Var main) {
    const auto m = p.degree(main);
    if (m == 0) detail::domain_fail("pseudo-division by a polynomial free of " + main.to_string());
    const Poly lc = p.leading_coefficient(main);
    Poly r = f;
    while (!r.is_zero()) {
        auto d = r.degree(main);
        if (d < m) break;
        Poly shift = r.leading_coefficient(main) * Poly(Monomial(main, d - m), Rational(1));
        r = lc * r - shift * p;
    }
    return r;
}

namespace detail {

/// Largest variable id occurring in p, or nullopt for constants.
inline std::optional<Var> top_var(const Poly& p) {
    std::optional<Var> best;
    for (const auto& t : p.terms())
        if (!t.first.is_one()) {
            auto v = t.first.factors().back().first;
            if (!best || *best < v) best = v;
        }
    return best;
}

}  // namespace detail

/// Exact quotient a / b if b divides a in Q[vars].
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) detail::domain_fail("division by the zero polynomial");
    if (a.is_zero()) return Poly();
    if (b.is_constant()) return a * (1 / b.constant_value());
    if (b.size() == 1) {
        const auto& [mb, cb] = *b.terms().begin();
        Poly q;
        for (const auto& [m, c] : a.terms()) {
            if (!mb.divides(m)) return std::nullopt;
            q.add_term(m / mb, c / cb);
        }
        return q;
    }
    const Var v = *detail::top_var(b);
    const auto db = b.degree(v);
    const Poly lb = b.leading_coefficient(v);
    Poly rem = a;
    Poly q;
    while (!rem.is_zero()) {
        auto dr = rem.degree(v);
        if (dr < db) return std::nullopt;
        auto lq = divide_exact(rem.leading_coefficient(v), lb);
        if (!lq) return std::nullopt;
        Poly t = *lq * Poly(Monomial(v, dr - db), Rational(1));
        q += t;
        rem -= t * b;
    }
    return q;
}

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

// Images in F_p[v], p = 2^61 - 1, used to bound gcd degrees cheaply.
constexpr std::uint64_t gcd_prime = 2305843009213693951ULL;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % gcd_prime);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mulmod(a, a))
        if (e & 1) r = mulmod(r, a);
    return r;
}

inline std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using ModPoly = std::vector<std::uint64_t>;  // lowest degree first

inline void trim(ModPoly& u) {
    while (!u.empty() && u.back() == 0) u.pop_back();
}

inline std::optional<ModPoly> image_mod(const Poly& p, Var v, const std::map<Var, std::uint64_t>& point) {
    ModPoly u(p.degree(v) + 1, 0);
    for (const auto& [m, c] : p.terms()) {
        std::uint64_t den = mpz_fdiv_ui(c.get_den_mpz_t(), gcd_prime);
        if (den == 0) return std::nullopt;
        std::uint64_t x = mulmod(mpz_fdiv_ui(c.get_num_mpz_t(), gcd_prime), powmod(den, gcd_prime - 2));
        std::uint32_t dv = 0;
        for (const auto& [w, e] : m.factors()) {
            if (w == v) dv = e;
            else x = mulmod(x, powmod(point.at(w), e));
        }
        u[dv] = (u[dv] + x) % gcd_prime;
    }
    trim(u);
    return u;
}

inline std::size_t gcd_degree_mod(ModPoly a, ModPoly b) {
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        std::uint64_t inv = powmod(b.back(), gcd_prime - 2);
        while (a.size() >= b.size()) {
            std::uint64_t f = mulmod(a.back(), inv);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[i + shift] = (a[i + shift] + gcd_prime - mulmod(f, b[i])) % gcd_prime;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

/// Upper bound for deg_v gcd(a, b) from a modular image at a point where
/// both leading coefficients survive; nullopt if no such point was found.
inline std::optional<std::size_t> gcd_degree_bound(const Poly& a, const Poly& b, Var v, std::uint64_t& seed) {
    std::set<Var> others = a.variables();
    for (auto w : b.variables()) others.insert(w);
    others.erase(v);
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::map<Var, std::uint64_t> point;
        for (auto w : others) point[w] = splitmix(seed) % gcd_prime;
        auto ia = image_mod(a, v, point);
        auto ib = image_mod(b, v, point);
        if (!ia || !ib || ia->size() != a.degree(v) + 1 || ib->size() != b.degree(v) + 1) continue;
        return gcd_degree_mod(std::move(*ia), std::move(*ib));
    }
    return std::nullopt;
}

}  // namespace detail

/// Gcd of the coefficients of p viewed as a polynomial in v.
inline Poly content_in(const Poly& p, Var v) {
    Poly g;
    for (const auto& [e, c] : p.coefficients_in(v)) {
        g = gcd(g, c);
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

inline Poly primitive_part_in(const Poly& p, Var v) {
    if (p.is_zero()) return p;
    auto c = content_in(p, v);
    auto q = divide_exact(p, c);
    if (!q) throw Error("content does not divide polynomial");
    return *q;
}

/// Greatest common divisor in Q[vars], normalized by integer_normalize.
/// Modular images rule out variables first; what remains goes through a
/// recursive primitive pseudo-remainder sequence.
inline Poly gcd(const Poly& a, const Poly& b) {
    auto finish = [](Poly g) {
        integer_normalize(g);
        return g;
    };
    if (a.is_zero()) return finish(b);
    if (b.is_zero()) return finish(a);
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a.size() == 1 || b.size() == 1) {
        const Poly& mono = a.size() == 1 ? a : b;
        const Poly& other = a.size() == 1 ? b : a;
        Monomial g = mono.terms().begin()->first;
        for (const auto& t : other.terms()) g = Monomial::gcd(g, t.first);
        return Poly(g, Rational(1));
    }
    // Variables the gcd can involve. A variable missing from either input
    // or with a coprime modular image is excluded.
    const std::set<Var> va = a.variables(), vb = b.variables();
    std::set<Var> all = va;
    all.insert(vb.begin(), vb.end());
    std::vector<Var> candidates, excluded;
    std::uint64_t seed = 0x5eedULL;
    for (auto w : all) {
        if (!va.contains(w) || !vb.contains(w)) {
            excluded.push_back(w);
            continue;
        }
        auto bound = detail::gcd_degree_bound(a, b, w, seed);
        if (bound && *bound == 0) excluded.push_back(w);
        else candidates.push_back(w);
    }
    if (candidates.empty()) return Poly(1);
    if (!excluded.empty()) {
        // the gcd divides every coefficient with respect to an excluded variable
        const Var w = excluded.front();
        Poly g;
        for (const Poly* p : {&a, &b})
            for (const auto& [e, c] : p->coefficients_in(w)) {
                g = gcd(g, c);
                if (g.is_constant()) return Poly(1);
            }
        return finish(g);
    }
    Var v = candidates.front();
    for (auto w : candidates)
        if (std::max(a.degree(w), b.degree(w)) < std::max(a.degree(v), b.degree(v))) v = w;

    Poly ca = content_in(a, v);
    Poly cb = content_in(b, v);
    Poly r0 = *divide_exact(a, ca);
    Poly r1 = *divide_exact(b, cb);
    Poly c = gcd(ca, cb);
    if (r0.degree(v) < r1.degree(v)) std::swap(r0, r1);
    while (!r1.is_zero() && r1.degree(v) > 0) {
        Poly r = pseudo_remainder(r0, r1, v);
        r0 = std::move(r1);
        r1 = r.is_zero() ? Poly() : primitive_part_in(r, v);
        if (!r1.is_zero()) integer_normalize(r1);
    }
    Poly g = r1.is_zero() ? primitive_part_in(r0, v) : Poly(1);
    return finish(c * g);
}

}  // namespace dalg

#endif
