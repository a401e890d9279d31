#ifndef DALG_RATFUN_HPP
#define DALG_RATFUN_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dalg/poly.hpp"

namespace dalg {

/// Reduced fraction num / den of polynomials over Q.
///
/// Normal form: gcd(num, den) = 1; a constant denominator is folded into the
/// numerator (den = 1); otherwise both parts have integer coefficients with
/// joint content 1 and den has a positive canonical leading coefficient.
class RatFun {
public:
    RatFun() : den_(1) {}
    RatFun(long c) : num_(c), den_(1) {}                // NOLINT(google-explicit-constructor)
    RatFun(const Rational& c) : num_(c), den_(1) {}     // NOLINT(google-explicit-constructor)
    RatFun(Var v) : num_(v), den_(1) {}                 // NOLINT(google-explicit-constructor)
    RatFun(Poly p) : num_(std::move(p)), den_(1) {}     // NOLINT(google-explicit-constructor)
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        if (a.is_polynomial() || b.is_polynomial())
            return reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        Poly g = gcd(a.den_, b.den_);
        if (g.is_constant()) return reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        Poly ad = *divide_exact(a.den_, g);
        Poly bd = *divide_exact(b.den_, g);
        Poly num = a.num_ * bd + b.num_ * ad;
        if (num.is_zero()) return {};
        Poly h = gcd(num, g);
        if (!h.is_constant()) return reduced(*divide_exact(num, h), ad * *divide_exact(b.den_, h));
        return reduced(std::move(num), ad * b.den_);
    }
    friend RatFun operator-(const RatFun& a) {
        RatFun r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return RatFun(a.num_ * b.num_);
        Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
        cancel(an, bd);
        cancel(bn, ad);
        return reduced(an * bn, ad * bd);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw PoleError("division by zero", "0");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    /// Equality of fractions: num1 * den2 == num2 * den1.
    friend bool operator==(const RatFun& a, const RatFun& b) {
        if (a.num_ == b.num_ && a.den_ == b.den_) return true;
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    RatFun pow(long n) const {
        if (n < 0) return RatFun(1) / pow(-n);
        return RatFun(num_.pow(static_cast<std::uint32_t>(n)), den_.pow(static_cast<std::uint32_t>(n)));
    }

    std::set<Var> variables() const {
        auto vs = num_.variables();
        auto ds = den_.variables();
        vs.insert(ds.begin(), ds.end());
        return vs;
    }

    bool depends_on(Var v) const { return num_.depends_on(v) || den_.depends_on(v); }

    RatFun derivative(Var v) const {
        if (is_polynomial()) return RatFun(num_.derivative(v) * (1 / den_.constant_value()));
        Poly dn = num_.derivative(v);
        Poly dd = den_.derivative(v);
        if (dd.is_zero()) return RatFun(dn, den_);
        return RatFun(dn * den_ - num_ * dd, den_ * den_);
    }

    /// Substitutes values for variables (unmapped variables are kept).
    /// Throws PoleError if the denominator vanishes.
    RatFun substitute(const std::map<Var, RatFun>& sigma) const;

    /// Like substitute, but every variable must be mapped.
    RatFun evaluate(const std::map<Var, RatFun>& sigma) const {
        for (auto v : variables())
            if (!sigma.contains(v)) detail::domain_fail("evaluation point does not cover variable " + v.to_string());
        return substitute(sigma);
    }

    /// "num" for polynomials, otherwise "num / den" with parentheses where
    /// needed to read back unambiguously.
    std::string to_string() const {
        if (is_polynomial()) return num_.to_string();
        auto wrap_num = num_.size() > 1;
        auto simple_den = den_.size() == 1 && den_.terms().begin()->second == 1 &&
                          den_.terms().begin()->first.factors().size() == 1;
        std::string n = num_.to_string();
        std::string d = den_.to_string();
        return (wrap_num ? "(" + n + ")" : n) + " / " + (simple_den ? d : "(" + d + ")");
    }

private:
    struct coprime_tag {};
    RatFun(Poly num, Poly den, coprime_tag) : num_(std::move(num)), den_(std::move(den)) { rescale(); }

    static RatFun reduced(Poly num, Poly den) { return RatFun(std::move(num), std::move(den), coprime_tag{}); }

    static void cancel(Poly& n, Poly& d) {
        if (d.is_constant() || n.is_constant()) return;
        Poly g = gcd(n, d);
        if (g.is_constant()) return;
        n = *divide_exact(n, g);
        d = *divide_exact(d, g);
    }

    void normalize() {
        if (den_.is_zero()) throw PoleError("zero denominator", "0");
        if (!num_.is_zero() && !den_.is_constant()) cancel(num_, den_);
        rescale();
    }

    // Folds constants and fixes the sign; num and den are already coprime.
    void rescale() {
        if (den_.is_zero()) throw PoleError("zero denominator", "0");
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        if (den_.is_constant()) {
            num_ *= 1 / den_.constant_value();
            den_ = Poly(1);
            return;
        }
        Integer l = num_.coefficient_denominator_lcm();
        Integer ld = den_.coefficient_denominator_lcm();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), ld.get_mpz_t());
        num_ *= Rational(l);
        den_ *= Rational(l);
        Integer g = num_.coefficient_numerator_gcd();
        Integer gd = den_.coefficient_numerator_gcd();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), gd.get_mpz_t());
        if (g != 1) {
            num_ *= Rational(1, 1) / Rational(g);
            den_ *= Rational(1, 1) / Rational(g);
        }
        if (canonical_leading_coefficient(den_) < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    Poly num_;
    Poly den_;
};

/// p(sigma) computed over a common denominator, then reduced once.
inline RatFun substitute_poly(const Poly& p, const std::map<Var, RatFun>& sigma) {
    std::map<Var, std::uint32_t> degs;
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.factors())
            if (sigma.contains(v)) degs[v] = std::max(degs[v], e);
    if (degs.empty()) return RatFun(p);

    std::map<std::pair<Var, std::uint32_t>, Poly> num_pow;
    std::map<std::pair<Var, std::uint32_t>, Poly> den_pow;
    auto npow = [&](Var v, std::uint32_t e) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = num_pow.find(key);
        if (it == num_pow.end()) it = num_pow.emplace(key, sigma.at(v).num().pow(e)).first;
        return it->second;
    };
    auto dpow = [&](Var v, std::uint32_t e) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = den_pow.find(key);
        if (it == den_pow.end()) it = den_pow.emplace(key, sigma.at(v).den().pow(e)).first;
        return it->second;
    };
    Poly den(1);
    for (const auto& [v, e] : degs) den *= dpow(v, e);
    Poly num;
    for (const auto& [m, c] : p.terms()) {
        Poly term{Rational(c)};
        Monomial rest;
        std::map<Var, std::uint32_t> seen;
        for (const auto& [v, e] : m.factors()) {
            if (!sigma.contains(v)) {
                rest = rest * Monomial(v, e);
                continue;
            }
            seen[v] = e;
            term *= npow(v, e);
        }
        for (const auto& [v, dmax] : degs) {
            auto e = seen.contains(v) ? seen[v] : 0u;
            if (dmax > e && !sigma.at(v).is_polynomial()) term *= dpow(v, dmax - e);
        }
        num += term * Poly(rest, Rational(1));
    }
    return RatFun(std::move(num), std::move(den));
}

inline RatFun RatFun::substitute(const std::map<Var, RatFun>& sigma) const {
    RatFun n = substitute_poly(num_, sigma);
    if (is_polynomial()) return n * RatFun(Rational(1) / den_.constant_value());
    RatFun d = substitute_poly(den_, sigma);
    if (d.is_zero()) throw PoleError("vanishing denominator " + den_.to_string(), den_.to_string());
    return n / d;
}

/// Sum of coefficient * value products without normalizing every partial sum.
inline RatFun linear_combination(const std::vector<std::pair<RatFun, RatFun>>& terms) {
    Poly poly_part;
    RatFun rest;
    for (const auto& [a, b] : terms) {
        if (a.is_zero() || b.is_zero()) continue;
        if (a.is_polynomial() && b.is_polynomial()) poly_part += (a * b).num();
        else rest += a * b;
    }
    return rest + RatFun(std::move(poly_part));
}

}  // namespace dalg

#endif
