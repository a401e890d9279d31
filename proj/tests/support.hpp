#ifndef DALG_TESTS_SUPPORT_HPP
#define DALG_TESTS_SUPPORT_HPP

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dalg/dalg.hpp"

namespace dalg {

inline void PrintTo(const Var& v, std::ostream* os) { *os << v.to_string(); }
inline void PrintTo(const Poly& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const RatFun& r, std::ostream* os) { *os << r.to_string(); }
inline void PrintTo(const MonoidElem& m, std::ostream* os) { *os << m.to_string(); }

}  // namespace dalg

namespace dalg::test {

inline MonoidElem th(std::vector<std::uint32_t> e) { return MonoidElem::exponents(std::move(e)); }
inline MonoidElem wd(std::size_t k, std::vector<std::uint32_t> letters) { return MonoidElem::word(k, std::move(letters)); }
inline Var v(const std::string& name) { return Var::plain(name); }
inline Var xj(const MonoidElem& mu) { return Var::jet("x", mu); }
inline Poly P(const std::string& s, std::optional<std::size_t> k = {}) { return parse_poly(s, ParseOptions{MonoidKind::commutative, k}); }
inline RatFun R(const std::string& s, std::optional<std::size_t> k = {}) {
    return parse_ratfun(s, ParseOptions{MonoidKind::commutative, k});
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
    Rational rational(long range = 5) {
        long den = integer(1, 3);
        Rational r(integer(-range, range), den);
        r.canonicalize();
        return r;
    }
    template <class T>
    const T& pick(const std::vector<T>& xs) {
        return xs[static_cast<std::size_t>(integer(0, static_cast<long>(xs.size()) - 1))];
    }

    /// Random polynomial in `vars`, total degree <= deg, up to `terms` terms.
    Poly poly(const std::vector<Var>& vars, std::uint32_t deg, int terms = 4) {
        Poly p;
        int n = static_cast<int>(integer(1, terms));
        for (int t = 0; t < n; ++t) {
            std::uint32_t budget = static_cast<std::uint32_t>(integer(0, deg));
            Poly term(rational());
            for (std::uint32_t d = 0; d < budget; ++d) term *= Poly(pick(vars));
            p += term;
        }
        return p;
    }

    RatFun ratfun(const std::vector<Var>& vars, std::uint32_t deg) {
        Poly den = poly(vars, deg / 2 + 1, 2);
        if (den.is_zero()) den = Poly(1);
        return RatFun(poly(vars, deg), den);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

}  // namespace dalg::test

#endif
