#ifndef DALG_MONOID_HPP
#define DALG_MONOID_HPP

// Free monoid Gamma and free commutative monoid Theta on k generators d1..dk.
//
// Conventions used throughout the library:
//  * A word in Gamma is read as an operator: "d2 d1" applies d1 first, then d2.
//  * The partial order a <= b ("a precedes b") on Gamma is the suffix order:
//    b = alpha a for some word alpha. Prepending a letter is the same as
//    applying one more derivation, so the predecessors of a word are exactly
//    its proper suffixes. On Theta it is the componentwise order.
//  * The total order compares |a| first. Ties are broken lexicographically:
//    on Gamma letter by letter with d1 < d2 < ... < dk; on Theta on the
//    exponent vector, where the larger exponent of the first differing
//    generator is the smaller element. This is the lexicographic order of the
//    sorted words (d1^2 < d1 d2 < d2^2).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dalg/error.hpp"

namespace dalg {

enum class MonoidKind : std::uint8_t { free, commutative };

class MonoidElem {
public:
    MonoidElem() = default;

    static MonoidElem identity(MonoidKind kind, std::size_t k) {
        MonoidElem e;
        e.kind_ = kind;
        e.k_ = k;
        if (kind == MonoidKind::commutative) e.data_.assign(k, 0);
        return e;
    }

    /// Word over generators 1..k; letters are applied right to left.
    static MonoidElem word(std::size_t k, std::vector<std::uint32_t> letters) {
        for (auto l : letters)
            if (l < 1 || l > k) detail::domain_fail("word letter out of range 1..k");
        MonoidElem e;
        e.kind_ = MonoidKind::free;
        e.k_ = k;
        e.data_ = std::move(letters);
        return e;
    }

    static MonoidElem exponents(std::vector<std::uint32_t> exps) {
        MonoidElem e;
        e.kind_ = MonoidKind::commutative;
        e.k_ = exps.size();
        e.data_ = std::move(exps);
        return e;
    }

    static MonoidElem generator(MonoidKind kind, std::size_t k, std::uint32_t i) {
        if (i < 1 || i > k) detail::domain_fail("generator index out of range 1..k");
        if (kind == MonoidKind::free) return word(k, {i});
        std::vector<std::uint32_t> exps(k, 0);
        exps[i - 1] = 1;
        return exponents(std::move(exps));
    }

    MonoidKind kind() const noexcept { return kind_; }
    std::size_t k() const noexcept { return k_; }
    bool is_free() const noexcept { return kind_ == MonoidKind::free; }

    /// Word length for Gamma, total degree for Theta.
    std::size_t length() const noexcept {
        if (kind_ == MonoidKind::free) return data_.size();
        std::size_t s = 0;
        for (auto e : data_) s += e;
        return s;
    }

    bool is_identity() const noexcept { return length() == 0; }

    /// Letters of a Gamma word, or exponents of a Theta element.
    std::span<const std::uint32_t> data() const noexcept { return data_; }

    std::uint32_t exponent(std::size_t i) const {
        if (kind_ != MonoidKind::commutative || i < 1 || i > k_)
            detail::domain_fail("exponent() needs a Theta element and 1 <= i <= k");
        return data_[i - 1];
    }

    /// Image under the quotient Gamma -> Theta.
    MonoidElem to_theta() const {
        if (kind_ == MonoidKind::commutative) return *this;
        std::vector<std::uint32_t> exps(k_, 0);
        for (auto l : data_) ++exps[l - 1];
        return exponents(std::move(exps));
    }

    /// Text form: "0" for the identity, "d1 d2 d1" for words, "d1^2 d2" for Theta.
    std::string to_string() const {
        if (is_identity()) return "0";
        std::string out;
        auto sep = [&] {
            if (!out.empty()) out += ' ';
        };
        if (kind_ == MonoidKind::free) {
            for (auto l : data_) {
                sep();
                out += 'd' + std::to_string(l);
            }
        } else {
            for (std::size_t i = 0; i < k_; ++i) {
                if (data_[i] == 0) continue;
                sep();
                out += 'd' + std::to_string(i + 1);
                if (data_[i] > 1) out += '^' + std::to_string(data_[i]);
            }
        }
        return out;
    }

    friend bool operator==(const MonoidElem&, const MonoidElem&) = default;

    // Total order within one monoid; kind and k are compared first so that
    // mixed containers stay well formed.
    friend std::strong_ordering operator<=>(const MonoidElem& a, const MonoidElem& b) {
        if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
        if (auto c = a.k_ <=> b.k_; c != 0) return c;
        if (auto c = a.length() <=> b.length(); c != 0) return c;
        if (a.kind_ == MonoidKind::free) return a.data_ <=> b.data_;
        for (std::size_t i = 0; i < a.k_; ++i)
            if (a.data_[i] != b.data_[i])
                return a.data_[i] > b.data_[i] ? std::strong_ordering::less
                                                : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    MonoidKind kind_ = MonoidKind::commutative;
    std::size_t k_ = 0;
    std::vector<std::uint32_t> data_;
};

namespace detail {

inline void require_same_monoid(const MonoidElem& a, const MonoidElem& b) {
    if (a.kind() != b.kind() || a.k() != b.k())
        domain_fail("monoid elements of different kind or generator count: '" + a.to_string() +
                    "' and '" + b.to_string() + "'");
}

}  // namespace detail

/// Monoid operation: concatenation on Gamma, componentwise sum on Theta.
inline MonoidElem compose(const MonoidElem& a, const MonoidElem& b) {
    detail::require_same_monoid(a, b);
    std::vector<std::uint32_t> out(a.data().begin(), a.data().end());
    if (a.is_free()) {
        out.insert(out.end(), b.data().begin(), b.data().end());
        return MonoidElem::word(a.k(), std::move(out));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data()[i];
    return MonoidElem::exponents(std::move(out));
}

/// d_i applied on top of mu: the word "d_i mu", or mu + e_i on Theta.
inline MonoidElem apply_generator(std::uint32_t i, const MonoidElem& mu) {
    return compose(MonoidElem::generator(mu.kind(), mu.k(), i), mu);
}

/// a precedes b: a is a suffix of b (Gamma), a <= b componentwise (Theta).
inline bool preceq(const MonoidElem& a, const MonoidElem& b) {
    detail::require_same_monoid(a, b);
    auto da = a.data();
    auto db = b.data();
    if (a.is_free()) {
        if (da.size() > db.size()) return false;
        return std::equal(da.begin(), da.end(), db.end() - static_cast<std::ptrdiff_t>(da.size()));
    }
    for (std::size_t i = 0; i < da.size(); ++i)
        if (da[i] > db[i]) return false;
    return true;
}

inline std::strong_ordering compare_total(const MonoidElem& a, const MonoidElem& b) {
    detail::require_same_monoid(a, b);
    return a <=> b;
}

/// Least upper bound on Theta (componentwise max).
inline MonoidElem lub(const MonoidElem& a, const MonoidElem& b) {
    detail::require_same_monoid(a, b);
    if (a.is_free()) detail::domain_fail("least upper bounds are only defined on Theta");
    std::vector<std::uint32_t> out(a.k());
    for (std::size_t i = 0; i < a.k(); ++i) out[i] = std::max(a.data()[i], b.data()[i]);
    return MonoidElem::exponents(std::move(out));
}

/// b - a on Theta; requires a to precede b.
inline MonoidElem quotient(const MonoidElem& b, const MonoidElem& a) {
    if (!preceq(a, b) || a.is_free())
        detail::domain_fail("quotient needs Theta elements with a preceding b");
    std::vector<std::uint32_t> out(a.k());
    for (std::size_t i = 0; i < a.k(); ++i) out[i] = b.data()[i] - a.data()[i];
    return MonoidElem::exponents(std::move(out));
}

/// All Theta elements of total degree d, in increasing total order.
inline std::vector<MonoidElem> theta_of_degree(std::size_t k, std::size_t d) {
    std::vector<MonoidElem> out;
    if (k == 0) {
        if (d == 0) out.push_back(MonoidElem::exponents({}));
        return out;
    }
    std::vector<std::uint32_t> e(k, 0);
    // Enumerate with the first exponent descending, which is increasing order.
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == k) {
            e[pos] = static_cast<std::uint32_t>(left);
            out.push_back(MonoidElem::exponents(e));
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            e[pos] = static_cast<std::uint32_t>(v);
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, d);
    return out;
}

/// All Theta elements with |mu| <= d, in increasing total order.
inline std::vector<MonoidElem> theta_up_to_degree(std::size_t k, std::size_t d) {
    std::vector<MonoidElem> out;
    for (std::size_t i = 0; i <= d; ++i) {
        auto level = theta_of_degree(k, i);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// All words of length n over k letters, in increasing total order.
inline std::vector<MonoidElem> words_of_length(std::size_t k, std::size_t n) {
    std::vector<MonoidElem> out;
    std::vector<std::uint32_t> w(n, 1);
    while (true) {
        out.push_back(MonoidElem::word(k, w));
        std::size_t pos = n;
        while (pos > 0 && w[pos - 1] == k) w[--pos] = 1;
        if (pos == 0) break;
        ++w[pos - 1];
    }
    return out;
}

/// Every distinct word whose class in Theta is theta, in increasing order.
inline std::vector<MonoidElem> words_with_class(const MonoidElem& theta) {
    if (theta.is_free()) detail::domain_fail("words_with_class expects a Theta element");
    std::vector<std::uint32_t> letters;
    for (std::size_t i = 0; i < theta.k(); ++i)
        letters.insert(letters.end(), theta.data()[i], static_cast<std::uint32_t>(i + 1));
    std::vector<MonoidElem> out;
    do {
        out.push_back(MonoidElem::word(theta.k(), letters));
    } while (std::next_permutation(letters.begin(), letters.end()));
    return out;
}

/// Finite downward-closed subset of Gamma or Theta.
class InitialSet {
public:
    InitialSet(MonoidKind kind, std::size_t k, std::set<MonoidElem> elements)
        : kind_(kind), k_(k), elements_(std::move(elements)) {
        for (const auto& e : elements_) {
            if (e.kind() != kind_ || e.k() != k_)
                detail::domain_fail("initial set element '" + e.to_string() + "' has the wrong kind");
            for (const auto& p : immediate_predecessors(e))
                if (!elements_.contains(p))
                    detail::domain_fail("set is not initial: '" + e.to_string() +
                                        "' is present but its predecessor '" + p.to_string() +
                                        "' is not");
        }
    }

    MonoidKind kind() const noexcept { return kind_; }
    std::size_t k() const noexcept { return k_; }
    const std::set<MonoidElem>& elements() const noexcept { return elements_; }
    bool contains(const MonoidElem& e) const { return elements_.contains(e); }

    /// Predecessors one step down: the word without its first letter, or
    /// e - e_i for every nonzero exponent.
    static std::vector<MonoidElem> immediate_predecessors(const MonoidElem& e) {
        std::vector<MonoidElem> out;
        if (e.is_identity()) return out;
        auto d = e.data();
        if (e.is_free()) {
            out.push_back(MonoidElem::word(e.k(), {d.begin() + 1, d.end()}));
            return out;
        }
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] == 0) continue;
            std::vector<std::uint32_t> p(d.begin(), d.end());
            --p[i];
            out.push_back(MonoidElem::exponents(std::move(p)));
        }
        return out;
    }

private:
    MonoidKind kind_;
    std::size_t k_;
    std::set<MonoidElem> elements_;
};

struct LeaderSet {
    std::vector<MonoidElem> leaders;  // increasing total order
    std::size_t length_bound = 0;     // candidates were searched up to this length
};

/// The minimal elements of the complement of an initial set.
inline LeaderSet minimal_leaders(const InitialSet& f) {
    const std::size_t k = f.k();
    std::vector<MonoidElem> base{MonoidElem::identity(f.kind(), k)};
    std::size_t max_len = 0;
    for (const auto& e : f.elements()) {
        base.push_back(e);
        max_len = std::max(max_len, e.length());
    }
    std::set<MonoidElem> candidates;
    for (const auto& mu : base)
        for (std::uint32_t i = 1; i <= k; ++i) {
            auto c = apply_generator(i, mu);
            if (!f.contains(c)) candidates.insert(c);
        }
    if (f.elements().empty()) candidates = {MonoidElem::identity(f.kind(), k)};

    LeaderSet out;
    out.length_bound = f.elements().empty() ? 0 : max_len + 1;
    for (const auto& c : candidates) {
        bool minimal = true;
        if (c.is_free()) {
            // every proper suffix must lie in F
            auto d = c.data();
            for (std::size_t s = 1; s <= d.size() && minimal; ++s)
                minimal = f.contains(MonoidElem::word(k, {d.begin() + static_cast<std::ptrdiff_t>(s), d.end()}));
        } else {
            for (const auto& other : candidates)
                if (other != c && preceq(other, c)) {
                    minimal = false;
                    break;
                }
        }
        if (minimal) out.leaders.push_back(c);
    }
    return out;
}

}  // namespace dalg

#endif
