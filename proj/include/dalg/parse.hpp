#ifndef DALG_PARSE_HPP
#define DALG_PARSE_HPP

// Text formats.
//
//   poly / ratfun   x[d1]^2 - 2/3*x[0]*t,  (x + 1) / (y)
//                   identifiers with an optional [index]; index "0", "d1 d2"
//                   (Gamma) or "d1^2 d2" (Theta)
//   term            d1(x * d1(x)) + -c,  d2(u) - 3*u^2
//   derspec         eta: t -> 1; d: x -> u, y -> v
//   eta table       d1: t -> 1; d2: t -> 2     (or "none")
//   config          k=2 / P: d1, d2 / eta: none / eta[d1]: c -> 1 / p[d1] = ...
//   variety         coords: / eta: / alg g: / at: / fiber: / one generator per line
//   definable set   coords: / project: / meta key: value / "lhs = rhs" or "lhs != rhs"
//   system          coords: / one polynomial per line
//
// '#' starts a comment in the line-based formats.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dalg/axioms.hpp"
#include "dalg/prolong.hpp"

namespace dalg {

struct ParseOptions {
    MonoidKind mode = MonoidKind::commutative;
    std::optional<std::size_t> k;  // inferred from the largest dN in the text if absent
};

namespace detail {

/// Largest N among "dN" inside brackets and, if `operators`, in "dN(".
inline std::size_t infer_k(std::string_view text, bool operators) {
    std::size_t k = 0;
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '[') ++depth;
        if (ch == ']' && depth > 0) --depth;
        if (ch != 'd' || i + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
        if (i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_')) continue;
        std::size_t j = i + 1;
        std::size_t n = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            n = std::min<std::size_t>(n * 10 + static_cast<std::size_t>(text[j] - '0'), 1000000);
            ++j;
        }
        if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_')) continue;
        std::size_t after = j;
        while (after < text.size() && text[after] == ' ') ++after;
        if (depth > 0 || (operators && after < text.size() && text[after] == '(')) k = std::max(k, n);
    }
    return k;
}

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line = 1) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
        std::size_t line = line_, col = 1;
        for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool peek_str(std::string_view s) {
        skip_ws();
        return text_.substr(pos_, s.size()) == s;
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    bool accept_str(std::string_view s) {
        if (!peek_str(s)) return false;
        pos_ += s.size();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'" + found());
    }
    void expect_str(std::string_view s) {
        if (!accept_str(s)) fail("expected '" + std::string(s) + "'" + found());
    }
    void expect_end() {
        if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    std::string found() {
        skip_ws();
        if (pos_ >= text_.size()) return ", found end of input";
        return ", found '" + std::string(1, text_[pos_]) + "'";
    }

    bool peek_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    std::string ident() {
        if (!peek_ident()) fail("expected identifier" + found());
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }
    bool peek_int() { return std::isdigit(static_cast<unsigned char>(peek())); }
    Integer integer() {
        if (!peek_int()) fail("expected integer" + found());
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }
    std::uint32_t small_int(std::uint32_t max = 1000000) {
        std::size_t start = pos_;
        Integer v = integer();
        if (v > max) fail_at(start, "integer too large");
        return static_cast<std::uint32_t>(v.get_ui());
    }

    std::size_t pos() const noexcept { return pos_; }
    void set_pos(std::size_t p) noexcept { pos_ = p; }
    char raw(std::size_t p) const { return p < text_.size() ? text_[p] : '\0'; }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

/// Monoid element text: "0", or generators "dN" optionally raised to "^e",
/// separated by blanks. Stops before `stop`.
inline MonoidElem parse_index(Cursor& c, MonoidKind mode, std::size_t k, char stop) {
    c.skip_ws();
    if (c.peek() == '0') {
        c.integer();
        return MonoidElem::identity(mode, k);
    }
    std::vector<std::uint32_t> letters;
    std::vector<std::uint32_t> exps(k, 0);
    bool any = false;
    while (c.peek() != stop && !c.at_end()) {
        std::size_t start = c.pos();
        if (c.peek() != 'd') c.fail("expected a generator dN" + c.found());
        c.set_pos(c.pos() + 1);
        if (!std::isdigit(static_cast<unsigned char>(c.raw(c.pos())))) c.fail("expected generator number after 'd'");
        auto i = c.small_int();
        if (i == 0 || i > k)
            c.fail_at(start, "generator d" + std::to_string(i) + " out of range 1.." + std::to_string(k));
        std::uint32_t e = 1;
        if (c.accept('^')) e = c.small_int(100000);
        if (e == 0) c.fail("exponent must be positive");
        letters.insert(letters.end(), e, i);
        exps[i - 1] += e;
        any = true;
    }
    if (!any) c.fail("empty index" + c.found());
    return mode == MonoidKind::free ? MonoidElem::word(k, std::move(letters)) : MonoidElem::exponents(std::move(exps));
}

class ExprParser {
public:
    ExprParser(Cursor& c, MonoidKind mode, std::size_t k) : c_(c), mode_(mode), k_(k) {}

    RatFun expr() {
        RatFun acc = term();
        for (;;) {
            if (c_.accept('+')) {
                acc += term();
            } else if (peek_binary_minus()) {
                c_.accept('-');
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Var var_ref() {
        std::string name = c_.ident();
        if (c_.raw(c_.pos()) == '[') {
            const std::size_t bracket = c_.pos();
            c_.accept('[');
            if (c_.at_end() || c_.peek() == ']') c_.fail_at(bracket, "empty or unterminated index");
            auto idx = parse_index(c_, mode_, k_, ']');
            c_.expect(']');
            return Var::jet(name, idx);
        }
        return Var::plain(name);
    }

private:
    bool peek_binary_minus() { return c_.peek() == '-' && !c_.peek_str("->"); }

    RatFun term() {
        RatFun acc = factor();
        for (;;) {
            if (c_.accept('*')) {
                acc *= factor();
            } else if (c_.peek() == '/') {
                std::size_t at = c_.pos();
                c_.accept('/');
                RatFun d = factor();
                if (d.is_zero()) c_.fail_at(at, "division by zero");
                acc /= d;
            } else {
                return acc;
            }
        }
    }

    RatFun factor() {
        if (peek_binary_minus()) {
            c_.accept('-');
            return -factor();
        }
        RatFun base = primary();
        if (c_.accept('^')) {
            bool neg = c_.accept('-');
            std::size_t at = c_.pos();
            long e = static_cast<long>(c_.small_int(100000));
            if (neg) {
                if (base.is_zero()) c_.fail_at(at, "negative power of zero");
                e = -e;
            }
            return base.pow(e);
        }
        return base;
    }

    RatFun primary() {
        if (c_.peek_int()) return RatFun(Rational(c_.integer()));
        if (c_.accept('(')) {
            RatFun r = expr();
            c_.expect(')');
            return r;
        }
        if (c_.peek_ident()) return RatFun(var_ref());
        c_.fail("expected an expression" + c_.found());
    }

    Cursor& c_;
    MonoidKind mode_;
    std::size_t k_;
};

inline std::size_t resolve_k(const ParseOptions& opt, std::string_view text, bool operators) {
    if (opt.k) return *opt.k;
    return std::max<std::size_t>(1, infer_k(text, operators));
}

/// entries := var -> expr (, var -> expr)*  |  none
inline std::map<Var, RatFun> parse_entries(Cursor& c, MonoidKind mode, std::size_t k) {
    std::map<Var, RatFun> out;
    std::size_t save = c.pos();
    if (c.peek_ident()) {
        if (c.ident() == "none") return out;
        c.set_pos(save);
    }
    ExprParser p(c, mode, k);
    do {
        std::size_t at = c.pos();
        c.skip_ws();
        at = c.pos();
        Var v = p.var_ref();
        c.expect_str("->");
        RatFun r = p.expr();
        if (!out.emplace(v, std::move(r)).second) c.fail_at(at, "duplicate entry for " + v.to_string());
    } while (c.accept(','));
    return out;
}

/// Strips a '#' comment.
inline std::string_view strip_comment(std::string_view line) {
    auto h = line.find('#');
    return h == std::string_view::npos ? line : line.substr(0, h);
}

inline bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
}

/// Parses "keyword:" at the start of a line; leaves the cursor after ':'.
inline bool accept_keyword(Cursor& c, std::string_view kw) {
    std::size_t save = c.pos();
    if (!c.peek_ident()) return false;
    if (c.ident() == kw && c.accept(':')) return true;
    c.set_pos(save);
    return false;
}

/// Consumes the identifier `w` if it comes next.
inline bool accept_word(Cursor& c, std::string_view w) {
    std::size_t save = c.pos();
    if (c.peek_ident() && c.ident() == w) return true;
    c.set_pos(save);
    return false;
}

inline std::vector<Var> parse_var_list(Cursor& c, MonoidKind mode, std::size_t k) {
    ExprParser p(c, mode, k);
    std::vector<Var> out;
    do out.push_back(p.var_ref());
    while (c.accept(','));
    return out;
}

}  // namespace detail

inline RatFun parse_ratfun(std::string_view text, const ParseOptions& opt = {}) {
    detail::Cursor c(text);
    detail::ExprParser p(c, opt.mode, detail::resolve_k(opt, text, false));
    RatFun r = p.expr();
    c.expect_end();
    return r;
}

inline Poly parse_poly(std::string_view text, const ParseOptions& opt = {}) {
    RatFun r = parse_ratfun(text, opt);
    if (!r.is_polynomial()) throw ParseError("expected a polynomial, got a proper fraction", 1, 1);
    return r.num() * Poly(1 / r.den().constant_value());
}

inline MonoidElem parse_monoid(std::string_view text, MonoidKind mode, std::optional<std::size_t> k = {}) {
    detail::Cursor c(text);
    std::size_t kk = k ? *k : std::max<std::size_t>(1, detail::infer_k("[" + std::string(text) + "]", false));
    auto m = detail::parse_index(c, mode, kk, '\0');
    c.expect_end();
    return m;
}

/// Differential terms. Identifiers declared in `params` are parameters, the
/// rest differential variables.
inline DiffTerm parse_term(std::string_view text, const std::set<std::string>& params = {},
                           const ParseOptions& opt = {}) {
    detail::Cursor c(text);
    const std::size_t k = detail::resolve_k(opt, text, true);
    auto is_op = [](const std::string& id) {
        return id.size() > 1 && id[0] == 'd' &&
               std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    };
    struct P {
        detail::Cursor& c;
        const std::set<std::string>& params;
        std::size_t k;
        decltype(is_op)& op;

        bool binary_minus() { return c.peek() == '-'; }
        DiffTerm sum() {
            DiffTerm acc = product();
            for (;;) {
                if (c.accept('+')) acc = acc + product();
                else if (binary_minus()) {
                    c.accept('-');
                    acc = acc + -product();
                } else return acc;
            }
        }
        DiffTerm product() {
            DiffTerm acc = unary();
            while (c.accept('*')) acc = acc * unary();
            return acc;
        }
        DiffTerm unary() {
            if (c.accept('-')) {
                DiffTerm t = unary();
                if (t.kind() == DiffTerm::Kind::constant) return DiffTerm::constant(-t.value());
                return -t;
            }
            return power();
        }
        DiffTerm power() {
            DiffTerm base = atom();
            if (!c.accept('^')) return base;
            std::size_t at = c.pos();
            auto e = c.small_int(64);
            if (e == 0) c.fail_at(at, "exponent must be positive");
            DiffTerm acc = base;
            for (std::uint32_t i = 1; i < e; ++i) acc = acc * base;
            return acc;
        }
        DiffTerm atom() {
            if (c.peek_int()) {
                Integer n = c.integer();
                if (c.peek() == '/') {
                    std::size_t at = c.pos();
                    c.accept('/');
                    Integer d = c.integer();
                    if (d == 0) c.fail_at(at, "division by zero");
                    Rational q(n, d);
                    q.canonicalize();
                    return DiffTerm::constant(q);
                }
                return DiffTerm::constant(Rational(n));
            }
            if (c.accept('(')) {
                DiffTerm t = sum();
                c.expect(')');
                return t;
            }
            if (!c.peek_ident()) c.fail("expected a term" + c.found());
            std::size_t at = c.pos();
            c.skip_ws();
            at = c.pos();
            std::string id = c.ident();
            if (op(id) && c.peek() == '(') {
                auto i = std::stoul(id.substr(1));
                if (i == 0 || i > k) c.fail_at(at, "derivation " + id + " out of range 1.." + std::to_string(k));
                c.expect('(');
                DiffTerm t = sum();
                c.expect(')');
                return DiffTerm::derive(static_cast<std::uint32_t>(i), t);
            }
            return params.contains(id) ? DiffTerm::parameter(id) : DiffTerm::variable(id);
        }
    };
    P p{c, params, k, is_op};
    DiffTerm t = p.sum();
    c.expect_end();
    return t;
}

namespace detail {

inline DerSpec parse_derspec_at(Cursor& c, MonoidKind mode, std::size_t k) {
    DerSpec d;
    c.expect_str("eta");
    c.expect(':');
    std::size_t at = c.pos();
    d.eta = parse_entries(c, mode, k);
    for (const auto& [v, r] : d.eta)
        if (!v.is_plain()) c.fail_at(at, "eta keys must be plain parameters, got " + v.to_string());
    if (c.accept(';')) {
        d.name = c.ident();
        c.expect(':');
        d.images = parse_entries(c, mode, k);
    }
    c.expect_end();
    return d;
}

}  // namespace detail

inline DerSpec parse_derspec(std::string_view text, const ParseOptions& opt = {}) {
    detail::Cursor c(text);
    return detail::parse_derspec_at(c, opt.mode, detail::resolve_k(opt, text, false));
}

/// "d1: t -> 1; d2: t -> 2" or "none": one table per derivation.
inline std::vector<std::map<Var, RatFun>> parse_eta_table(std::string_view text, std::size_t k) {
    detail::Cursor c(text);
    std::vector<std::map<Var, RatFun>> out(k);
    if (c.at_end()) return out;
    std::size_t save = c.pos();
    if (c.ident() == "none") {
        c.expect_end();
        return out;
    }
    c.set_pos(save);
    do {
        c.skip_ws();
        std::size_t at = c.pos();
        std::string id = c.ident();
        if (id.size() < 2 || id[0] != 'd') c.fail_at(at, "expected a derivation dN");
        std::size_t i = 0;
        try {
            i = std::stoul(id.substr(1));
        } catch (...) {
            c.fail_at(at, "expected a derivation dN");
        }
        if (i == 0 || i > k) c.fail_at(at, "derivation " + id + " out of range 1.." + std::to_string(k));
        c.expect(':');
        auto entries = detail::parse_entries(c, MonoidKind::commutative, k);
        for (auto& [v, r] : entries) {
            if (!v.is_plain()) c.fail_at(at, "eta keys must be plain parameters");
            out[i - 1][v] = r;
        }
    } while (c.accept(';'));
    c.expect_end();
    return out;
}

// ---- configuration files ------------------------------------------------

inline Configuration parse_config(std::string_view text) {
    std::optional<std::size_t> k;
    std::vector<MonoidElem> leaders;
    bool have_p = false;
    std::map<MonoidElem, Poly> polys;
    std::vector<std::map<Var, RatFun>> eta;
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = detail::strip_comment(lines[ln]);
        if (detail::blank(line)) continue;
        detail::Cursor c(line, ln + 1);
        auto need_k = [&] {
            if (!k) c.fail("'k=' must come first");
        };
        c.skip_ws();
        std::size_t start = c.pos();
        std::string kw = c.ident();
        if (kw == "k") {
            if (k) c.fail_at(start, "duplicate k");
            c.expect('=');
            std::size_t at = c.pos();
            auto v = c.small_int(64);
            if (v == 0) c.fail_at(at, "k must be positive");
            k = v;
            eta.resize(*k);
            c.expect_end();
        } else if (kw == "P") {
            need_k();
            if (have_p) c.fail_at(start, "duplicate P");
            have_p = true;
            c.expect(':');
            do {
                c.skip_ws();
                std::size_t at = c.pos();
                leaders.push_back(detail::parse_index(c, MonoidKind::commutative, *k, ','));
                if (std::count(leaders.begin(), leaders.end(), leaders.back()) > 1) c.fail_at(at, "duplicate leader");
            } while (c.accept(','));
            c.expect_end();
        } else if (kw == "eta") {
            need_k();
            if (c.accept(':')) {
                auto entries = detail::parse_entries(c, MonoidKind::commutative, *k);
                if (!entries.empty()) c.fail_at(start, "use eta[dI]: ... to give coefficient derivatives");
                c.expect_end();
                continue;
            }
            c.expect('[');
            std::size_t at = c.pos();
            auto idx = detail::parse_index(c, MonoidKind::commutative, *k, ']');
            if (idx.length() != 1) c.fail_at(at, "eta[...] needs a single generator");
            c.expect(']');
            c.expect(':');
            std::size_t i = 0;
            while (idx.exponent(i + 1) == 0) ++i;
            auto entries = detail::parse_entries(c, MonoidKind::commutative, *k);
            for (auto& [v, r] : entries) {
                if (!v.is_plain()) c.fail_at(at, "eta keys must be plain parameters");
                eta[i][v] = r;
            }
            c.expect_end();
        } else if (kw == "p") {
            need_k();
            c.expect('[');
            std::size_t at = c.pos();
            auto pi = detail::parse_index(c, MonoidKind::commutative, *k, ']');
            c.expect(']');
            c.expect('=');
            detail::ExprParser ep(c, MonoidKind::commutative, *k);
            RatFun r = ep.expr();
            c.expect_end();
            if (!r.is_polynomial()) c.fail_at(at, "p[" + pi.to_string() + "] is not a polynomial");
            if (!polys.emplace(pi, r.num() * Poly(1 / r.den().constant_value())).second)
                c.fail_at(at, "duplicate polynomial for " + pi.to_string());
        } else {
            c.fail_at(start, "unknown directive '" + kw + "'");
        }
    }
    if (!k) throw ParseError("missing 'k=' header", 1, 1);
    if (!have_p) throw ParseError("missing 'P:' line", 1, 1);
    return Configuration(*k, std::move(leaders), std::move(polys), std::move(eta));
}

inline std::string format_eta_entries(const std::map<Var, RatFun>& m) {
    std::vector<std::pair<Var, const RatFun*>> entries;
    for (const auto& [v, r] : m) entries.emplace_back(v, &r);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return CanonicalVarLess{}(a.first, b.first); });
    std::string out;
    for (const auto& [v, r] : entries) {
        if (!out.empty()) out += ", ";
        out += v.to_string() + " -> " + r->to_string();
    }
    return out;
}

inline std::string format_config(const Configuration& c) {
    std::string out = "k=" + std::to_string(c.k()) + "\nP: ";
    for (std::size_t i = 0; i < c.leaders().size(); ++i) out += (i ? ", " : "") + c.leaders()[i].to_string();
    out += "\n";
    bool any = false;
    for (std::size_t i = 0; i < c.k(); ++i) {
        if (c.eta()[i].empty()) continue;
        any = true;
        out += "eta[d" + std::to_string(i + 1) + "]: " + format_eta_entries(c.eta()[i]) + "\n";
    }
    if (!any) out += "eta: none\n";
    for (const auto& pi : c.leaders()) out += "p[" + pi.to_string() + "] = " + c.poly(pi).to_string() + "\n";
    return out;
}

inline std::string format_eta_table(const std::vector<std::map<Var, RatFun>>& eta) {
    std::string out;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i].empty()) continue;
        if (!out.empty()) out += "; ";
        out += "d" + std::to_string(i + 1) + ": " + format_eta_entries(eta[i]);
    }
    return out.empty() ? "none" : out;
}

// ---- varieties ------------------------------------------------------------

/// A variety with a coefficient derivation and an optional point and fiber
/// point over a tower Q(params)(alg...).
struct VarietyFile {
    VarietyPresentation variety;
    DerSpec dspec;
    std::vector<std::pair<Var, Poly>> algebraic;  // adjoined in order
    std::optional<std::vector<RatFun>> point;
    std::optional<std::vector<RatFun>> fiber;

    TowerField tower() const {
        std::set<Var> coords(variety.coords.begin(), variety.coords.end());
        std::set<Var> gens;
        for (const auto& [g, p] : algebraic) gens.insert(g);
        std::set<Var, CanonicalVarLess> params;
        for (const auto& [v, r] : dspec.eta) params.insert(v);
        auto collect = [&](const std::set<Var>& vs) {
            for (auto v : vs)
                if (!coords.contains(v) && !gens.contains(v)) params.insert(v);
        };
        for (const auto& [g, p] : algebraic) collect(p.variables());
        if (point)
            for (const auto& r : *point) collect(r.variables());
        if (fiber)
            for (const auto& r : *fiber) collect(r.variables());
        TowerField f(std::vector<Var>(params.begin(), params.end()));
        for (const auto& [g, p] : algebraic) f = f.adjoin(p, g);
        return f;
    }
};

inline VarietyFile parse_variety(std::string_view text) {
    VarietyFile out;
    bool have_coords = false;
    const std::size_t k = std::max<std::size_t>(1, detail::infer_k(text, false));
    auto lines = detail::split_lines(text);
    auto value_list = [&](detail::Cursor& c) {
        detail::ExprParser p(c, MonoidKind::commutative, k);
        std::vector<RatFun> vals;
        do vals.push_back(p.expr());
        while (c.accept(','));
        return vals;
    };
    std::vector<std::pair<std::size_t, RatFun>> gen_lines;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = detail::strip_comment(lines[ln]);
        if (detail::blank(line)) continue;
        detail::Cursor c(line, ln + 1);
        c.skip_ws();
        std::size_t start = c.pos();
        if (detail::accept_keyword(c, "coords")) {
            if (have_coords) c.fail_at(start, "duplicate coords");
            have_coords = true;
            out.variety.coords = detail::parse_var_list(c, MonoidKind::commutative, k);
            c.expect_end();
        } else if (detail::accept_keyword(c, "eta")) {
            c.set_pos(start);
            out.dspec = detail::parse_derspec_at(c, MonoidKind::commutative, k);
        } else if (detail::accept_keyword(c, "at")) {
            if (out.point) c.fail_at(start, "duplicate at");
            out.point = value_list(c);
            c.expect_end();
        } else if (detail::accept_keyword(c, "fiber")) {
            if (out.fiber) c.fail_at(start, "duplicate fiber");
            out.fiber = value_list(c);
            c.expect_end();
        } else if (detail::accept_word(c, "alg") && c.peek_ident()) {
            detail::ExprParser p(c, MonoidKind::commutative, k);
            Var g = p.var_ref();
            c.expect(':');
            RatFun r = p.expr();
            c.expect_end();
            if (!r.is_polynomial()) c.fail_at(start, "minimal polynomial must be a polynomial");
            out.algebraic.emplace_back(g, r.num() * Poly(1 / r.den().constant_value()));
        } else {
            c.set_pos(start);
            detail::ExprParser p(c, MonoidKind::commutative, k);
            RatFun r = p.expr();
            if (c.accept('=')) r -= p.expr();
            c.expect_end();
            if (!r.is_polynomial()) c.fail_at(start, "generator must be a polynomial");
            gen_lines.emplace_back(ln + 1, std::move(r));
        }
    }
    for (auto& [ln, r] : gen_lines) out.variety.gens.push_back(r.num() * Poly(1 / r.den().constant_value()));
    if (!have_coords) {
        std::set<Var, CanonicalVarLess> vs;
        for (const auto& g : out.variety.gens)
            for (auto v : g.variables())
                if (!out.dspec.is_parameter(v)) vs.insert(v);
        out.variety.coords.assign(vs.begin(), vs.end());
    }
    auto n = out.variety.coords.size();
    if (out.point && out.point->size() != n) throw ParseError("'at' needs " + std::to_string(n) + " values", 1, 1);
    if (out.fiber && out.fiber->size() != n) throw ParseError("'fiber' needs " + std::to_string(n) + " values", 1, 1);
    if (out.fiber && !out.point) throw ParseError("'fiber' needs an 'at' point", 1, 1);
    return out;
}

inline std::string format_values(const std::vector<RatFun>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + vs[i].to_string();
    return out;
}

inline std::string format_var_list(const std::vector<Var>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + vs[i].to_string();
    return out;
}

inline std::string format_variety(const VarietyFile& v) {
    std::string out = "coords: " + format_var_list(v.variety.coords) + "\n";
    out += v.dspec.to_string() + "\n";
    for (const auto& [g, p] : v.algebraic) out += "alg " + g.to_string() + ": " + p.to_string() + "\n";
    for (const auto& g : v.variety.gens) out += g.to_string() + "\n";
    if (v.point) out += "at: " + format_values(*v.point) + "\n";
    if (v.fiber) out += "fiber: " + format_values(*v.fiber) + "\n";
    return out;
}

// ---- definable sets and systems --------------------------------------------

inline DefinableSetDesc parse_definable_set(std::string_view text) {
    DefinableSetDesc out;
    bool have_coords = false, have_proj = false;
    const std::size_t k = std::max<std::size_t>(1, detail::infer_k(text, false));
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = detail::strip_comment(lines[ln]);
        if (detail::blank(line)) continue;
        detail::Cursor c(line, ln + 1);
        c.skip_ws();
        std::size_t start = c.pos();
        if (detail::accept_keyword(c, "coords")) {
            if (have_coords) c.fail_at(start, "duplicate coords");
            have_coords = true;
            out.coords = detail::parse_var_list(c, MonoidKind::commutative, k);
            c.expect_end();
            continue;
        }
        if (detail::accept_keyword(c, "project")) {
            if (have_proj) c.fail_at(start, "duplicate project");
            have_proj = true;
            out.projection = detail::parse_var_list(c, MonoidKind::commutative, k);
            c.expect_end();
            continue;
        }
        if (c.peek_str("meta ")) {
            c.ident();
            c.skip_ws();
            std::size_t ks = c.pos();
            while (c.raw(c.pos()) != ':' && c.raw(c.pos()) != '\0') c.set_pos(c.pos() + 1);
            if (c.raw(c.pos()) != ':') c.fail("expected ':' after metadata key");
            std::string key(line.substr(ks, c.pos() - ks));
            while (!key.empty() && key.back() == ' ') key.pop_back();
            std::string value(line.substr(c.pos() + 1));
            while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front()))) value.erase(value.begin());
            while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
            out.metadata[key] = value;
            continue;
        }
        detail::ExprParser p(c, MonoidKind::commutative, k);
        RatFun lhs = p.expr();
        Relation rel = Relation::eq;
        if (c.accept_str("!=")) rel = Relation::ne;
        else c.expect('=');
        RatFun rhs = p.expr();
        c.expect_end();
        out.atoms.push_back({lhs - rhs, rel});
    }
    if (!have_coords) throw ParseError("missing 'coords:' line", 1, 1);
    out.validate();
    return out;
}

inline std::string format_definable_set(const DefinableSetDesc& d) {
    std::string out = "coords: " + format_var_list(d.coords) + "\n";
    if (!d.projection.empty()) out += "project: " + format_var_list(d.projection) + "\n";
    for (const auto& a : d.atoms) out += a.to_string() + "\n";
    for (const auto& [key, value] : d.metadata) out += "meta " + key + ": " + value + "\n";
    return out;
}

struct SystemFile {
    std::vector<Var> coords;
    std::vector<Poly> eqs;
};

inline SystemFile parse_system(std::string_view text) {
    SystemFile out;
    bool have_coords = false;
    const std::size_t k = std::max<std::size_t>(1, detail::infer_k(text, false));
    auto lines = detail::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = detail::strip_comment(lines[ln]);
        if (detail::blank(line)) continue;
        detail::Cursor c(line, ln + 1);
        c.skip_ws();
        std::size_t start = c.pos();
        if (detail::accept_keyword(c, "coords")) {
            if (have_coords) c.fail_at(start, "duplicate coords");
            have_coords = true;
            out.coords = detail::parse_var_list(c, MonoidKind::commutative, k);
            c.expect_end();
            continue;
        }
        detail::ExprParser p(c, MonoidKind::commutative, k);
        RatFun r = p.expr();
        if (c.accept('=')) r -= p.expr();
        c.expect_end();
        if (!r.is_polynomial()) c.fail_at(start, "equation must be polynomial");
        out.eqs.push_back(r.num() * Poly(1 / r.den().constant_value()));
    }
    if (!have_coords) throw ParseError("missing 'coords:' line", 1, 1);
    return out;
}

inline std::string format_system(const SystemFile& s) {
    std::string out = "coords: " + format_var_list(s.coords) + "\n";
    for (const auto& e : s.eqs) out += e.to_string() + "\n";
    return out;
}

}  // namespace dalg

#endif
