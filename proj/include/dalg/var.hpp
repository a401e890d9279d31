#ifndef DALG_VAR_HPP
#define DALG_VAR_HPP

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "dalg/monoid.hpp"

namespace dalg {

/// A polynomial variable: a base name, optionally indexed by a monoid
/// element (jet variables x[d1 d2]). Unindexed variables are "plain":
/// parameters and auxiliary variables.
struct JetVar {
    std::string base;
    std::optional<MonoidElem> index;

    bool is_plain() const noexcept { return !index.has_value(); }

    std::string to_string() const { return index ? base + "[" + index->to_string() + "]" : base; }

    friend bool operator==(const JetVar&, const JetVar&) = default;

    /// Canonical order: base name, plain before indexed, then the index.
    friend std::strong_ordering operator<=>(const JetVar& a, const JetVar& b) {
        if (auto c = a.base <=> b.base; c != 0) return c;
        if (auto c = a.index.has_value() <=> b.index.has_value(); c != 0) return c;
        if (!a.index) return std::strong_ordering::equal;
        return *a.index <=> *b.index;
    }
};

/// Interned handle for a JetVar. Ids are assigned in first-use order, so the
/// id order is an internal detail; anything printed sorts by the JetVar.
class Var {
public:
    Var() = default;

    static Var of(const JetVar& jv);
    static Var plain(const std::string& name) { return of(JetVar{name, std::nullopt}); }
    static Var jet(const std::string& base, const MonoidElem& index) { return of(JetVar{base, index}); }

    std::uint32_t id() const noexcept { return id_; }
    const JetVar& jet() const;
    const std::string& base() const { return jet().base; }
    bool is_plain() const { return jet().is_plain(); }
    const MonoidElem& index() const { return *jet().index; }
    std::string to_string() const { return jet().to_string(); }

    friend bool operator==(Var a, Var b) noexcept { return a.id_ == b.id_; }
    friend auto operator<=>(Var a, Var b) noexcept { return a.id_ <=> b.id_; }

private:
    explicit Var(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = 0;
};

/// Orders Vars canonically (by JetVar) rather than by id.
struct CanonicalVarLess {
    bool operator()(Var a, Var b) const {
        if (a == b) return false;
        return a.jet() < b.jet();
    }
};

namespace detail {

class VarRegistry {
public:
    static VarRegistry& instance() {
        static VarRegistry r;
        return r;
    }

    std::uint32_t intern(const JetVar& jv) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = ids_.find(jv); it != ids_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        if (auto it = ids_.find(jv); it != ids_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(vars_.size());
        vars_.push_back(jv);
        ids_.emplace(jv, id);
        return id;
    }

    const JetVar& get(std::uint32_t id) {
        std::shared_lock lock(mutex_);
        return vars_.at(id);  // deque: references stay valid across push_back
    }

private:
    std::shared_mutex mutex_;
    std::deque<JetVar> vars_;
    std::map<JetVar, std::uint32_t> ids_;
};

}  // namespace detail

inline Var Var::of(const JetVar& jv) { return Var(detail::VarRegistry::instance().intern(jv)); }
inline const JetVar& Var::jet() const { return detail::VarRegistry::instance().get(id_); }

}  // namespace dalg

#endif
