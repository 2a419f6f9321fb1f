#pragma once

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/flags.hpp"
#include "primeglue/poset.hpp"
#include "primeglue/varset.hpp"

namespace primeglue {

/// Antichain of variable-generated primes, sorted. Only normalize_family
/// builds one, so every instance is already reduced to its inclusion-minimal
/// members.
class MinPrimeFamily {
public:
    const std::vector<VarPrime>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool contains(const VarPrime& q) const {
        return std::binary_search(members_.begin(), members_.end(), q);
    }

    /// True for the family {()}, i.e. the zero ideal.
    bool is_zero() const { return members_.size() == 1 && members_.front().empty(); }

    std::size_t min_member_size() const {
        std::size_t m = std::numeric_limits<std::size_t>::max();
        for (const auto& q : members_) m = std::min(m, q.size());
        return m;
    }

    friend bool operator==(const MinPrimeFamily&, const MinPrimeFamily&) = default;

private:
    friend MinPrimeFamily normalize_family(std::vector<VarPrime> raw);
    std::vector<VarPrime> members_;
};

/// Minimal primes of an intersection of variable primes: the inclusion-minimal
/// members of the input.
inline MinPrimeFamily normalize_family(std::vector<VarPrime> raw) {
    if (raw.empty()) throw Error("empty family");
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    MinPrimeFamily out;
    for (const auto& q : raw) {
        bool absorbed = std::any_of(raw.begin(), raw.end(),
                                    [&](const VarPrime& p) { return p.proper_subset_of(q); });
        if (!absorbed) out.members_.push_back(q);
    }
    return out;
}

enum class BaseKind { field, glued };

/// Coefficient domain of a tower ring: a field symbol or the domain produced
/// by gluing the two minimal primes of an earlier quotient.
struct BaseDomain {
    BaseKind kind = BaseKind::field;
    std::string name;
    int dim = 0;
    SpecPoset spec_shape;  // unique minimum (the zero ideal) and maximum
    PropertyFlags flags;
};

inline BaseDomain field_base(const std::string& symbol) {
    BaseDomain b;
    b.kind = BaseKind::field;
    b.name = symbol;
    b.dim = 0;
    b.spec_shape.add_node(Node{std::nullopt, Role::maximal});
    b.flags = field_defaults(symbol);
    b.flags.complete = true;
    b.flags.quasi_excellent = true;
    return b;
}

/// base[[vars]] / (intersection of the family members).
struct TowerRing {
    std::string name;
    BaseDomain base;
    VarSet vars;
    MinPrimeFamily family;
    PropertyFlags flags;
    int level = 0;  // number of gluings in this ring's lineage
};

/// Builds a ring from raw member sets. Flags start from the base's flags:
/// a level-0 ring over a field is complete, hence excellent.
inline TowerRing make_ring(std::string name, BaseDomain base, VarSet vars, std::vector<VarPrime> raw, int level = 0) {
    for (const auto& q : raw)
        if (!q.subset_of(vars))
            throw Error("family member " + q.str() + " uses a variable outside " + vars.str());
    TowerRing r;
    r.name = std::move(name);
    r.vars = std::move(vars);
    r.family = normalize_family(std::move(raw));
    r.level = level;
    r.flags = base.flags;
    r.flags.catenary_at.clear();
    r.flags.reduced = true;
    r.flags.domain = r.family.is_zero() && base.flags.domain;
    r.flags.complete = level == 0 && base.kind == BaseKind::field;
    if (r.flags.complete) r.flags.quasi_excellent = true;
    r.base = std::move(base);
    return r;
}

inline int dim(const TowerRing& ring) {
    return ring.base.dim + static_cast<int>(ring.vars.size()) - static_cast<int>(ring.family.min_member_size());
}

inline bool is_prime_of(const TowerRing& ring, const VarPrime& q) {
    if (!q.subset_of(ring.vars)) return false;
    return std::any_of(ring.family.begin(), ring.family.end(), [&](const VarPrime& m) { return m.subset_of(q); });
}

inline void require_prime(const TowerRing& ring, const VarPrime& q) {
    if (!q.subset_of(ring.vars)) throw Error(q.str() + " uses a variable outside the ring");
    if (!is_prime_of(ring, q)) throw Error("not a prime of the quotient: " + q.str());
}

/// Family members contained in q.
inline std::vector<VarPrime> min_primes_below(const TowerRing& ring, const VarPrime& q) {
    require_prime(ring, q);
    std::vector<VarPrime> out;
    for (const auto& m : ring.family)
        if (m.subset_of(q)) out.push_back(m);
    return out;
}

/// Krull dimension of ring/q, which is base[[vars \ q]].
inline int coheight(const TowerRing& ring, const VarPrime& q) {
    require_prime(ring, q);
    return ring.base.dim + static_cast<int>(ring.vars.size() - q.size());
}

inline int height(const TowerRing& ring, const VarPrime& q) {
    int h = 0;
    for (const auto& p : min_primes_below(ring, q)) h = std::max(h, static_cast<int>(q.size() - p.size()));
    return h;
}

/// Length of every saturated chain of variable primes from the minimal prime
/// p up to q; the interval [p, q] is the boolean lattice on q \ p.
inline int localized_coheight(const TowerRing& ring, const VarPrime& p, const VarPrime& q) {
    require_prime(ring, q);
    if (!p.subset_of(q)) throw Error(p.str() + " is not contained in " + q.str());
    if (!ring.family.contains(p)) throw Error(p.str() + " is not a minimal prime below " + q.str());
    return static_cast<int>(q.size() - p.size());
}

inline nlohmann::json family_json(const MinPrimeFamily& f) {
    auto out = nlohmann::json::array();
    for (const auto& q : f) out.push_back(q.vars());
    return out;
}

inline nlohmann::json ring_json(const TowerRing& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["base"] = {{"kind", r.base.kind == BaseKind::field ? "field" : "glued-domain"},
                 {"name", r.base.name},
                 {"dim", r.base.dim},
                 {"shape_nodes", r.base.spec_shape.size()},
                 {"shape_covers", r.base.spec_shape.cover_count()}};
    j["vars"] = r.vars.vars();
    j["family"] = family_json(r.family);
    j["dim"] = dim(r);
    j["level"] = r.level;
    j["flags"] = r.flags;
    return j;
}

}  // namespace primeglue
