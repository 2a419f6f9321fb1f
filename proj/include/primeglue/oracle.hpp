#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/certificate.hpp"
#include "primeglue/ring.hpp"
#include "primeglue/varset.hpp"

// Brute-force verifiers. They work on squarefree monomial supports and
// exhaustive subset enumeration, and deliberately share nothing with the
// formula paths in ring.hpp / gluing.hpp beyond the VarPrime type.

namespace primeglue::oracle {

inline constexpr std::size_t max_vars = 20;
inline constexpr std::size_t max_interval_vars = 12;

class Refused : public Error {
public:
    using Error::Error;
};

struct Report {
    std::string check;
    nlohmann::json instance;
    nlohmann::json expected;
    nlohmann::json got;
    bool pass = false;
};

inline void to_json(nlohmann::json& j, const Report& r) {
    j = {{"check", r.check}, {"instance", r.instance}, {"expected", r.expected}, {"got", r.got}, {"pass", r.pass}};
}

/// Variables indexed by bit position; refuses universes above max_vars.
class Universe {
public:
    explicit Universe(const std::vector<VarPrime>& sets) {
        std::set<std::string> all;
        for (const auto& s : sets) all.insert(s.begin(), s.end());
        names_.assign(all.begin(), all.end());
        if (names_.size() > max_vars)
            throw Refused("oracle refuses " + std::to_string(names_.size()) + " variables (cap " +
                          std::to_string(max_vars) + ")");
    }

    std::size_t size() const { return names_.size(); }
    std::uint32_t full() const { return static_cast<std::uint32_t>((std::uint64_t{1} << names_.size()) - 1); }

    std::uint32_t mask(const VarPrime& p) const {
        std::uint32_t m = 0;
        for (const auto& v : p) {
            auto it = std::find(names_.begin(), names_.end(), v);
            if (it == names_.end()) throw Error("oracle: variable " + v + " outside universe");
            m |= std::uint32_t{1} << (it - names_.begin());
        }
        return m;
    }

    VarPrime set(std::uint32_t m) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m >> i & 1) out.push_back(names_[i]);
        return VarPrime(std::move(out));
    }

private:
    std::vector<std::string> names_;
};

namespace detail {

inline bool hits_all(std::uint32_t s, const std::vector<std::uint32_t>& edges) {
    return std::all_of(edges.begin(), edges.end(), [s](std::uint32_t e) { return (s & e) != 0; });
}

/// All minimal subsets of `domain` meeting every edge, by exhaustive
/// enumeration. Hitting is upward closed, so a hitting set is minimal iff no
/// single-element deletion still hits.
inline std::vector<std::uint32_t> minimal_transversals(const std::vector<std::uint32_t>& edges, std::uint32_t domain) {
    std::vector<std::uint32_t> out;
    std::uint32_t s = 0;
    for (;;) {
        if (hits_all(s, edges)) {
            bool minimal = true;
            for (std::uint32_t rest = s; rest && minimal; rest &= rest - 1) {
                std::uint32_t bit = rest & (~rest + 1);
                if (hits_all(s & ~bit, edges)) minimal = false;
            }
            if (minimal) out.push_back(s);
        }
        if (s == domain) break;
        s = (s - domain) & domain;  // next subset of domain
    }
    return out;
}

inline std::vector<VarPrime> to_sets(const Universe& u, const std::vector<std::uint32_t>& masks) {
    std::vector<VarPrime> out;
    for (auto m : masks) out.push_back(u.set(m));
    std::sort(out.begin(), out.end());
    return out;
}

inline nlohmann::json sets_json(const std::vector<VarPrime>& sets) {
    auto j = nlohmann::json::array();
    for (const auto& s : sets) j.push_back(s.vars());
    return j;
}

}  // namespace detail

/// Supports of the minimal generators of the intersection of the family: a
/// squarefree monomial lies in every (q) iff its support meets every q.
inline std::vector<VarPrime> generators_of_intersection(const std::vector<VarPrime>& family) {
    Universe u(family);
    std::vector<std::uint32_t> edges;
    for (const auto& q : family) edges.push_back(u.mask(q));
    return detail::to_sets(u, detail::minimal_transversals(edges, u.full()));
}

/// Minimal variable primes containing the intersection: minimal vertex covers
/// of the generator hypergraph.
inline std::vector<VarPrime> oracle_minimal_primes(const std::vector<VarPrime>& family) {
    Universe u(family);
    std::vector<std::uint32_t> edges;
    for (const auto& q : family) edges.push_back(u.mask(q));
    auto gens = detail::minimal_transversals(edges, u.full());
    return detail::to_sets(u, detail::minimal_transversals(gens, u.full()));
}

inline Report check_minimal_primes(const std::vector<VarPrime>& raw, const MinPrimeFamily& normalized) {
    Report r;
    r.check = "minimal_primes";
    r.instance = detail::sets_json(raw);
    std::vector<VarPrime> expected(normalized.begin(), normalized.end());
    r.expected = detail::sets_json(expected);
    auto got = oracle_minimal_primes(raw);
    r.got = detail::sets_json(got);
    r.pass = got == expected;
    return r;
}

/// Enumerates every variable prime over U u V containing
/// ((A1) n (A2)) + (n Qf) and every prime over V containing (n Qf), keeps the
/// minimal ones, and compares with {Ai u q} and Qf.
inline Report oracle_lemma31(const FactorizationCertificate& c) {
    Report r;
    r.check = "two_to_one_minimal_primes";
    r.instance = certificate_json(c);
    const std::size_t k = c.Qf.size();
    std::vector<VarPrime> expected_t, expected_r(c.Qf.begin(), c.Qf.end());
    for (const auto& q : c.Qf) {
        expected_t.push_back(set_union(c.A1, q));
        expected_t.push_back(set_union(c.A2, q));
    }
    std::sort(expected_t.begin(), expected_t.end());
    r.expected = {{"tbar_side", 2 * k}, {"glued_side", k}, {"tbar_primes", detail::sets_json(expected_t)},
                  {"glued_primes", detail::sets_json(expected_r)}};

    Universe u({c.U, c.V});
    const std::uint32_t v_mask = u.mask(c.V);
    std::vector<std::uint32_t> qf_edges;
    for (const auto& q : c.Qf) qf_edges.push_back(u.mask(q));
    // Generators of (n Qf) and of (A1) n (A2), as monomial supports.
    auto i_gens = detail::minimal_transversals(qf_edges, v_mask);
    auto tbar_gens = detail::minimal_transversals({u.mask(c.A1), u.mask(c.A2)}, u.full());
    std::vector<std::uint32_t> all_gens(i_gens);
    all_gens.insert(all_gens.end(), tbar_gens.begin(), tbar_gens.end());

    auto t_side = detail::to_sets(u, detail::minimal_transversals(all_gens, u.full()));
    auto r_side = detail::to_sets(u, detail::minimal_transversals(i_gens, v_mask));
    r.got = {{"tbar_side", t_side.size()}, {"glued_side", r_side.size()}, {"tbar_primes", detail::sets_json(t_side)},
             {"glued_primes", detail::sets_json(r_side)}};
    r.pass = t_side == expected_t && r_side == expected_r && t_side.size() == 2 * k && r_side.size() == k;
    if (!r.pass) {
        for (const auto& p : t_side)
            if (!std::binary_search(expected_t.begin(), expected_t.end(), p)) {
                r.got["offending"] = p.vars();
                break;
            }
    }
    return r;
}

/// Enumerates every variable prime S of the ring with P c S c Q, builds the
/// cover relation by brute force, and measures all maximal chains.
inline Report oracle_interval_graded(const TowerRing& ring, const VarPrime& p, const VarPrime& q) {
    Report r;
    r.check = "interval_graded";
    r.instance = {{"ring", ring.name}, {"lower", p.vars()}, {"upper", q.vars()}};
    const int predicted = static_cast<int>(q.size()) - static_cast<int>(p.size());
    r.expected = {{"chain_length", predicted}};

    auto is_prime = [&](const VarPrime& s) {
        return std::any_of(ring.family.begin(), ring.family.end(), [&](const VarPrime& m) { return m.subset_of(s); });
    };
    if (!p.subset_of(q) || !is_prime(p) || !q.subset_of(ring.vars)) {
        r.got = {{"error", "lower is not a prime contained in upper"}};
        return r;
    }
    const VarSet extra = set_difference(q, p);
    if (extra.size() > max_interval_vars)
        throw Refused("interval oracle refuses " + std::to_string(extra.size()) + " free variables");

    Universe u({extra});
    const std::uint32_t n = std::uint32_t{1} << extra.size();
    std::vector<bool> member(n, false);
    std::size_t count = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (is_prime(set_union(p, u.set(s)))) {
            member[s] = true;
            ++count;
        }
    }
    // s < t is a cover iff no member lies strictly between them.
    auto is_cover = [&](std::uint32_t s, std::uint32_t t) {
        const std::uint32_t diff = t & ~s;
        for (std::uint32_t d = (diff - 1) & diff; d; d = (d - 1) & diff)
            if (member[s | d]) return false;
        return true;
    };
    constexpr int unset = -1;
    std::vector<int> shortest(n, unset), longest(n, unset);
    std::vector<std::uint64_t> chains(n, 0);
    shortest[0] = longest[0] = 0;
    chains[0] = 1;
    std::vector<std::uint32_t> order;
    for (std::uint32_t s = 0; s < n; ++s)
        if (member[s]) order.push_back(s);
    std::stable_sort(order.begin(), order.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    for (std::uint32_t s : order) {
        if (shortest[s] == unset) continue;
        for (std::uint32_t t : order) {
            if (t == s || (s & ~t) != 0 || !is_cover(s, t)) continue;
            shortest[t] = shortest[t] == unset ? shortest[s] + 1 : std::min(shortest[t], shortest[s] + 1);
            longest[t] = std::max(longest[t], longest[s] + 1);
            chains[t] += chains[s];
        }
    }
    const std::uint32_t top = n - 1;
    r.got = {{"elements", count},
             {"boolean_lattice", count == n},
             {"shortest_chain", shortest[top]},
             {"longest_chain", longest[top]},
             {"maximal_chains", chains[top]}};
    r.pass = count == n && shortest[top] == predicted && longest[top] == predicted;
    return r;
}

}  // namespace primeglue::oracle
