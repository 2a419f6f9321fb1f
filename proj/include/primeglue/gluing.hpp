#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/certificate.hpp"
#include "primeglue/ring.hpp"
#include "primeglue/shapes.hpp"

namespace primeglue {

struct Violation {
    std::string kind;
    std::string detail;
};

struct HypothesisReport {
    std::optional<FactorizationCertificate> certificate;
    /// Other certificates with a V of the same (maximal) size.
    std::vector<FactorizationCertificate> alternatives;
    std::vector<Violation> violations;
    std::vector<std::string> justifications;

    bool ok() const { return certificate.has_value() && violations.empty(); }
};

inline constexpr std::size_t max_search_vars = 24;

namespace detail {

/// Bit i <-> i-th variable of the ring, in sorted order.
class VarIndex {
public:
    explicit VarIndex(const VarSet& vars) : names_(vars.vars()) {
        if (names_.size() > 64) throw Error("factorization search supports at most 64 variables");
    }

    std::uint64_t mask(const VarPrime& p) const {
        std::uint64_t m = 0;
        for (const auto& v : p) {
            auto it = std::lower_bound(names_.begin(), names_.end(), v);
            if (it == names_.end() || *it != v) throw Error("unknown variable " + v);
            m |= std::uint64_t{1} << (it - names_.begin());
        }
        return m;
    }

    VarPrime set(std::uint64_t m) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m >> i & 1) out.push_back(names_[i]);
        return VarPrime(std::move(out));
    }

private:
    std::vector<std::string> names_;
};

/// Box identity for a candidate V; returns the Qf masks on success.
inline std::optional<std::set<std::uint64_t>> box_split(const std::vector<std::uint64_t>& family, std::uint64_t q1,
                                                        std::uint64_t q2, std::uint64_t v) {
    const std::uint64_t a1 = q1 & ~v, a2 = q2 & ~v;
    std::set<std::uint64_t> s1, s2;
    for (auto m : family) {
        const std::uint64_t u = m & ~v;
        if (u == a1)
            s1.insert(m & v);
        else if (u == a2)
            s2.insert(m & v);
        else
            return std::nullopt;
    }
    if (s1 != s2) return std::nullopt;
    return s1;
}

inline FactorizationCertificate make_certificate(const TowerRing& ring, const VarIndex& idx, const VarPrime& q1,
                                                 const VarPrime& q2, std::uint64_t v,
                                                 const std::set<std::uint64_t>& qf) {
    FactorizationCertificate c;
    c.V = idx.set(v);
    c.U = set_difference(ring.vars, c.V);
    c.A1 = set_difference(q1, c.V);
    c.A2 = set_difference(q2, c.V);
    std::vector<VarPrime> members;
    for (auto m : qf) members.push_back(idx.set(m));
    c.Qf = normalize_family(std::move(members));
    c.renaming = fresh_renaming(c.V);
    c.Q1 = q1;
    c.Q2 = q2;
    return c;
}

inline void check_flag(HypothesisReport& r, bool value, const char* name) {
    if (!value) r.violations.push_back({"flag failure", std::string(name) + " is not asserted"});
}

}  // namespace detail

inline const char* standing_hypothesis_note() {
    return "each member of Qf is generated by variables, so q*D[[V]] is prime in D[[V]] for every domain D "
           "(the quotient is D[[V \\ q]]), and distinct antichain members never contain one another";
}

inline const char* catenary_note() {
    return "T localized at Q1 and at Q2 is catenary: localizing base[[vars]] at a variable-generated prime "
           "gives a regular local ring, and a quotient of a regular local ring is catenary";
}

/// Searches for the factorization certificate, trying V = subsets of
/// Q1 n Q2 by decreasing size and keeping the lexicographically least V at the
/// first size that admits the box identity. Variables of Q1 n Q2 that occur
/// in no family member are forced into V.
inline HypothesisReport check_gluing_hypotheses(const TowerRing& ring, const VarPrime& q1, const VarPrime& q2) {
    HypothesisReport r;
    for (const auto* q : {&q1, &q2}) {
        if (!is_prime_of(ring, *q)) {
            r.violations.push_back({"not a prime", q->str() + " contains no minimal prime of " + ring.name});
            return r;
        }
    }
    detail::check_flag(r, ring.flags.contains_rationals, "contains_rationals");
    detail::check_flag(r, ring.flags.uncountable, "uncountable");
    detail::check_flag(r, ring.flags.card_eq_residue, "card_eq_residue");
    if (q1.subset_of(q2) || q2.subset_of(q1)) {
        r.violations.push_back({"comparable designated primes", q1.str() + " and " + q2.str()});
        return r;
    }

    const detail::VarIndex idx(ring.vars);
    std::vector<std::uint64_t> family;
    std::uint64_t occurring = 0;
    for (const auto& m : ring.family) {
        family.push_back(idx.mask(m));
        occurring |= family.back();
    }
    const std::uint64_t m1 = idx.mask(q1), m2 = idx.mask(q2);
    const std::uint64_t shared = m1 & m2;
    const std::uint64_t forced = shared & ~occurring;
    std::vector<int> free_bits;
    for (int i = 0; i < 64; ++i)
        if ((shared & ~forced) >> i & 1) free_bits.push_back(i);
    if (free_bits.size() > max_search_vars) {
        r.violations.push_back({"search too large", std::to_string(free_bits.size()) + " free shared variables"});
        return r;
    }

    std::vector<FactorizationCertificate> found;
    const int n = static_cast<int>(free_bits.size());
    for (int size = n; size >= 0 && found.empty(); --size) {
        // Lexicographic enumeration of size-subsets of free_bits.
        std::vector<int> pick(size);
        for (int i = 0; i < size; ++i) pick[i] = i;
        for (;;) {
            std::uint64_t v = forced;
            for (int i : pick) v |= std::uint64_t{1} << free_bits[i];
            if (auto qf = detail::box_split(family, m1, m2, v))
                found.push_back(detail::make_certificate(ring, idx, q1, q2, v, *qf));
            int i = size - 1;
            while (i >= 0 && pick[i] == n - size + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    if (found.empty()) {
        r.violations.push_back({"no box-product factorization",
                                "no V inside " + set_intersection(q1, q2).str() + " splits the family"});
        return r;
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.V < b.V; });
    r.certificate = found.front();
    r.alternatives.assign(found.begin() + 1, found.end());
    r.justifications.push_back(standing_hypothesis_note());
    r.justifications.push_back(catenary_note());
    if (!r.alternatives.empty())
        r.justifications.push_back(std::to_string(found.size()) + " maximal choices of V exist; the least is used");
    return r;
}

/// Throws unless `cert` really factors `ring`.
inline void validate_certificate(const TowerRing& ring, const FactorizationCertificate& c) {
    if (!set_intersection(c.U, c.V).empty() || set_union(c.U, c.V) != ring.vars)
        throw Error("invalid certificate: U and V do not partition the ring's variables");
    if (!c.A1.subset_of(c.U) || !c.A2.subset_of(c.U)) throw Error("invalid certificate: A1, A2 must lie in U");
    if (c.A1.subset_of(c.A2) || c.A2.subset_of(c.A1)) throw Error("invalid certificate: A1 and A2 are comparable");
    if (c.Q1 != set_union(c.A1, c.V) || c.Q2 != set_union(c.A2, c.V))
        throw Error("invalid certificate: designated primes are not A1 u V and A2 u V");
    std::set<VarPrime> box;
    for (const auto& q : c.Qf) {
        if (!q.subset_of(c.V)) throw Error("invalid certificate: Qf member outside V");
        box.insert(set_union(c.A1, q));
        box.insert(set_union(c.A2, q));
    }
    std::set<VarPrime> fam(ring.family.begin(), ring.family.end());
    if (box != fam || box.size() != 2 * c.Qf.size())
        throw Error("invalid certificate: box product does not reproduce the family");
    if (c.renaming.size() != c.V.size()) throw Error("invalid certificate: renaming is not a bijection onto V");
    std::vector<std::string> image;
    for (const auto& [fresh, var] : c.renaming) image.push_back(var);
    if (VarSet(image) != c.V) throw Error("invalid certificate: renaming is not a bijection onto V");
}

inline std::vector<CorrespondenceTriple> minimal_prime_correspondence(const FactorizationCertificate& c) {
    std::vector<CorrespondenceTriple> out;
    for (const auto& q : c.Qf) out.push_back({set_union(c.A1, q), set_union(c.A2, q), q});
    return out;
}

/// Ring T / (Q1 n Q2) = base[[U]] / ((A1) n (A2)).
inline TowerRing quotient_by_designated(const TowerRing& ring, const FactorizationCertificate& c) {
    TowerRing t = make_ring(ring.name + "/(Q1nQ2)", ring.base, c.U, {c.A1, c.A2}, ring.level);
    t.flags = ring.flags;
    t.flags.domain = false;
    t.flags.complete = ring.flags.complete;
    return t;
}

struct Conclusion {
    bool holds = false;
    nlohmann::json witness;
    std::string justification;
};

/// One entry per conclusion of the positive-height gluing theorem.
struct ConclusionsLedger {
    Conclusion completion_preserved;
    Conclusion cardinality;
    Conclusion primes_glued;
    Conclusion catenary_at_glued_prime;
    Conclusion presentation;
    Conclusion positive_height_bijection;
    Conclusion coheight_pairing;
    Conclusion quasi_excellence;

    bool all_hold() const {
        return completion_preserved.holds && cardinality.holds && primes_glued.holds &&
               catenary_at_glued_prime.holds && presentation.holds && positive_height_bijection.holds &&
               coheight_pairing.holds && quasi_excellence.holds;
    }
};

inline void to_json(nlohmann::json& j, const Conclusion& c) {
    j = {{"holds", c.holds}, {"witness", c.witness}, {"justification", c.justification}};
}

inline void to_json(nlohmann::json& j, const ConclusionsLedger& l) {
    j = {{"completion_preserved", l.completion_preserved},
         {"cardinality", l.cardinality},
         {"primes_glued", l.primes_glued},
         {"catenary_at_glued_prime", l.catenary_at_glued_prime},
         {"presentation", l.presentation},
         {"positive_height_bijection", l.positive_height_bijection},
         {"coheight_pairing", l.coheight_pairing},
         {"quasi_excellence", l.quasi_excellence}};
}

struct GluingResult {
    TowerRing ring;
    ConclusionsLedger ledger;
};

/// Glues Q1 and Q2: the result is R'[[V]] / (n Qf) where R' is the domain
/// obtained from Tbar by gluing its two minimal primes.
inline GluingResult apply_gluing(const TowerRing& ring, const FactorizationCertificate& c, std::string name,
                                 std::string base_name) {
    validate_certificate(ring, c);
    for (auto [value, flag] : {std::pair{ring.flags.contains_rationals, "contains_rationals"},
                               std::pair{ring.flags.uncountable, "uncountable"},
                               std::pair{ring.flags.card_eq_residue, "card_eq_residue"}})
        if (!value) throw Error(std::string("hypothesis failed: ") + flag);

    const TowerRing tbar = quotient_by_designated(ring, c);
    BaseDomain glued;
    glued.kind = BaseKind::glued;
    glued.name = std::move(base_name);
    glued.dim = dim(tbar);
    glued.spec_shape = glue_base_shape(tbar, c.V);
    glued.flags.domain = true;
    glued.flags.reduced = true;
    glued.flags.contains_rationals = true;
    glued.flags.uncountable = true;
    glued.flags.card_eq_residue = true;
    glued.flags.quasi_excellent = ring.flags.quasi_excellent;
    glued.flags.complete = false;

    std::vector<VarPrime> members(c.Qf.begin(), c.Qf.end());
    TowerRing out = make_ring(std::move(name), glued, c.V, std::move(members), ring.level + 1);
    out.flags.catenary_at.push_back({c.V, "regular local ring at the glued prime"});

    ConclusionsLedger l;
    l.completion_preserved = {true, {{"completion_of", ring.name}}, "holds by theorem"};
    l.cardinality = {out.flags.card_eq_residue, {{"card_eq_residue", out.flags.card_eq_residue}}, "holds by theorem"};
    l.primes_glued = {true, {{"glued_prime", c.V.vars()}, {"Q1", c.Q1.vars()}, {"Q2", c.Q2.vars()}},
                      "both designated primes contract to the prime generated by V"};
    l.catenary_at_glued_prime = {true, {{"prime", c.V.vars()}}, "regular local ring at the glued prime"};
    l.presentation = {true,
                      {{"base", out.base.name}, {"base_dim", out.base.dim}, {"vars", c.V.vars()},
                       {"family", family_json(c.Qf)}},
                      "holds by theorem"};
    const auto& shape = out.base.spec_shape;
    l.positive_height_bijection = {shape.maximal().size() == 1 && shape.minimal().size() == 1,
                                   {{"upper_nodes", shape.size()}, {"upper_covers", shape.cover_count()}},
                                   "drawn primes above the glued prime are those of Tbar of positive height"};
    bool pairing_ok = true;
    auto pairs = nlohmann::json::array();
    for (const auto& t : minimal_prime_correspondence(c)) {
        int before1 = localized_coheight(ring, t.over_q1, c.Q1);
        int before2 = localized_coheight(ring, t.over_q2, c.Q2);
        int after = localized_coheight(out, t.glued, c.V);
        pairing_ok = pairing_ok && before1 == after && before2 == after;
        pairs.push_back({{"over_q1", t.over_q1.vars()},
                         {"over_q2", t.over_q2.vars()},
                         {"glued", t.glued.vars()},
                         {"coheight", after}});
    }
    l.coheight_pairing = {pairing_ok, std::move(pairs), "coheight of each minimal prime below the designated prime"};
    l.quasi_excellence = {true, {{"quasi_excellent", out.flags.quasi_excellent}},
                          "propagated from the input ring; never turned on"};
    return {std::move(out), std::move(l)};
}

struct MinimalGluingResult {
    SpecPoset shape;
    PropertyFlags flags;
};

/// Glues minimal primes class by class. Terminal: the result is a poset and
/// flags, not a presentable ring.
inline MinimalGluingResult glue_minimal(const TowerRing& ring, const std::vector<std::vector<VarPrime>>& partition) {
    for (auto [value, flag] : {std::pair{ring.flags.reduced, "reduced"},
                               std::pair{ring.flags.contains_rationals, "contains_rationals"},
                               std::pair{ring.flags.uncountable, "uncountable"},
                               std::pair{ring.flags.card_eq_residue, "card_eq_residue"}})
        if (!value) throw Error(std::string("hypothesis failed: ") + flag);

    std::set<VarPrime> seen;
    for (const auto& cls : partition) {
        if (cls.empty()) throw Error("partition mismatch: empty class");
        for (const auto& q : cls) {
            if (!ring.family.contains(q)) throw Error("partition mismatch: " + q.str() + " is not a minimal prime");
            if (!seen.insert(q).second) throw Error("partition mismatch: " + q.str() + " listed twice");
        }
    }
    if (seen.size() != ring.family.size()) throw Error("partition mismatch: classes do not cover the family");

    SpecPoset shape = canonical_shape(ring);
    std::vector<std::pair<std::vector<NodeId>, Node>> groups;
    for (const auto& cls : partition) {
        if (cls.size() < 2) continue;
        std::vector<NodeId> ids;
        for (const auto& q : cls) ids.push_back(*shape.find(NodeLabel{q, ring.level}));
        groups.push_back({std::move(ids), Node{std::nullopt, Role::glued}});
    }
    MinimalGluingResult out;
    out.shape = groups.empty() ? shape : merge_nodes(shape, groups);
    out.flags.reduced = true;
    out.flags.contains_rationals = true;
    out.flags.uncountable = true;
    out.flags.card_eq_residue = true;
    out.flags.quasi_excellent = ring.flags.quasi_excellent;
    out.flags.domain = partition.size() == 1;
    out.flags.complete = false;
    return out;
}

inline nlohmann::json hypothesis_json(const HypothesisReport& r) {
    nlohmann::json j;
    j["ok"] = r.ok();
    j["certificate"] = r.certificate ? certificate_json(*r.certificate) : nlohmann::json(nullptr);
    auto alts = nlohmann::json::array();
    for (const auto& c : r.alternatives) alts.push_back(certificate_json(c));
    j["alternatives"] = std::move(alts);
    auto v = nlohmann::json::array();
    for (const auto& x : r.violations) v.push_back({{"kind", x.kind}, {"detail", x.detail}});
    j["violations"] = std::move(v);
    j["justifications"] = r.justifications;
    return j;
}

}  // namespace primeglue
