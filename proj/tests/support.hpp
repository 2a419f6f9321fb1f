#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "primeglue/certificate.hpp"
#include "primeglue/gluing.hpp"
#include "primeglue/poset.hpp"
#include "primeglue/ring.hpp"
#include "primeglue/script.hpp"

namespace support {

using namespace primeglue;

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

inline FinitePoset fixture(const std::string& name) {
    return script::parse_poset(slurp(std::string(PRIMEGLUE_FIXTURES) + "/" + name));
}

inline std::string sample_path(const std::string& name) { return std::string(PRIMEGLUE_SAMPLES) + "/" + name; }

/// Unlabelled SpecPoset with the same covers, for structural comparison.
inline SpecPoset as_spec(const Hasse& x) {
    SpecPoset p;
    for (NodeId i = 0; i < x.size(); ++i) p.add_anonymous();
    for (auto [lo, hi] : x.cover_pairs()) p.add_cover(lo, hi);
    return p;
}

inline SpecPoset strip_labels(const SpecPoset& x) { return as_spec(x); }

inline VarPrime P(std::initializer_list<const char*> names) {
    std::vector<std::string> v(names.begin(), names.end());
    return VarPrime(std::move(v));
}

inline std::vector<std::string> names(const std::string& stem, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

inline TowerRing c_ring(const std::string& name, const std::vector<std::string>& vars,
                        std::vector<VarPrime> family) {
    return make_ring(name, field_base("C"), VarSet(vars), std::move(family));
}

inline TowerRing example_2_4() {
    return c_ring("T", names("x", 8),
                  {P({"x1", "x5"}), P({"x1", "x6", "x7"}), P({"x2", "x3", "x5"}), P({"x2", "x3", "x6", "x7"})});
}
inline VarPrime example_2_4_q1() { return P({"x1", "x5", "x6", "x7", "x8"}); }
inline VarPrime example_2_4_q2() { return P({"x2", "x3", "x5", "x6", "x7", "x8"}); }

inline TowerRing example_3_4() {
    std::vector<std::string> vars = names("x", 4);
    for (auto s : {"y", "z"})
        for (auto& v : names(s, 4)) vars.push_back(v);
    std::vector<VarPrime> fam;
    for (auto a : {P({"x1"}), P({"x2", "x3"})})
        for (auto b : {P({"y1"}), P({"y2", "y3"})})
            for (auto c : {P({"z1"}), P({"z2", "z3"})}) fam.push_back(set_union(set_union(a, b), c));
    return c_ring("T", vars, fam);
}
inline VarPrime example_3_4_q1() { return P({"x1", "y1", "y2", "y3", "y4", "z1", "z2", "z3", "z4"}); }
inline VarPrime example_3_4_q2() { return P({"x2", "x3", "y1", "y2", "y3", "y4", "z1", "z2", "z3", "z4"}); }

/// Runs the hypothesis check and applies the gluing; throws on violation.
inline GluingResult glue(const TowerRing& r, const VarPrime& q1, const VarPrime& q2, const std::string& name,
                         const std::string& base) {
    auto hyp = check_gluing_hypotheses(r, q1, q2);
    if (!hyp.ok()) throw std::runtime_error("hypotheses fail for " + r.name);
    return apply_gluing(r, *hyp.certificate, name, base);
}

/// The ring whose shape is the three-stage picture: two gluings of the
/// twelve-variable example.
inline TowerRing example_3_4_final() {
    auto t1 = glue(example_3_4(), example_3_4_q1(), example_3_4_q2(), "T1", "R1").ring;
    return glue(t1, P({"y1", "z1", "z2", "z3", "z4"}), P({"y2", "y3", "z1", "z2", "z3", "z4"}), "B", "R2").ring;
}

/// Every saturated-chain length from a to b by plain recursion over covers.
inline std::vector<int> brute_chain_lengths(const Hasse& p, NodeId a, NodeId b) {
    std::vector<int> out;
    std::function<void(NodeId, int)> walk = [&](NodeId v, int d) {
        if (v == b) {
            out.push_back(d);
            return;
        }
        for (NodeId w : p.up(v)) walk(w, d + 1);
    };
    walk(a, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Isomorphism by backtracking over all bijections (label-blind).
inline bool brute_iso(const Hasse& a, const Hasse& b) {
    if (a.size() != b.size() || a.cover_count() != b.cover_count()) return false;
    const std::size_t n = a.size();
    std::vector<NodeId> f(n);
    std::vector<bool> used(n, false);
    std::function<bool(NodeId)> go = [&](NodeId i) {
        if (i == n) return true;
        for (NodeId j = 0; j < n; ++j) {
            if (used[j] || a.up(i).size() != b.up(j).size() || a.down(i).size() != b.down(j).size()) continue;
            bool ok = true;
            for (NodeId k = 0; k < i && ok; ++k)
                ok = a.covers(k, i) == b.covers(f[k], j) && a.covers(i, k) == b.covers(j, f[k]);
            if (!ok) continue;
            f[i] = j;
            used[j] = true;
            if (go(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return go(0);
}

/// A random box-product instance: disjoint U and V, incomparable A1, A2
/// inside U and a random antichain Qf of nonempty subsets of V.
struct BoxInstance {
    TowerRing ring;
    VarPrime q1, q2;
    VarSet A1, A2, V;
    std::vector<VarPrime> Qf;
};

inline std::vector<std::string> pick(std::mt19937_64& rng, const std::vector<std::string>& from, bool nonempty) {
    for (;;) {
        std::vector<std::string> out;
        for (const auto& v : from)
            if (rng() & 1) out.push_back(v);
        if (!nonempty || !out.empty()) return out;
    }
}

inline std::vector<VarPrime> random_antichain(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                              std::size_t max_members) {
    std::vector<VarPrime> out;
    const std::size_t want = 1 + rng() % max_members;
    for (int tries = 0; tries < 50 && out.size() < want; ++tries) {
        VarPrime c(pick(rng, vars, true));
        bool comparable = std::any_of(out.begin(), out.end(),
                                      [&](const VarPrime& m) { return m.subset_of(c) || c.subset_of(m); });
        if (!comparable) out.push_back(c);
    }
    return out;
}

/// With `overlap`, A1 and A2 may share variables.
inline BoxInstance random_box(std::mt19937_64& rng, int max_vars = 12, bool overlap = false) {
    for (;;) {
        const int nu = 2 + static_cast<int>(rng() % 4);
        const int nv = 1 + static_cast<int>(rng() % std::max(1, max_vars - nu));
        if (nu + nv > max_vars) continue;
        auto u = names("u", nu), v = names("v", nv);
        VarSet a1(pick(rng, u, true)), a2(pick(rng, u, true));
        if (a1.subset_of(a2) || a2.subset_of(a1)) continue;
        if (!overlap && !set_intersection(a1, a2).empty()) continue;
        auto qf = random_antichain(rng, v, 4);
        std::vector<VarPrime> fam;
        for (const auto& q : qf) {
            fam.push_back(set_union(a1, q));
            fam.push_back(set_union(a2, q));
        }
        std::vector<std::string> all(u);
        all.insert(all.end(), v.begin(), v.end());
        BoxInstance b{c_ring("T", all, fam), set_union(a1, VarSet(v)), set_union(a2, VarSet(v)), a1, a2, VarSet(v), qf};
        std::sort(b.Qf.begin(), b.Qf.end());
        return b;
    }
}

/// Raw family of up to `members` subsets (possibly comparable, possibly
/// empty) of x1..x<vars>.
inline std::vector<VarPrime> random_raw_family(std::mt19937_64& rng, int vars, int members) {
    auto v = names("x", vars);
    std::vector<VarPrime> out;
    const int n = 1 + static_cast<int>(rng() % members);
    for (int i = 0; i < n; ++i) out.emplace_back(pick(rng, v, rng() % 8 != 0));
    return out;
}

}  // namespace support
