#pragma once

#include <map>
#include <vector>

#include "primeglue/certificate.hpp"
#include "primeglue/chains.hpp"
#include "primeglue/poset.hpp"
#include "primeglue/ring.hpp"

// Distinguished partial spectra. Only the named primes (minimal primes,
// designated primes, the all-variables prime, the maximal ideal) and one
// anonymous saturated chain per drawn edge are modelled; every other prime is
// omitted. Anonymous nodes are never shared between chains.

namespace primeglue {

/// Role of the all-adjoined-variables prime in a ring's shape.
inline Role adjoined_role(const TowerRing& ring) {
    if (ring.base.spec_shape.size() == 1) return Role::maximal;
    return ring.base.kind == BaseKind::glued ? Role::glued : Role::all_adjoined;
}

namespace detail {

/// Copy of the base shape with its minimum relabelled as the prime generated
/// by all of the ring's variables. Returns the poset and that node.
inline std::pair<SpecPoset, NodeId> base_with_adjoined(const TowerRing& ring) {
    SpecPoset shape = ring.base.spec_shape;
    auto mins = shape.minimal();
    if (mins.size() != 1) throw Error("base shape of " + ring.base.name + " has no unique minimum");
    NodeId g = mins.front();
    shape.node(g) = Node{NodeLabel{ring.vars, ring.level}, adjoined_role(ring)};
    return {std::move(shape), g};
}

}  // namespace detail

/// Base shape on top, the all-variables prime g at its bottom, and one
/// anonymous chain of length |vars| - |q| from each minimal prime q up to g.
inline SpecPoset canonical_shape(const TowerRing& ring) {
    auto [shape, g] = detail::base_with_adjoined(ring);
    for (const auto& q : ring.family) {
        int len = static_cast<int>(ring.vars.size() - q.size());
        if (len == 0) continue;  // q is g itself
        NodeId n = shape.add_node(Node{NodeLabel{q, ring.level}, Role::minimal});
        shape.add_chain(n, g, len);
    }
    return shape;
}

/// The picture before gluing: Q1 and Q2 each hang below g by a chain of length
/// |vars \ Qi|, and each minimal prime P below Qi hangs below it by a chain of
/// length |Qi| - |P|. A P below both gets one node and two chains.
inline SpecPoset preglue_shape(const TowerRing& ring, const VarPrime& q1, const VarPrime& q2) {
    require_prime(ring, q1);
    require_prime(ring, q2);
    if (q1.subset_of(q2) || q2.subset_of(q1)) throw Error("comparable designated primes");
    auto [shape, g] = detail::base_with_adjoined(ring);
    std::map<VarPrime, NodeId> minimal_nodes;
    for (const auto* q : {&q1, &q2}) {
        NodeId qn = shape.add_node(Node{NodeLabel{*q, ring.level}, Role::designated});
        shape.add_chain(qn, g, static_cast<int>(ring.vars.size() - q->size()));
        for (const auto& p : min_primes_below(ring, *q)) {
            int len = static_cast<int>(q->size() - p.size());
            if (len == 0) continue;  // Qi is itself minimal
            auto it = minimal_nodes.find(p);
            if (it == minimal_nodes.end())
                it = minimal_nodes.emplace(p, shape.add_node(Node{NodeLabel{p, ring.level}, Role::minimal})).first;
            shape.add_chain(it->second, qn, len);
        }
    }
    return shape;
}

/// Shape of the glued domain R': the canonical shape of Tbar with its two
/// minimal nodes identified. Labels at Tbar's level are widened by `extra`
/// so that they name the corresponding primes of T (which contain V).
inline SpecPoset glue_base_shape(const TowerRing& tbar, const VarSet& extra) {
    SpecPoset shape = canonical_shape(tbar);
    for (NodeId v = 0; v < shape.size(); ++v) {
        auto& label = shape.node(v).label;
        if (label && label->level == tbar.level) label->vars = set_union(label->vars, extra);
    }
    auto mins = shape.minimal();
    return merge_nodes(shape, {{mins, Node{std::nullopt, Role::glued}}});
}

/// Gluing performed directly on the preglue picture: keep everything above Q1
/// or Q2, identify Q1 with Q2 as the glued prime (V at the next level), and
/// hang one chain per q in Qf whose length is read off the preglue poset.
/// Throws if the two chains a correspondence pair would merge differ.
inline SpecPoset glue_surgery(const SpecPoset& pre, const FactorizationCertificate& cert,
                              const std::vector<CorrespondenceTriple>& pairs, int level,
                              std::size_t chain_cap = default_chain_cap) {
    auto n1 = pre.find(NodeLabel{cert.Q1, level});
    auto n2 = pre.find(NodeLabel{cert.Q2, level});
    if (!n1 || !n2) throw Error("designated primes not found in preglue shape");

    auto chain_length = [&](const VarPrime& p, NodeId q) {
        auto pn = pre.find(NodeLabel{p, level});
        if (!pn) throw Error("minimal prime " + p.str() + " not found in preglue shape");
        if (*pn == q) return 0;
        auto lengths = saturated_chain_lengths(pre, *pn, q, chain_cap);
        if (lengths.front() != lengths.back()) throw Error("ungraded interval below a designated prime");
        return lengths.front();
    };
    std::vector<int> lengths;
    for (const auto& t : pairs) {
        int l1 = chain_length(t.over_q1, *n1);
        int l2 = chain_length(t.over_q2, *n2);
        if (l1 != l2) throw Error("paired minimal primes sit at different depths: " + t.glued.str());
        lengths.push_back(l1);
    }

    auto keep = pre.up_set(*n1);
    auto keep2 = pre.up_set(*n2);
    for (NodeId v = 0; v < pre.size(); ++v) keep[v] = keep[v] || keep2[v];
    std::vector<std::optional<NodeId>> id;
    SpecPoset upper = induced(pre, keep, &id);
    const NodeLabel glued_label{cert.V, level + 1};
    SpecPoset out = merge_nodes(upper, {{{*id[*n1], *id[*n2]}, Node{glued_label, Role::glued}}});
    NodeId m = *out.find(glued_label);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (lengths[i] == 0) continue;
        NodeId qn = out.add_node(Node{NodeLabel{pairs[i].glued, level + 1}, Role::minimal});
        out.add_chain(qn, m, lengths[i]);
    }
    return out;
}

}  // namespace primeglue
