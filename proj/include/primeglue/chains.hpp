#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "primeglue/poset.hpp"

namespace primeglue {

inline constexpr std::size_t default_chain_cap = 10'000;

class ChainCapExceeded : public Error {
public:
    using Error::Error;
};

/// Lengths (cover-edge counts) of all saturated chains from a to b, sorted.
/// Enumerates every chain; throws ChainCapExceeded past `cap` chains.
template <class P>
std::vector<int> saturated_chain_lengths(const P& poset, NodeId a, NodeId b, std::size_t cap = default_chain_cap) {
    if (!poset.less(a, b)) throw Error("saturated chains need a < b");
    const auto below_b = poset.down_set(b);
    std::vector<int> lengths;
    // Explicit DFS stack of (node, depth, next-child index).
    struct Frame {
        NodeId v;
        int depth;
        std::size_t next;
    };
    std::vector<Frame> stack{{a, 0, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.v == b) {
            lengths.push_back(f.depth);
            if (lengths.size() > cap)
                throw ChainCapExceeded("more than " + std::to_string(cap) + " saturated chains");
            stack.pop_back();
            continue;
        }
        const auto& up = poset.up(f.v);
        while (f.next < up.size() && !below_b[up[f.next]]) ++f.next;
        if (f.next == up.size()) {
            stack.pop_back();
            continue;
        }
        NodeId w = up[f.next++];
        int d = f.depth + 1;
        stack.push_back({w, d, 0});
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

struct CatenaryWitness {
    NodeId lower;
    NodeId upper;
    int shorter;
    int longer;
};

struct CatenaryResult {
    bool catenary = true;
    std::optional<CatenaryWitness> witness;
};

/// Catenary iff every comparable pair has a single saturated-chain length.
/// Uses shortest/longest path lengths per pair; the witness is the
/// noncatenary pair with the smallest longest chain, ties by node ids.
template <class P>
CatenaryResult is_catenary(const P& poset) {
    const std::size_t n = poset.size();
    const auto order = poset.topological_order();
    CatenaryResult result;
    constexpr int unset = -1;
    for (NodeId a = 0; a < n; ++a) {
        std::vector<int> lo(n, unset), hi(n, unset);
        lo[a] = hi[a] = 0;
        for (NodeId v : order) {
            if (lo[v] == unset) continue;
            for (NodeId w : poset.up(v)) {
                lo[w] = lo[w] == unset ? lo[v] + 1 : std::min(lo[w], lo[v] + 1);
                hi[w] = std::max(hi[w], hi[v] + 1);
            }
        }
        for (NodeId b = 0; b < n; ++b) {
            if (b == a || lo[b] == unset || lo[b] == hi[b]) continue;
            CatenaryWitness w{a, b, lo[b], hi[b]};
            if (!result.witness || w.longer < result.witness->longer ||
                (w.longer == result.witness->longer &&
                 std::pair(w.lower, w.upper) < std::pair(result.witness->lower, result.witness->upper))) {
                result.catenary = false;
                result.witness = w;
            }
        }
    }
    return result;
}

}  // namespace primeglue
