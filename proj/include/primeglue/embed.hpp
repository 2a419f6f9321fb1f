#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "primeglue/poset.hpp"

namespace primeglue {

struct EmbedOptions {
    /// Also require order reflection: f(a) <= f(b) implies a <= b.
    bool strict = false;
};

/// Checks that f is injective and sends every cover of x to a cover of y,
/// which is exactly "the image of every saturated chain is saturated".
template <class X, class Y>
bool is_chain_preserving_embedding(const X& x, const Y& y, const std::vector<NodeId>& f, EmbedOptions opt = {}) {
    if (f.size() != x.size()) return false;
    std::vector<NodeId> sorted(f);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (NodeId a = 0; a < x.size(); ++a) {
        if (f[a] >= y.size()) return false;
        for (NodeId b : x.up(a))
            if (!y.covers(f[a], f[b])) return false;
    }
    if (opt.strict) {
        for (NodeId a = 0; a < x.size(); ++a) {
            auto above = y.up_set(f[a]);
            auto x_above = x.up_set(a);
            for (NodeId b = 0; b < x.size(); ++b)
                if (above[f[b]] && !x_above[b]) return false;
        }
    }
    return true;
}

namespace detail {

template <class X, class Y>
struct EmbedSearch {
    const X& x;
    const Y& y;
    EmbedOptions opt;
    std::vector<NodeId> order;  // elements of x, each after all its lower covers
    std::vector<int> x_below, x_above, y_below, y_above;
    std::vector<std::vector<bool>> x_up_sets, y_up_sets;
    std::vector<std::optional<NodeId>> f;
    std::vector<bool> used;

    bool consistent(NodeId a, NodeId img) const {
        if (x_below[a] > y_below[img] || x_above[a] > y_above[img]) return false;
        for (NodeId b : x.down(a))
            if (f[b] && !y.covers(*f[b], img)) return false;
        for (NodeId b : x.up(a))
            if (f[b] && !y.covers(img, *f[b])) return false;
        if (opt.strict) {
            for (NodeId b = 0; b < x.size(); ++b) {
                if (!f[b] || b == a) continue;
                if (y_up_sets[img][*f[b]] && !x_up_sets[a][b]) return false;
                if (y_up_sets[*f[b]][img] && !x_up_sets[b][a]) return false;
            }
        }
        return true;
    }

    bool search(std::size_t k) {
        if (k == order.size()) return true;
        NodeId a = order[k];
        std::vector<NodeId> candidates;
        auto placed_down = std::find_if(x.down(a).begin(), x.down(a).end(), [&](NodeId b) { return f[b].has_value(); });
        if (placed_down != x.down(a).end()) {
            candidates = y.up(*f[*placed_down]);
        } else {
            for (NodeId v = 0; v < y.size(); ++v) candidates.push_back(v);
        }
        for (NodeId img : candidates) {
            if (used[img] || !consistent(a, img)) continue;
            f[a] = img;
            used[img] = true;
            if (search(k + 1)) return true;
            f[a].reset();
            used[img] = false;
        }
        return false;
    }
};

}  // namespace detail

/// Injective map from x into y preserving saturated chains, or nullopt when
/// the exhaustive backtracking search finds none. Elements of x are placed
/// bottom-up; candidates are pruned by longest-chain bounds above and below.
template <class X, class Y>
std::optional<std::vector<NodeId>> embed(const X& x, const Y& y, EmbedOptions opt = {}) {
    if (x.size() > y.size()) return std::nullopt;
    detail::EmbedSearch<X, Y> s{x, y, opt, x.topological_order(), x.depth_below(), x.depth_above(),
                                y.depth_below(), y.depth_above(), {}, {}, {}, {}};
    if (opt.strict) {
        for (NodeId a = 0; a < x.size(); ++a) s.x_up_sets.push_back(x.up_set(a));
        for (NodeId v = 0; v < y.size(); ++v) s.y_up_sets.push_back(y.up_set(v));
    }
    s.f.assign(x.size(), std::nullopt);
    s.used.assign(y.size(), false);
    if (!s.search(0)) return std::nullopt;
    std::vector<NodeId> out;
    for (const auto& v : s.f) out.push_back(*v);
    return out;
}

}  // namespace primeglue
