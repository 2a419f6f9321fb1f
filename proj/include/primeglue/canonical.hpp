#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "primeglue/poset.hpp"

namespace primeglue {

namespace detail {

inline std::string node_key(const Node& n, bool use_labels) {
    if (!use_labels) return {};
    std::string key = role_name(n.role);
    if (n.label) key += "|" + n.label->vars.str() + "@" + std::to_string(n.label->level);
    return key;
}

/// Color refinement: a node's color absorbs the multisets of its upper and
/// lower cover colors until the partition stops splitting. Colors are dense
/// ranks of sorted signatures, so they are renaming-invariant.
inline std::vector<int> refine(const SpecPoset& p, std::vector<int> colors) {
    const std::size_t n = p.size();
    std::size_t classes = 0;
    for (;;) {
        std::vector<std::vector<int>> sig(n);
        for (NodeId v = 0; v < n; ++v) {
            std::vector<int> up, down;
            for (NodeId w : p.up(v)) up.push_back(colors[w]);
            for (NodeId w : p.down(v)) down.push_back(colors[w]);
            std::sort(up.begin(), up.end());
            std::sort(down.begin(), down.end());
            auto& s = sig[v];
            s.push_back(colors[v]);
            s.push_back(-1);
            s.insert(s.end(), up.begin(), up.end());
            s.push_back(-2);
            s.insert(s.end(), down.begin(), down.end());
        }
        std::vector<std::vector<int>> sorted(sig);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (NodeId v = 0; v < n; ++v)
            colors[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        if (sorted.size() == classes) return colors;
        classes = sorted.size();
    }
}

struct CanonSearch {
    const SpecPoset& poset;
    std::vector<std::string> keys;
    std::size_t leaves = 0;
    std::size_t leaf_cap;
    std::optional<std::string> best;

    std::string encode(const std::vector<int>& colors) const {
        const std::size_t n = poset.size();
        std::vector<NodeId> by_color(n);
        for (NodeId v = 0; v < n; ++v) by_color[colors[v]] = v;
        std::string out = "n=" + std::to_string(n) + ";";
        for (NodeId v : by_color) out += "[" + keys[v] + "]";
        std::vector<std::pair<int, int>> edges;
        for (auto [lo, hi] : poset.cover_pairs()) edges.emplace_back(colors[lo], colors[hi]);
        std::sort(edges.begin(), edges.end());
        out += ";";
        for (auto [a, b] : edges) out += std::to_string(a) + "<" + std::to_string(b) + ",";
        return out;
    }

    void run(std::vector<int> colors) {
        colors = refine(poset, std::move(colors));
        const std::size_t n = poset.size();
        std::vector<std::size_t> count(n, 0);
        for (int c : colors) ++count[c];
        auto cell = std::find_if(count.begin(), count.end(), [](std::size_t k) { return k > 1; });
        if (cell == count.end()) {
            if (++leaves > leaf_cap) throw Error("canonical form search exceeded its leaf cap");
            auto enc = encode(colors);
            if (!best || enc < *best) best = std::move(enc);
            return;
        }
        const int target = static_cast<int>(cell - count.begin());
        for (NodeId v = 0; v < n; ++v) {
            if (colors[v] != target) continue;
            std::vector<int> split(n);
            for (NodeId u = 0; u < n; ++u) split[u] = 2 * colors[u] + (u == v ? 0 : 1);
            run(std::move(split));
        }
    }
};

}  // namespace detail

/// Encoding invariant under renaming node ids. With use_labels, roles and
/// named-prime labels are part of the encoding; without, only the shape is.
inline std::string poset_canonical_form(const SpecPoset& p, bool use_labels = true, std::size_t leaf_cap = 1'000'000) {
    detail::CanonSearch search{p, {}, 0, leaf_cap, std::nullopt};
    for (const auto& n : p.nodes()) search.keys.push_back(detail::node_key(n, use_labels));
    std::vector<std::string> distinct(search.keys);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> colors;
    for (const auto& k : search.keys)
        colors.push_back(static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), k) - distinct.begin()));
    if (p.size() == 0) return "n=0;";
    search.run(std::move(colors));
    return *search.best;
}

inline bool poset_iso(const SpecPoset& a, const SpecPoset& b, bool use_labels = true) {
    if (a.size() != b.size() || a.cover_count() != b.cover_count()) return false;
    return poset_canonical_form(a, use_labels) == poset_canonical_form(b, use_labels);
}

}  // namespace primeglue
