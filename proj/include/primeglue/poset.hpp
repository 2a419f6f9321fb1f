#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primeglue/varset.hpp"

namespace primeglue {

using NodeId = std::size_t;

/// Covering relation of a finite poset, stored as sorted up/down adjacency.
/// Elements are 0..size()-1.
class Hasse {
public:
    std::size_t size() const noexcept { return up_.size(); }

    NodeId add_element() {
        up_.emplace_back();
        down_.emplace_back();
        return up_.size() - 1;
    }

    /// Duplicate covers are ignored.
    void add_cover(NodeId lo, NodeId hi) {
        if (lo == hi) throw Error("cover relation must join distinct elements");
        if (covers(lo, hi)) return;
        insert_sorted(up_.at(lo), hi);
        insert_sorted(down_.at(hi), lo);
    }

    void remove_cover(NodeId lo, NodeId hi) {
        std::erase(up_.at(lo), hi);
        std::erase(down_.at(hi), lo);
    }

    bool covers(NodeId lo, NodeId hi) const {
        const auto& u = up_.at(lo);
        return std::binary_search(u.begin(), u.end(), hi);
    }

    const std::vector<NodeId>& up(NodeId i) const { return up_.at(i); }
    const std::vector<NodeId>& down(NodeId i) const { return down_.at(i); }

    std::size_t cover_count() const {
        std::size_t n = 0;
        for (const auto& u : up_) n += u.size();
        return n;
    }

    /// All (lo, hi) cover pairs in lexicographic order.
    std::vector<std::pair<NodeId, NodeId>> cover_pairs() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (NodeId i = 0; i < size(); ++i)
            for (NodeId j : up_[i]) out.emplace_back(i, j);
        return out;
    }

    std::vector<NodeId> minimal() const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < size(); ++i)
            if (down_[i].empty()) out.push_back(i);
        return out;
    }

    std::vector<NodeId> maximal() const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < size(); ++i)
            if (up_[i].empty()) out.push_back(i);
        return out;
    }

    /// Elements >= a.
    std::vector<bool> up_set(NodeId a) const { return closure(a, up_); }
    /// Elements <= a.
    std::vector<bool> down_set(NodeId a) const { return closure(a, down_); }

    bool leq(NodeId a, NodeId b) const { return a == b || up_set(a)[b]; }
    bool less(NodeId a, NodeId b) const { return a != b && up_set(a)[b]; }

    /// Kahn order, ties broken by smallest id. Throws on a cycle.
    std::vector<NodeId> topological_order() const {
        std::vector<std::size_t> indeg(size());
        for (NodeId i = 0; i < size(); ++i) indeg[i] = down_[i].size();
        std::vector<NodeId> ready, order;
        for (NodeId i = 0; i < size(); ++i)
            if (indeg[i] == 0) ready.push_back(i);
        while (!ready.empty()) {
            auto it = std::min_element(ready.begin(), ready.end());
            NodeId v = *it;
            ready.erase(it);
            order.push_back(v);
            for (NodeId w : up_[v])
                if (--indeg[w] == 0) ready.push_back(w);
        }
        if (order.size() != size()) throw Error("relation contains a cycle");
        return order;
    }

    bool acyclic() const {
        try {
            topological_order();
            return true;
        } catch (const Error&) {
            return false;
        }
    }

    /// Drops every cover implied by a longer path.
    void reduce() {
        for (NodeId a = 0; a < size(); ++a) {
            std::vector<NodeId> drop;
            for (NodeId b : up_[a]) {
                for (NodeId c : up_[a]) {
                    if (c != b && up_set(c)[b]) {
                        drop.push_back(b);
                        break;
                    }
                }
            }
            for (NodeId b : drop) remove_cover(a, b);
        }
    }

    bool is_reduced() const {
        for (NodeId a = 0; a < size(); ++a)
            for (NodeId b : up_[a])
                for (NodeId c : up_[a])
                    if (c != b && up_set(c)[b]) return false;
        return true;
    }

    /// Longest chain below each element (its rank from the bottom).
    std::vector<int> depth_below() const {
        std::vector<int> d(size(), 0);
        for (NodeId v : topological_order())
            for (NodeId w : up_[v]) d[w] = std::max(d[w], d[v] + 1);
        return d;
    }

    /// Longest chain above each element.
    std::vector<int> depth_above() const {
        std::vector<int> d(size(), 0);
        auto order = topological_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            for (NodeId w : up_[*it]) d[*it] = std::max(d[*it], d[w] + 1);
        return d;
    }

private:
    static void insert_sorted(std::vector<NodeId>& v, NodeId x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    }

    std::vector<bool> closure(NodeId a, const std::vector<std::vector<NodeId>>& adj) const {
        std::vector<bool> seen(size(), false);
        std::vector<NodeId> stack{a};
        seen.at(a) = true;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    }

    std::vector<std::vector<NodeId>> up_;
    std::vector<std::vector<NodeId>> down_;
};

enum class Role { minimal, glued, all_adjoined, designated, maximal, anonymous };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::minimal: return "minimal";
        case Role::glued: return "glued";
        case Role::all_adjoined: return "all-adjoined";
        case Role::designated: return "designated";
        case Role::maximal: return "maximal";
        case Role::anonymous: return "anonymous";
    }
    return "anonymous";
}

/// A named prime: its generating variables and the tower level of the ring
/// it was named in.
struct NodeLabel {
    VarPrime vars;
    int level = 0;

    friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

struct Node {
    std::optional<NodeLabel> label;
    Role role = Role::anonymous;
};

/// Finite labeled poset modelling a distinguished partial prime spectrum.
class SpecPoset : public Hasse {
public:
    NodeId add_node(Node n) {
        nodes_.push_back(std::move(n));
        return add_element();
    }

    NodeId add_anonymous() { return add_node(Node{}); }

    const Node& node(NodeId i) const { return nodes_.at(i); }
    Node& node(NodeId i) { return nodes_.at(i); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    /// Joins lo up to hi by a fresh saturated chain with `length` cover edges.
    void add_chain(NodeId lo, NodeId hi, int length) {
        if (length < 1) throw Error("chain length must be positive");
        NodeId prev = lo;
        for (int i = 1; i < length; ++i) {
            NodeId mid = add_anonymous();
            add_cover(prev, mid);
            prev = mid;
        }
        add_cover(prev, hi);
    }

    std::optional<NodeId> find(const NodeLabel& label) const {
        for (NodeId i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].label && *nodes_[i].label == label) return i;
        return std::nullopt;
    }

    NodeId top() const {
        auto m = maximal();
        if (m.size() != 1) throw Error("poset does not have a unique maximal node");
        return m.front();
    }

    /// Throws unless the covers form a reduced, acyclic relation with exactly
    /// one maximal node.
    void validate() const {
        if (size() == 0) throw Error("empty poset");
        if (!acyclic()) throw Error("cover relation has a cycle");
        if (!is_reduced()) throw Error("cover relation contains a transitive edge");
        if (maximal().size() != 1) throw Error("poset must have exactly one maximal node");
    }

private:
    std::vector<Node> nodes_;
};

/// Identifies each group of nodes into a single node (placed at the group's
/// smallest id) and re-reduces the covers. Groups must be disjoint.
inline SpecPoset merge_nodes(const SpecPoset& p, const std::vector<std::pair<std::vector<NodeId>, Node>>& groups) {
    std::vector<std::optional<std::size_t>> group_of(p.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].first.empty()) throw Error("empty merge group");
        for (NodeId v : groups[g].first) {
            if (group_of.at(v)) throw Error("merge groups overlap");
            group_of[v] = g;
        }
    }
    std::vector<NodeId> rep(p.size());
    for (NodeId v = 0; v < p.size(); ++v)
        rep[v] = group_of[v] ? *std::min_element(groups[*group_of[v]].first.begin(), groups[*group_of[v]].first.end()) : v;

    SpecPoset out;
    std::vector<NodeId> new_id(p.size());
    for (NodeId v = 0; v < p.size(); ++v) {
        if (rep[v] != v) continue;
        new_id[v] = out.add_node(group_of[v] ? groups[*group_of[v]].second : p.node(v));
    }
    for (NodeId v = 0; v < p.size(); ++v) new_id[v] = new_id[rep[v]];
    for (auto [lo, hi] : p.cover_pairs())
        if (new_id[lo] != new_id[hi]) out.add_cover(new_id[lo], new_id[hi]);
    out.reduce();
    return out;
}

/// Subposet induced on the nodes with keep[v] set; covers between kept nodes
/// are retained. Only meaningful when the kept set is convex (e.g. an up-set).
inline SpecPoset induced(const SpecPoset& p, const std::vector<bool>& keep, std::vector<std::optional<NodeId>>* mapping = nullptr) {
    SpecPoset out;
    std::vector<std::optional<NodeId>> id(p.size());
    for (NodeId v = 0; v < p.size(); ++v)
        if (keep.at(v)) id[v] = out.add_node(p.node(v));
    for (auto [lo, hi] : p.cover_pairs())
        if (id[lo] && id[hi]) out.add_cover(*id[lo], *id[hi]);
    if (mapping) *mapping = std::move(id);
    return out;
}

/// A user-supplied finite poset, elements named by strings.
class FinitePoset : public Hasse {
public:
    NodeId element(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        names_.push_back(name);
        NodeId id = add_element();
        index_.emplace(name, id);
        return id;
    }

    std::optional<NodeId> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(NodeId i) const { return names_.at(i); }

    /// Records a < b. The relation is reduced to its covers by finalize().
    void relate(const std::string& a, const std::string& b) {
        NodeId x = element(a), y = element(b);
        add_cover(x, y);
    }

    void finalize() {
        if (!acyclic()) throw Error("poset relation contains a cycle");
        reduce();
    }

private:
    std::vector<std::string> names_;
    std::map<std::string, NodeId> index_;
};

}  // namespace primeglue
