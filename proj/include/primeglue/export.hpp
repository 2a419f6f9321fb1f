#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "primeglue/poset.hpp"

namespace primeglue {

inline nlohmann::json node_ref(const SpecPoset& p, NodeId id) {
    const auto& n = p.node(id);
    return {{"id", id}, {"label", n.label ? nlohmann::json(n.label->vars.str()) : nlohmann::json(nullptr)}};
}

/// {nodes:[{id,label,role,level}], covers:[[lo,hi]]}, ids ascending.
inline nlohmann::json poset_json(const SpecPoset& p) {
    nlohmann::json j;
    auto nodes = nlohmann::json::array();
    for (NodeId i = 0; i < p.size(); ++i) {
        const auto& n = p.node(i);
        nodes.push_back({{"id", i},
                         {"label", n.label ? nlohmann::json(n.label->vars.str()) : nlohmann::json(nullptr)},
                         {"role", role_name(n.role)},
                         {"level", n.label ? nlohmann::json(n.label->level) : nlohmann::json(nullptr)}});
    }
    j["nodes"] = std::move(nodes);
    auto covers = nlohmann::json::array();
    for (auto [lo, hi] : p.cover_pairs()) covers.push_back({lo, hi});
    j["covers"] = std::move(covers);
    return j;
}

/// Graphviz digraph drawn bottom-up. Anonymous primes are small filled dots;
/// named primes show their generating variables.
inline std::string poset_dot(const SpecPoset& p, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=BT;\n";
    out << "  node [shape=circle, style=filled, fillcolor=black, label=\"\", width=0.12, height=0.12, "
           "fixedsize=true];\n";
    for (NodeId i = 0; i < p.size(); ++i) {
        const auto& n = p.node(i);
        out << "  n" << i;
        if (n.label)
            out << " [shape=box, style=solid, fixedsize=false, label=\"" << n.label->vars.str() << "\", comment=\""
                << role_name(n.role) << "\"]";
        else
            out << " [comment=\"" << role_name(n.role) << "\"]";
        out << ";\n";
    }
    for (auto [lo, hi] : p.cover_pairs()) out << "  n" << lo << " -> n" << hi << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace primeglue
