#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/varset.hpp"

namespace primeglue {

struct CatenaryClaim {
    VarPrime prime;
    std::string justification;

    friend bool operator==(const CatenaryClaim&, const CatenaryClaim&) = default;
};

/// Symbolic ledger of ring properties. These are assertions set by a
/// constructor or propagated by a gluing step; nothing here is recomputed.
struct PropertyFlags {
    bool contains_rationals = false;
    bool uncountable = false;
    bool card_eq_residue = false;  // |T| = |T/M|
    bool reduced = true;
    bool domain = false;
    bool quasi_excellent = false;
    bool complete = false;
    std::vector<CatenaryClaim> catenary_at;

    friend bool operator==(const PropertyFlags&, const PropertyFlags&) = default;
};

/// Defaults for the field symbols C, R and Q. Any other symbol gets all-false
/// set-theoretic flags.
inline PropertyFlags field_defaults(std::string_view symbol) {
    PropertyFlags f;
    f.domain = true;
    if (symbol == "C" || symbol == "R") {
        f.contains_rationals = true;
        f.uncountable = true;
        f.card_eq_residue = true;
    } else if (symbol == "Q") {
        f.contains_rationals = true;
    }
    return f;
}

inline const std::vector<std::string_view>& flag_names() {
    static const std::vector<std::string_view> names = {
        "contains_rationals", "uncountable", "card_eq_residue", "reduced",
        "domain",             "quasi_excellent", "complete"};
    return names;
}

inline bool& flag_ref(PropertyFlags& f, std::string_view name) {
    if (name == "contains_rationals") return f.contains_rationals;
    if (name == "uncountable") return f.uncountable;
    if (name == "card_eq_residue") return f.card_eq_residue;
    if (name == "reduced") return f.reduced;
    if (name == "domain") return f.domain;
    if (name == "quasi_excellent") return f.quasi_excellent;
    if (name == "complete") return f.complete;
    throw Error("unknown flag '" + std::string(name) + "'");
}

inline void to_json(nlohmann::json& j, const PropertyFlags& f) {
    j = nlohmann::json::object();
    j["contains_rationals"] = f.contains_rationals;
    j["uncountable"] = f.uncountable;
    j["card_eq_residue"] = f.card_eq_residue;
    j["reduced"] = f.reduced;
    j["domain"] = f.domain;
    j["quasi_excellent"] = f.quasi_excellent;
    j["complete"] = f.complete;
    auto cat = nlohmann::json::array();
    for (const auto& c : f.catenary_at)
        cat.push_back({{"prime", c.prime.vars()}, {"justification", c.justification}});
    j["catenary_at"] = std::move(cat);
}

}  // namespace primeglue
