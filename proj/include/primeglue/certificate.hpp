#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/ring.hpp"
#include "primeglue/varset.hpp"

namespace primeglue {

/// Witness that a ring splits as Tbar[[V]] / I with the two designated primes
/// sitting over the two minimal primes of Tbar:
///   family = { A1 u q : q in Qf } u { A2 u q : q in Qf },  Qi = Ai u V.
struct FactorizationCertificate {
    VarSet U;
    VarSet V;
    VarSet A1;
    VarSet A2;
    MinPrimeFamily Qf;
    /// Fresh indeterminate name -> variable of V, in V's order.
    std::vector<std::pair<std::string, std::string>> renaming;
    VarPrime Q1;
    VarPrime Q2;
};

/// (A1 u q, A2 u q, q): two minimal primes on the unglued side collapsing to
/// one on the glued side.
struct CorrespondenceTriple {
    VarPrime over_q1;
    VarPrime over_q2;
    VarPrime glued;
};

inline std::vector<std::pair<std::string, std::string>> fresh_renaming(const VarSet& v) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 1;
    for (const auto& name : v) out.emplace_back("y" + std::to_string(i++), name);
    return out;
}

inline nlohmann::json certificate_json(const FactorizationCertificate& c) {
    nlohmann::json j;
    j["U"] = c.U.vars();
    j["V"] = c.V.vars();
    j["A1"] = c.A1.vars();
    j["A2"] = c.A2.vars();
    j["Qf"] = family_json(c.Qf);
    j["Q1"] = c.Q1.vars();
    j["Q2"] = c.Q2.vars();
    auto ren = nlohmann::json::array();
    for (const auto& [fresh, var] : c.renaming) ren.push_back({fresh, var});
    j["renaming"] = std::move(ren);
    return j;
}

}  // namespace primeglue
