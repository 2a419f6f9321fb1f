#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "primeglue/canonical.hpp"
#include "primeglue/chains.hpp"
#include "primeglue/embed.hpp"
#include "primeglue/export.hpp"
#include "primeglue/gluing.hpp"
#include "primeglue/oracle.hpp"
#include "primeglue/script.hpp"
#include "primeglue/shapes.hpp"

namespace primeglue {

/// `flag=value` for every declared ring, or `ring.flag=value` for one ring.
struct FlagAssertion {
    std::optional<std::string> ring;
    std::string flag;
    bool value = true;
};

inline FlagAssertion parse_flag_assertion(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos) throw Error("flag assertion needs name=value: " + text);
    FlagAssertion a;
    std::string lhs = text.substr(0, eq), rhs = text.substr(eq + 1);
    if (auto dot = lhs.find('.'); dot != std::string::npos) {
        a.ring = lhs.substr(0, dot);
        lhs = lhs.substr(dot + 1);
    }
    PropertyFlags probe;
    flag_ref(probe, lhs);  // rejects unknown names
    a.flag = lhs;
    if (rhs == "true" || rhs == "1")
        a.value = true;
    else if (rhs == "false" || rhs == "0")
        a.value = false;
    else
        throw Error("flag value must be true or false: " + text);
    return a;
}

struct RunOptions {
    bool strict_embed = false;
    std::size_t chain_cap = default_chain_cap;
    bool oracle = true;
    std::vector<FlagAssertion> flags;
    std::filesystem::path base_dir = ".";  // embed paths resolve against this
};

struct RunResult {
    nlohmann::json report;
    bool ok = true;
    std::map<std::string, std::string> files;  // file name -> contents
};

namespace detail {

struct Session {
    const RunOptions& opt;
    RunResult result;
    std::map<std::string, TowerRing> rings;
    std::map<std::string, SpecPoset> shapes;
    std::vector<std::pair<BaseDomain, int>> glued_bases;  // base, level
    std::map<std::string, std::vector<FactorizationCertificate>> certificates;  // by source ring

    const TowerRing& ring(const std::string& name) const {
        auto it = rings.find(name);
        if (it == rings.end()) throw Error("ring " + name + " is unavailable (an earlier step failed)");
        return it->second;
    }

    void assert_flags(TowerRing& r, bool declared) const {
        for (const auto& a : opt.flags) {
            if (a.ring ? *a.ring == r.name : declared) flag_ref(r.flags, a.flag) = a.value;
        }
    }

    void emit(const std::string& name, const SpecPoset& p) {
        result.files[name + ".json"] = poset_json(p).dump(2) + "\n";
        result.files[name + ".dot"] = poset_dot(p, name);
    }

    nlohmann::json oracle_report(const oracle::Report& r, bool& ok) const {
        ok = ok && r.pass;
        return r;
    }

    nlohmann::json catenary_json(const SpecPoset& p) const {
        auto c = is_catenary(p);
        nlohmann::json j{{"catenary", c.catenary}};
        if (c.witness) {
            auto lengths = saturated_chain_lengths(p, c.witness->lower, c.witness->upper, opt.chain_cap);
            j["witness"] = {{"lower", node_ref(p, c.witness->lower)},
                            {"upper", node_ref(p, c.witness->upper)},
                            {"lengths", {c.witness->shorter, c.witness->longer}},
                            {"chain_lengths", lengths}};
        }
        return j;
    }

    int longest_to_top(const SpecPoset& p, NodeId a) const {
        NodeId top = p.top();
        if (a == top) return 0;
        return saturated_chain_lengths(p, a, top, opt.chain_cap).back();
    }

    /// Compares chain lengths drawn in the canonical shape with the ring
    /// formulas, and asks the interval oracle about each minimal prime.
    nlohmann::json coheight_checks(const TowerRing& r, const SpecPoset& p, bool& ok) const {
        auto checks = nlohmann::json::array();
        auto g = p.find(NodeLabel{r.vars, r.level});
        if (!g) throw Error("all-variables prime missing from shape of " + r.name);
        auto record = [&](std::string what, const VarPrime& prime, nlohmann::json expected, nlohmann::json got) {
            bool pass = expected == got;
            ok = ok && pass;
            checks.push_back({{"check", std::move(what)},
                              {"prime", prime.vars()},
                              {"expected", expected},
                              {"got", got},
                              {"pass", pass}});
        };
        record("coheight", r.vars, coheight(r, r.vars), longest_to_top(p, *g));
        for (const auto& q : r.family) {
            auto n = p.find(NodeLabel{q, r.level});
            if (!n) throw Error("minimal prime " + q.str() + " missing from shape of " + r.name);
            std::vector<int> expected{localized_coheight(r, q, r.vars)};
            auto lengths = *n == *g ? std::vector<int>{0} : saturated_chain_lengths(p, *n, *g, opt.chain_cap);
            lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
            record("localized_coheight", q, expected, lengths);
            record("coheight", q, coheight(r, q), longest_to_top(p, *n));
        }
        return checks;
    }

    nlohmann::json interval_checks(const TowerRing& r, bool& ok) const {
        auto out = nlohmann::json::array();
        if (!opt.oracle) return out;
        for (const auto& q : r.family) {
            try {
                out.push_back(oracle_report(oracle::oracle_interval_graded(r, q, r.vars), ok));
            } catch (const oracle::Refused& e) {
                out.push_back({{"check", "interval_graded"}, {"prime", q.vars()}, {"refused", e.what()}});
            }
        }
        return out;
    }

    nlohmann::json lemma_check(const FactorizationCertificate& c, bool& ok) const {
        try {
            return oracle_report(oracle::oracle_lemma31(c), ok);
        } catch (const oracle::Refused& e) {
            return {{"check", "two_to_one_minimal_primes"}, {"refused", e.what()}};
        }
    }

    nlohmann::json minimal_prime_check(const std::vector<VarPrime>& raw, const MinPrimeFamily& f, bool& ok) const {
        try {
            return oracle_report(oracle::check_minimal_primes(raw, f), ok);
        } catch (const oracle::Refused& e) {
            return {{"check", "minimal_primes"}, {"refused", e.what()}};
        }
    }

    static std::vector<VarPrime> primes(const std::vector<script::VarList>& lists) {
        std::vector<VarPrime> out;
        for (const auto& l : lists) out.emplace_back(l);
        return out;
    }

    void step(const script::RingStmt& s, nlohmann::json& j, bool& ok) {
        BaseDomain base;
        int level = 0;
        if (s.base == "C" || s.base == "R" || s.base == "Q") {
            base = field_base(s.base);
        } else {
            std::size_t k = std::stoul(s.base.substr(1));
            if (k == 0 || k > glued_bases.size()) throw Error("glued base " + s.base + " is unavailable");
            std::tie(base, level) = glued_bases[k - 1];
        }
        std::vector<VarPrime> raw = s.family.empty() ? std::vector<VarPrime>{VarPrime{}} : primes(s.family);
        TowerRing r = make_ring(s.name, std::move(base), VarSet(s.vars), raw, level);
        assert_flags(r, true);
        j["ring"] = ring_json(r);
        if (opt.oracle) j["oracle"] = {minimal_prime_check(raw, r.family, ok)};
        rings.insert_or_assign(s.name, std::move(r));
    }

    void step(const script::GlueStmt& s, nlohmann::json& j, bool& ok) {
        const TowerRing& src = ring(s.source);
        const VarPrime q1(s.q1), q2(s.q2);
        auto hyp = check_gluing_hypotheses(src, q1, q2);
        j["hypotheses"] = hypothesis_json(hyp);
        if (!hyp.ok()) {
            ok = false;
            return;
        }
        const auto& cert = *hyp.certificate;
        const std::string base_name = script::glued_base_name(static_cast<int>(glued_bases.size()) + 1);
        auto glued = apply_gluing(src, cert, s.name, base_name);
        assert_flags(glued.ring, false);
        j["ledger"] = glued.ledger;
        ok = ok && glued.ledger.all_hold();
        j["ring"] = ring_json(glued.ring);

        // Gluing done on the preglue picture must agree with the shape of
        // the glued ring.
        const auto pre = preglue_shape(src, q1, q2);
        const auto surgery = glue_surgery(pre, cert, minimal_prime_correspondence(cert), src.level, opt.chain_cap);
        const auto canon = canonical_shape(glued.ring);
        const bool iso = poset_iso(surgery, canon);
        ok = ok && iso;
        j["triangle"] = {{"pass", iso},
                         {"surgery", {{"nodes", surgery.size()}, {"covers", surgery.cover_count()}}},
                         {"canonical", {{"nodes", canon.size()}, {"covers", canon.cover_count()}}}};
        if (opt.oracle) j["oracle"] = {lemma_check(cert, ok)};

        certificates[s.source].push_back(cert);
        glued_bases.emplace_back(glued.ring.base, glued.ring.level);
        rings.insert_or_assign(s.name, std::move(glued.ring));
    }

    void step(const script::GlueMinStmt& s, nlohmann::json& j, bool&) {
        const TowerRing& src = ring(s.source);
        std::vector<std::vector<VarPrime>> partition;
        for (const auto& cls : s.classes) partition.push_back(primes(cls));
        auto res = glue_minimal(src, partition);
        PropertyFlags flags = res.flags;
        for (const auto& a : opt.flags)
            if (a.ring && *a.ring == s.name) flag_ref(flags, a.flag) = a.value;
        j["flags"] = flags;
        j["shape"] = {{"nodes", res.shape.size()}, {"covers", res.shape.cover_count()}};
        j["catenarity"] = catenary_json(res.shape);
        emit(s.name, res.shape);
        shapes.insert_or_assign(s.name, std::move(res.shape));
    }

    void step(const script::ShapeStmt& s, nlohmann::json& j, bool& ok) {
        const TowerRing& r = ring(s.ring);
        auto shape = canonical_shape(r);
        shape.validate();
        j["shape"] = {{"nodes", shape.size()}, {"covers", shape.cover_count()}};
        j["catenarity"] = catenary_json(shape);
        j["coheight"] = coheight_checks(r, shape, ok);
        j["oracle"] = interval_checks(r, ok);
        emit(s.ring, shape);
    }

    void step(const script::PreshapeStmt& s, nlohmann::json& j, bool& ok) {
        const TowerRing& r = ring(s.ring);
        const VarPrime q1(s.q1), q2(s.q2);
        auto shape = preglue_shape(r, q1, q2);
        shape.validate();
        j["shape"] = {{"nodes", shape.size()}, {"covers", shape.cover_count()}};
        j["catenarity"] = catenary_json(shape);
        auto checks = nlohmann::json::array();
        for (const auto* q : {&q1, &q2}) {
            NodeId qn = *shape.find(NodeLabel{*q, r.level});
            NodeId g = *shape.find(NodeLabel{r.vars, r.level});
            auto above = saturated_chain_lengths(shape, qn, g, opt.chain_cap);
            nlohmann::json below = nlohmann::json::array();
            bool pass = above == std::vector<int>{static_cast<int>(r.vars.size() - q->size())};
            for (const auto& p : min_primes_below(r, *q)) {
                auto pn = shape.find(NodeLabel{p, r.level});
                if (!pn || *pn == qn) continue;
                auto lengths = saturated_chain_lengths(shape, *pn, qn, opt.chain_cap);
                pass = pass && lengths == std::vector<int>{localized_coheight(r, p, *q)};
                below.push_back({{"prime", p.vars()}, {"lengths", lengths}});
            }
            ok = ok && pass;
            checks.push_back({{"designated", q->vars()}, {"above", above}, {"below", below}, {"pass", pass}});
        }
        j["branches"] = std::move(checks);
        const std::string name = script::preshape_name(s.ring);
        emit(name, shape);
        shapes.insert_or_assign(name, std::move(shape));
    }

    void step(const script::EmbedStmt& s, nlohmann::json& j, bool& ok) {
        std::filesystem::path path = opt.base_dir / s.file;
        std::ifstream in(path);
        if (!in) throw Error("cannot read poset file " + s.file);
        std::stringstream buf;
        buf << in.rdbuf();
        const FinitePoset x = script::parse_poset(buf.str());

        SpecPoset target;
        if (auto it = shapes.find(s.target); it != shapes.end())
            target = it->second;
        else
            target = canonical_shape(ring(s.target));

        auto map_json = [&](const std::optional<std::vector<NodeId>>& f, bool strict) -> nlohmann::json {
            if (!f) return {{"found", false}};
            auto pairs = nlohmann::json::array();
            for (NodeId a = 0; a < x.size(); ++a) pairs.push_back({{"element", x.name(a)}, {"node", node_ref(target, (*f)[a])}});
            bool verified = is_chain_preserving_embedding(x, target, *f, EmbedOptions{strict});
            ok = ok && verified;
            return {{"found", true}, {"map", std::move(pairs)}, {"verified", verified}};
        };
        auto literal = embed(x, target, EmbedOptions{false});
        auto strict = embed(x, target, EmbedOptions{true});
        j["poset"] = {{"file", s.file}, {"elements", x.size()}, {"covers", x.cover_count()}};
        j["literal"] = map_json(literal, false);
        j["strict"] = map_json(strict, true);
        j["mode"] = opt.strict_embed ? "strict" : "literal";
        j["found"] = opt.strict_embed ? strict.has_value() : literal.has_value();
        j["modes_differ"] = literal.has_value() != strict.has_value();
    }

    void step(const script::VerifyStmt& s, nlohmann::json& j, bool& ok) {
        const TowerRing& r = ring(s.ring);
        auto checks = nlohmann::json::array();
        if (!opt.oracle) {
            j["skipped"] = "oracle disabled";
            return;
        }
        std::vector<VarPrime> members(r.family.begin(), r.family.end());
        checks.push_back(minimal_prime_check(members, r.family, ok));
        for (auto& c : interval_checks(r, ok)) checks.push_back(std::move(c));
        std::vector<FactorizationCertificate> certs;
        if (auto it = certificates.find(s.ring); it != certificates.end()) certs = it->second;
        if (s.at) {
            auto hyp = check_gluing_hypotheses(r, VarPrime(s.at->first), VarPrime(s.at->second));
            j["hypotheses"] = hypothesis_json(hyp);
            if (hyp.ok())
                certs.push_back(*hyp.certificate);
            else
                ok = false;
        }
        for (const auto& c : certs) checks.push_back(lemma_check(c, ok));
        j["oracle"] = std::move(checks);
    }

    void step(const script::ReportStmt&, nlohmann::json& j, bool&) {
        nlohmann::json flags = nlohmann::json::object();
        for (const auto& [name, r] : rings) flags[name] = r.flags;
        j["flags"] = std::move(flags);
    }
};

inline const char* statement_kind(const script::Statement& s) {
    static const char* names[] = {"ring", "glue", "gluemin", "shape", "preshape", "embed", "verify", "report"};
    return names[s.index()];
}

}  // namespace detail

/// Executes the script in order. A failing step is recorded and the run goes
/// on; later steps depending on its result fail with "unavailable".
inline RunResult run(const script::Script& script, const RunOptions& opt = {}) {
    detail::Session session{opt, {}, {}, {}, {}, {}};
    auto steps = nlohmann::json::array();
    for (std::size_t i = 0; i < script.statements.size(); ++i) {
        const auto& stmt = script.statements[i];
        nlohmann::json j;
        j["kind"] = detail::statement_kind(stmt);
        j["line"] = script.lines[i];
        j["statement"] = script::print(stmt);
        bool ok = true;
        try {
            std::visit([&](const auto& s) { session.step(s, j, ok); }, stmt);
        } catch (const Error& e) {
            j["error"] = e.what();
            ok = false;
        }
        j["ok"] = ok;
        session.result.ok = session.result.ok && ok;
        steps.push_back(std::move(j));
    }
    auto& report = session.result.report;
    report["steps"] = std::move(steps);
    nlohmann::json rings = nlohmann::json::object();
    for (const auto& [name, r] : session.rings) rings[name] = ring_json(r);
    report["rings"] = std::move(rings);
    report["options"] = {{"strict_embed", opt.strict_embed}, {"chain_cap", opt.chain_cap}, {"oracle", opt.oracle}};
    report["ok"] = session.result.ok;
    session.result.files["report.json"] = report.dump(2) + "\n";
    return std::move(session.result);
}

inline void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : result.files) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / name).string());
        out << contents;
    }
}

}  // namespace primeglue
