#include <catch_amalgamated.hpp>

#include "primeglue/canonical.hpp"
#include "primeglue/gluing.hpp"
#include "support.hpp"

using namespace primeglue;
using support::P;

namespace {

bool has_violation(const HypothesisReport& r, const std::string& kind) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::vector<VarPrime> members(const MinPrimeFamily& f) { return {f.begin(), f.end()}; }

}  // namespace

TEST_CASE("certificate for the eight-variable example") {
    auto t = support::example_2_4();
    auto r = check_gluing_hypotheses(t, support::example_2_4_q1(), support::example_2_4_q2());
    REQUIRE(r.ok());
    const auto& c = *r.certificate;
    CHECK(c.U == VarSet(support::names("x", 4)));
    CHECK(c.V == P({"x5", "x6", "x7", "x8"}));
    CHECK(c.A1 == P({"x1"}));
    CHECK(c.A2 == P({"x2", "x3"}));
    CHECK(members(c.Qf) == std::vector<VarPrime>{P({"x5"}), P({"x6", "x7"})});
    CHECK(r.alternatives.empty());
    std::vector<std::pair<std::string, std::string>> ren{{"y1", "x5"}, {"y2", "x6"}, {"y3", "x7"}, {"y4", "x8"}};
    CHECK(c.renaming == ren);
    CHECK(r.justifications.size() >= 2);
}

TEST_CASE("certificates for the twelve-variable example") {
    auto t = support::example_3_4();
    auto r = check_gluing_hypotheses(t, support::example_3_4_q1(), support::example_3_4_q2());
    REQUIRE(r.ok());
    CHECK(r.certificate->Qf.size() == 4);
    CHECK(members(r.certificate->Qf) == std::vector<VarPrime>{P({"y1", "z1"}), P({"y1", "z2", "z3"}),
                                                               P({"y2", "y3", "z1"}), P({"y2", "y3", "z2", "z3"})});
    auto t1 = apply_gluing(t, *r.certificate, "T1", "R1");
    CHECK(dim(t1.ring) == 9);
    CHECK(t1.ring.base.dim == 3);
    CHECK(t1.ring.vars.size() == 8);
    CHECK(t1.ring.flags.quasi_excellent);
    CHECK(t1.ledger.all_hold());

    auto r2 = check_gluing_hypotheses(t1.ring, P({"y1", "z1", "z2", "z3", "z4"}), P({"y2", "y3", "z1", "z2", "z3", "z4"}));
    REQUIRE(r2.ok());
    const auto& c2 = *r2.certificate;
    CHECK(c2.A1 == P({"y1"}));
    CHECK(c2.A2 == P({"y2", "y3"}));
    CHECK(c2.V == P({"z1", "z2", "z3", "z4"}));
    CHECK(members(c2.Qf) == std::vector<VarPrime>{P({"z1"}), P({"z2", "z3"})});
    auto b = apply_gluing(t1.ring, c2, "B", "R2");
    CHECK(b.ring.base.dim == 6);
    CHECK(b.ring.base.name == "R2");
    CHECK(b.ring.flags.quasi_excellent);
    CHECK(!b.ring.flags.complete);
    CHECK(b.ledger.all_hold());

    auto last = glue_minimal(b.ring, {{P({"z1"}), P({"z2", "z3"})}});
    CHECK(last.shape.size() == 13);
    CHECK(last.shape.cover_count() == 15);
    CHECK(last.flags.quasi_excellent);
    CHECK(last.flags.domain);
}

TEST_CASE("the glued ring of the eight-variable example") {
    auto t = support::example_2_4();
    auto r = check_gluing_hypotheses(t, support::example_2_4_q1(), support::example_2_4_q2());
    auto g = apply_gluing(t, *r.certificate, "B", "R1");
    CHECK(g.ring.base.kind == BaseKind::glued);
    CHECK(g.ring.base.dim == 3);
    CHECK(g.ring.vars == P({"x5", "x6", "x7", "x8"}));
    CHECK(members(g.ring.family) == std::vector<VarPrime>{P({"x5"}), P({"x6", "x7"})});
    CHECK(g.ring.level == 1);
    CHECK(dim(g.ring) == 6);
    CHECK(g.ring.flags.catenary_at.size() == 1);
    CHECK(g.ring.flags.catenary_at.front().prime == g.ring.vars);
    CHECK(g.ledger.coheight_pairing.holds);
    CHECK(g.ledger.coheight_pairing.witness.size() == 2);
    auto pairs = minimal_prime_correspondence(*r.certificate);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].over_q1 == P({"x1", "x5"}));
    CHECK(pairs[0].over_q2 == P({"x2", "x3", "x5"}));
    CHECK(pairs[0].glued == P({"x5"}));
    CHECK(pairs[1].over_q1 == P({"x1", "x6", "x7"}));
    CHECK(pairs[1].over_q2 == P({"x2", "x3", "x6", "x7"}));
    CHECK(pairs[1].glued == P({"x6", "x7"}));
}

TEST_CASE("degenerate box with the zero ideal below") {
    auto r = support::c_ring("S", {"a", "b", "v"}, {P({"a"}), P({"b"})});
    auto h = check_gluing_hypotheses(r, P({"a", "v"}), P({"b", "v"}));
    REQUIRE(h.ok());
    CHECK(h.certificate->V == P({"v"}));
    CHECK(members(h.certificate->Qf) == std::vector<VarPrime>{VarPrime{}});
    auto pairs = minimal_prime_correspondence(*h.certificate);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].over_q1 == P({"a"}));
    CHECK(pairs[0].over_q2 == P({"b"}));
    CHECK(pairs[0].glued.empty());
    auto g = apply_gluing(r, *h.certificate, "B", "R1");
    CHECK(g.ring.flags.domain);
    CHECK(g.ring.family.is_zero());
}

TEST_CASE("hypothesis violations are reported individually") {
    auto t = support::example_2_4();
    auto q1 = support::example_2_4_q1(), q2 = support::example_2_4_q2();
    CHECK(has_violation(check_gluing_hypotheses(t, q1, set_union(q1, P({"x2"}))), "comparable designated primes"));
    CHECK(has_violation(check_gluing_hypotheses(t, P({"x4"}), q2), "not a prime"));

    auto odd = support::c_ring("S", {"a", "b", "c", "v"}, {P({"a", "v"}), P({"b"}), P({"c", "v"})});
    auto r = check_gluing_hypotheses(odd, P({"a", "v", "b"}), P({"c", "v", "b"}));
    CHECK(has_violation(r, "no box-product factorization"));
    CHECK(!r.ok());

    auto q = make_ring("T", field_base("Q"), t.vars, members(t.family));
    auto rq = check_gluing_hypotheses(q, q1, q2);
    CHECK(has_violation(rq, "flag failure"));
    CHECK(rq.certificate.has_value());
    CHECK(!rq.ok());
    CHECK_THROWS_WITH(apply_gluing(q, *rq.certificate, "B", "R1"), "hypothesis failed: uncountable");
}

TEST_CASE("apply_gluing rejects a certificate that does not factor the ring") {
    auto t = support::example_2_4();
    auto c = *check_gluing_hypotheses(t, support::example_2_4_q1(), support::example_2_4_q2()).certificate;
    auto broken = c;
    broken.A1 = P({"x4"});
    CHECK_THROWS(apply_gluing(t, broken, "B", "R1"));
    broken = c;
    broken.renaming.pop_back();
    CHECK_THROWS(apply_gluing(t, broken, "B", "R1"));
    broken = c;
    broken.Qf = normalize_family({P({"x5"})});
    CHECK_THROWS(apply_gluing(t, broken, "B", "R1"));
}

TEST_CASE("glue_minimal checks flags and the partition") {
    auto t = support::c_ring("T", support::names("y", 4), {P({"y1"}), P({"y2", "y3"})});
    auto m = glue_minimal(t, {{P({"y1"}), P({"y2", "y3"})}});
    CHECK(m.shape.size() == 5);
    NodeId bottom = m.shape.minimal().front();
    CHECK(saturated_chain_lengths(m.shape, bottom, m.shape.top()) == std::vector<int>{2, 3});
    CHECK(m.flags.domain);
    CHECK(m.flags.quasi_excellent);

    auto id = glue_minimal(t, {{P({"y1"})}, {P({"y2", "y3"})}});
    CHECK(poset_iso(id.shape, canonical_shape(t)));
    CHECK(!id.flags.domain);

    CHECK_THROWS_WITH(glue_minimal(t, {{P({"y1"})}}), Catch::Matchers::StartsWith("partition mismatch"));
    CHECK_THROWS_WITH(glue_minimal(t, {{P({"y1"}), P({"y4"})}, {P({"y2", "y3"})}}),
                      Catch::Matchers::StartsWith("partition mismatch"));
    CHECK_THROWS_WITH(glue_minimal(t, {{P({"y1"}), P({"y1"}), P({"y2", "y3"})}}),
                      Catch::Matchers::StartsWith("partition mismatch"));
    auto q = make_ring("T", field_base("Q"), t.vars, members(t.family));
    CHECK_THROWS_WITH(glue_minimal(q, {{P({"y1"}), P({"y2", "y3"})}}), "hypothesis failed: uncountable");
    auto no_qe = t;
    no_qe.flags.quasi_excellent = false;
    CHECK(!glue_minimal(no_qe, {{P({"y1"}), P({"y2", "y3"})}}).flags.quasi_excellent);
}

TEST_CASE("random boxes: certificate round trip and conclusions") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        auto box = support::random_box(rng, 12, i % 2 == 1);
        auto h = check_gluing_hypotheses(box.ring, box.q1, box.q2);
        REQUIRE(h.ok());
        const auto& c = *h.certificate;
        CHECK(h.alternatives.empty());
        CHECK(c.V == set_intersection(box.q1, box.q2));
        CHECK(set_intersection(c.A1, c.A2).empty());
        if (set_intersection(box.A1, box.A2).empty()) {
            CHECK(c.A1 == box.A1);
            CHECK(c.A2 == box.A2);
            CHECK(members(c.Qf) == box.Qf);
        }
        std::set<VarPrime> rebuilt;
        for (const auto& t : minimal_prime_correspondence(c)) {
            rebuilt.insert(t.over_q1);
            rebuilt.insert(t.over_q2);
        }
        CHECK(rebuilt == std::set<VarPrime>(box.ring.family.begin(), box.ring.family.end()));

        auto g = apply_gluing(box.ring, c, "B", "R1");
        CHECK(2 * g.ring.family.size() == box.ring.family.size());
        CHECK(g.ledger.all_hold());
        for (const auto& t : minimal_prime_correspondence(c)) {
            int after = localized_coheight(g.ring, t.glued, g.ring.vars);
            CHECK(after == int(c.V.size() - t.glued.size()));
            CHECK(localized_coheight(box.ring, t.over_q1, c.Q1) == after);
            CHECK(localized_coheight(box.ring, t.over_q2, c.Q2) == after);
        }
        CHECK(g.ring.base.dim == dim(quotient_by_designated(box.ring, c)));
        // The base shape's longest chain is the base dimension.
        const auto& bs = g.ring.base.spec_shape;
        CHECK(saturated_chain_lengths(bs, bs.minimal().front(), bs.top()).back() == g.ring.base.dim);

        // glue_minimal keeps the positive-height part.
        std::vector<VarPrime> all(g.ring.family.begin(), g.ring.family.end());
        auto before = canonical_shape(g.ring);
        auto merged = glue_minimal(g.ring, {all});
        CHECK(merged.shape.size() == before.size() - (before.minimal().size() - 1));
        auto positive = [](const SpecPoset& s) {
            std::vector<bool> keep(s.size(), true);
            for (NodeId m : s.minimal()) keep[m] = false;
            return induced(s, keep);
        };
        CHECK(poset_iso(positive(merged.shape), positive(before)));
        CHECK(merged.flags.quasi_excellent == g.ring.flags.quasi_excellent);
    }
}

TEST_CASE("gluing triangle on the worked examples") {
    auto check = [](const TowerRing& t, const VarPrime& q1, const VarPrime& q2) {
        auto h = check_gluing_hypotheses(t, q1, q2);
        REQUIRE(h.ok());
        auto pre = preglue_shape(t, q1, q2);
        auto surgery = glue_surgery(pre, *h.certificate, minimal_prime_correspondence(*h.certificate), t.level);
        auto glued = apply_gluing(t, *h.certificate, "B", "R1");
        CHECK(poset_iso(surgery, canonical_shape(glued.ring)));
        return glued.ring;
    };
    check(support::example_2_4(), support::example_2_4_q1(), support::example_2_4_q2());
    auto t1 = check(support::example_3_4(), support::example_3_4_q1(), support::example_3_4_q2());
    check(t1, P({"y1", "z1", "z2", "z3", "z4"}), P({"y2", "y3", "z1", "z2", "z3", "z4"}));
}

TEST_CASE("gluing triangle on random boxes") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 100; ++i) {
        auto box = support::random_box(rng, 12, i % 2 == 0);
        auto h = check_gluing_hypotheses(box.ring, box.q1, box.q2);
        REQUIRE(h.ok());
        auto pre = preglue_shape(box.ring, box.q1, box.q2);
        auto surgery = glue_surgery(pre, *h.certificate, minimal_prime_correspondence(*h.certificate), 0);
        auto canon = canonical_shape(apply_gluing(box.ring, *h.certificate, "B", "R1").ring);
        CHECK(poset_iso(surgery, canon));
        CHECK(poset_iso(surgery, canon, false));
    }
}
