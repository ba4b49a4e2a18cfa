#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "koszul/field.hpp"
#include "koszul/verify.hpp"

using koszul::Algebra;
using koszul::GradedModule;
using koszul::InputError;
using koszul::PrimeField;
using koszul::Quiver;
using koszul::Relation;
using koszul::RelationTerm;
using koszul::Subclaim;
using koszul::VerificationReport;
using koszul::Verdict;

namespace {

const PrimeField fp(32003);

Algebra<PrimeField> cubic_loop() {
    Quiver q({"1"}, {{"x", 0, 0}});
    return Algebra<PrimeField>::truncated_path_algebra(fp, q, 3, 14);
}

Algebra<PrimeField> two_loop_cubed() {
    Quiver q({"1"}, {{"x", 0, 0}, {"y", 0, 0}});
    return Algebra<PrimeField>::truncated_path_algebra(fp, q, 3, 10);
}

Algebra<PrimeField> triangle() {
    Quiver q({"1", "2", "3"}, {{"alpha", 0, 0}, {"beta", 0, 1}, {"gamma", 1, 2}});
    std::vector<Relation> rels = {Relation{{RelationTerm{1, 1, {0, 0, 0}}}},
                                  Relation{{RelationTerm{1, 1, {0, 1, 2}}}}};
    return Algebra<PrimeField>::path_algebra(fp, q, rels, 8);
}

Algebra<PrimeField> mixed_relations() {
    Quiver q({"1"}, {{"x", 0, 0}, {"y", 0, 0}});
    std::vector<Relation> rels = {Relation{{RelationTerm{1, 1, {0, 0}}}},
                                  Relation{{RelationTerm{1, 1, {0, 1}}}},
                                  Relation{{RelationTerm{1, 1, {1, 0}}}},
                                  Relation{{RelationTerm{1, 1, {1, 1, 1}}}}};
    return Algebra<PrimeField>::path_algebra(fp, q, rels, 10);
}

// (Omega^1 k)[-1], generalized d-koszul but not d-koszul generated
GradedModule<PrimeField> first_syzygy_shifted(const Algebra<PrimeField>& a) {
    auto res = minimal_resolution(trivial_module(a), 1, a.D());
    return shift(syzygy(res, 1), -1);
}

const Subclaim* find_sub(const VerificationReport& r, const std::string& needle) {
    for (const auto& s : r.subclaims)
        if (s.label.find(needle) != std::string::npos) return &s;
    return nullptr;
}

void check_all_pass(const VerificationReport& r) {
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.pass());
    CHECK(r.note.empty());
    for (const auto& h : r.hypotheses) {
        INFO(h.property);
        CHECK(h.holds);
    }
    for (const auto& s : r.subclaims) {
        INFO(s.label << " | " << s.evidence);
        CHECK(s.pass);
    }
}

}  // namespace

TEST_CASE("lemma 2.5 holds for the trivial module of truncated loops", "[verify]") {
    auto cubic = cubic_loop();
    auto rep = verify_lemma_2_5(cubic, trivial_module(cubic), 3, 6);
    check_all_pass(rep);
    CHECK(rep.claim == "lemma-2-5");
    CHECK(rep.d == 3);
    CHECK(rep.H == 6);
    CHECK(rep.H_E == 2);
    CHECK(rep.D == 12);
    CHECK(rep.field == "prime:32003");
    REQUIRE(rep.hypotheses.size() == 1);
    CHECK(rep.hypotheses[0].property == "d-koszul");
    REQUIRE(rep.subclaims.size() == 7);  // two for part (i), i = 0..4 for part (ii)
    CHECK(rep.subclaims[0].evidence ==
          "E^od(M) = [1, 1, 1], E^ev(Omega M) = [1, 1, 1]");
    CHECK(find_sub(rep, "(Omega^1 M)[-1]") != nullptr);
    CHECK(find_sub(rep, "(Omega^4 M)[-6]") != nullptr);

    auto two = two_loop_cubed();
    auto rep2 = verify_lemma_2_5(two, trivial_module(two), 3, 4);
    check_all_pass(rep2);
    CHECK(rep2.H_E == 1);
    CHECK(rep2.subclaims[0].evidence == "E^od(M) = [2, 16], E^ev(Omega M) = [2, 16]");
}

TEST_CASE("lemma 2.5 is vacuous on projectives", "[verify]") {
    auto a = cubic_loop();
    auto rep = verify_lemma_2_5(a, projective_module(a, {{0, 0}}), 3, 6);
    check_all_pass(rep);
    CHECK(rep.subclaims[0].evidence ==
          "E^od(M) = [0, 0, 0], E^ev(Omega M) = [0, 0, 0]");
}

TEST_CASE("lemma 2.5 gates on the module being d-koszul", "[verify]") {
    auto a = triangle();
    auto rep = verify_lemma_2_5(a, simple_module(a, 0), 3, 5);
    CHECK(rep.verdict == Verdict::precondition_failed);
    CHECK_FALSE(rep.pass());
    REQUIRE(rep.hypotheses.size() == 1);
    CHECK_FALSE(rep.hypotheses[0].holds);
    CHECK(rep.subclaims.empty());
    CHECK(rep.note.find("precondition failed") == 0);
    CHECK(rep.note.find("vertex 3, degree 5") != std::string::npos);
}

TEST_CASE("theorem 2.6 on radical layers of a projective", "[verify]") {
    auto two = two_loop_cubed();
    auto rep = verify_theorem_2_6(two, projective_module(two, {{0, 0}}), 3, 4);
    check_all_pass(rep);
    CHECK(rep.hypotheses.size() == 2);
    REQUIRE(rep.subclaims.size() == 5);  // part (i) for i = 1..3, part (ii) for n = 1..2
    CHECK(rep.subclaims[0].label == "part (i): (J^1 N)[-1] generalized d-koszul");
    // the dimension chain is nontrivial here: 8 at n = 1, 64 at n = 2
    const auto* n1 = find_sub(rep, "dim Ext^1(J^i N)_{3}");
    REQUIRE(n1 != nullptr);
    CHECK(n1->evidence == "dims across i: [8, 8]");
    const auto* n2 = find_sub(rep, "dim Ext^3(J^i N)_{6}");
    REQUIRE(n2 != nullptr);
    CHECK(n2->evidence == "dims across i: [64, 64]");
}

TEST_CASE("theorem 2.6 with the trivial module has zero radical layers", "[verify]") {
    auto cubic = cubic_loop();
    auto rep = verify_theorem_2_6(cubic, trivial_module(cubic), 3, 4);
    check_all_pass(rep);
    const auto* n1 = find_sub(rep, "dim Ext^1(J^i N)_{3}");
    REQUIRE(n1 != nullptr);
    CHECK(n1->evidence == "dims across i: [0, 0]");
}

TEST_CASE("exact sequence identities on the two-loop cube", "[verify]") {
    auto two = two_loop_cubed();

    SECTION("projective module, both sides nonzero") {
        auto rep = verify_exact_sequences(two, projective_module(two, {{0, 0}}), 3, 4);
        check_all_pass(rep);
        REQUIRE(rep.subclaims.size() == 5);  // (6) at n = 0..2, (8) at n = 0..1
        CHECK(rep.subclaims[1].evidence ==
              "dim Ext^2(N/JN)_{3} = 8, dim Ext^1(JN) + dim Ext^2(N) = 8 + 0");
        CHECK(rep.subclaims[3].evidence ==
              "dim Ext^1(J^2N/J^3N)_{3} = 8, dim Ext^0(J^3N) + dim Ext^1(JN) = 0 + 8");
    }
    SECTION("first syzygy shifted, JN side vanishes") {
        auto rep = verify_exact_sequences(two, first_syzygy_shifted(two), 3, 4);
        check_all_pass(rep);
        CHECK(rep.subclaims[1].evidence ==
              "dim Ext^2(N/JN)_{3} = 16, dim Ext^1(JN) + dim Ext^2(N) = 0 + 16");
    }
}

TEST_CASE("gmmz: even ext algebra is koszul and acts linearly", "[verify]") {
    auto cubic = cubic_loop();
    auto rep = verify_gmmz(cubic, trivial_module(cubic), 3, 3);
    check_all_pass(rep);
    CHECK(rep.H == 6);
    CHECK(rep.H_E == 3);
    CHECK(rep.D == 12);
    REQUIRE(rep.subclaims.size() == 3);
    CHECK(rep.subclaims[0].label == "E^ev(Lambda) is standardly graded");
    CHECK(rep.subclaims[1].evidence == "koszul-linear (d=2) holds up to (H=3, D=3)");
    CHECK(rep.subclaims[2].label == "E^ev(M) is a Koszul E^ev(Lambda)-module");

    auto two = two_loop_cubed();
    check_all_pass(verify_gmmz(two, trivial_module(two), 3, 2));
}

TEST_CASE("main theorem on a generalized but not d-koszul module", "[verify]") {
    auto two = two_loop_cubed();
    auto rep = verify_main_theorem(two, first_syzygy_shifted(two), 3, 2);
    check_all_pass(rep);
    REQUIRE(rep.subclaims.size() == 2);
    CHECK(rep.subclaims[1].label == "E^ev(M) is a Koszul E^ev(Lambda)-module");
    REQUIRE(rep.hypotheses.size() == 2);
    CHECK(rep.hypotheses[1].property == "generalized-d-koszul");

    auto cubic = cubic_loop();
    check_all_pass(verify_main_theorem(cubic, first_syzygy_shifted(cubic), 3, 2));
}

TEST_CASE("main theorem refuses an algebra that is not d-koszul", "[verify]") {
    auto mixed = mixed_relations();
    auto rep = verify_main_theorem(mixed, trivial_module(mixed), 3, 2);
    CHECK(rep.verdict == Verdict::precondition_failed);
    CHECK(rep.subclaims.empty());
    CHECK(rep.note.find("algebra must be d-koszul") != std::string::npos);

    auto tri = triangle();
    auto rep2 = verify_gmmz(tri, trivial_module(tri), 3, 2);
    CHECK(rep2.verdict == Verdict::precondition_failed);
    CHECK(rep2.note.find("vertex 3, degree 5") != std::string::npos);
}

TEST_CASE("corollary: odd ext module is koszul by either route", "[verify]") {
    auto cubic = cubic_loop();
    auto rep = verify_corollary(cubic, trivial_module(cubic), 3, 2);
    check_all_pass(rep);
    CHECK(rep.H == 5);
    CHECK(rep.D == 10);
    REQUIRE(rep.subclaims.size() == 4);
    CHECK(rep.subclaims[2].evidence ==
          "E^od(M) = [1, 1, 1], E^ev((Omega M)[-1]) = [1, 1, 1]");

    auto two = two_loop_cubed();
    auto rep2 = verify_corollary(two, trivial_module(two), 3, 2);
    check_all_pass(rep2);
    CHECK(rep2.subclaims[2].evidence ==
          "E^od(M) = [2, 16, 128], E^ev((Omega M)[-1]) = [2, 16, 128]");
}

TEST_CASE("corollary is vacuous on projectives", "[verify]") {
    auto a = cubic_loop();
    auto rep = verify_corollary(a, projective_module(a, {{0, 0}}), 3, 2);
    check_all_pass(rep);
    CHECK(rep.subclaims[2].evidence ==
          "E^od(M) = [0, 0, 0], E^ev((Omega M)[-1]) = [0, 0, 0]");
}

TEST_CASE("verification reports are deterministic", "[verify]") {
    auto a = cubic_loop();
    auto r1 = verify_gmmz(a, trivial_module(a), 3, 2);
    auto r2 = verify_gmmz(a, trivial_module(a), 3, 2);
    CHECK(r1.claim == r2.claim);
    CHECK(r1.instance == r2.instance);
    CHECK(r1.field == r2.field);
    CHECK(r1.H == r2.H);
    CHECK(r1.H_E == r2.H_E);
    CHECK(r1.D == r2.D);
    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.note == r2.note);
    CHECK(r1.subclaims == r2.subclaims);

    auto two = two_loop_cubed();
    auto s1 = verify_theorem_2_6(two, projective_module(two, {{0, 0}}), 3, 4);
    auto s2 = verify_theorem_2_6(two, projective_module(two, {{0, 0}}), 3, 4);
    CHECK(s1.subclaims == s2.subclaims);
}

TEST_CASE("verify ops validate their budgets", "[verify]") {
    auto a = cubic_loop();
    auto k = trivial_module(a);
    CHECK_THROWS_AS(verify_lemma_2_5(a, k, 3, 2), InputError);
    CHECK_THROWS_AS(verify_theorem_2_6(a, k, 3, 3), InputError);
    CHECK_THROWS_AS(verify_gmmz(a, k, 3, 0), InputError);
    CHECK_THROWS_AS(verify_main_theorem(a, k, 3, 0), InputError);
    CHECK_THROWS_AS(verify_corollary(a, k, 3, 0), InputError);
}
