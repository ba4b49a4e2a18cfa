#include <catch2/catch_amalgamated.hpp>

#include <tuple>
#include <vector>

#include "koszul/field.hpp"
#include "koszul/resolution.hpp"

using koszul::Algebra;
using koszul::BudgetError;
using koszul::GradedMap;
using koszul::GradedModule;
using koszul::InputError;
using koszul::Matrix;
using koszul::PrimeField;
using koszul::Quiver;
using koszul::Relation;
using koszul::RelationTerm;
using koszul::Resolution;
using koszul::ShortExactSequence;

using VP = std::vector<std::pair<int, int>>;

namespace {

const PrimeField fp(32003);

Algebra<PrimeField> triangle() {
    Quiver q({"1", "2", "3"}, {{"alpha", 0, 0}, {"beta", 0, 1}, {"gamma", 1, 2}});
    std::vector<Relation> rels = {Relation{{RelationTerm{1, 1, {0, 0, 0}}}},
                                  Relation{{RelationTerm{1, 1, {0, 1, 2}}}}};
    return Algebra<PrimeField>::path_algebra(fp, q, rels, 8);
}

Quiver loop_quiver() { return Quiver({"1"}, {{"x", 0, 0}}); }

Quiver two_loop_quiver() { return Quiver({"1"}, {{"x", 0, 0}, {"y", 0, 0}}); }

Quiver kronecker_quiver() { return Quiver({"1", "2"}, {{"a", 0, 1}, {"b", 0, 1}}); }

Quiver cycle3_quiver() {
    return Quiver({"1", "2", "3"}, {{"a0", 0, 1}, {"a1", 1, 2}, {"a2", 2, 0}});
}

Algebra<PrimeField> plane_algebra() {
    std::vector<Relation> rels = {
        Relation{{RelationTerm{1, 1, {0, 1}}, RelationTerm{-1, 1, {1, 0}}}}};
    return Algebra<PrimeField>::path_algebra(fp, two_loop_quiver(), rels, 6);
}

VP norm(VP v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        return std::tie(x.second, x.first) < std::tie(y.second, y.first);
    });
    return v;
}

}  // namespace

TEST_CASE("resolving the simple at the looped vertex", "[resolve]") {
    auto a = triangle();
    auto res = minimal_resolution(simple_module(a, 0), 8, 13);
    REQUIRE(res.homological_bound() == 8);
    REQUIRE(res.degree_bound() == 13);
    REQUIRE(res.claimed_minimal());

    CHECK(res.generators(0) == VP{{0, 0}});
    CHECK(res.generators(1) == VP{{0, 1}, {1, 1}});
    CHECK(res.generators(2) == VP{{0, 3}, {2, 3}});
    CHECK(res.generators(3) == VP{{0, 4}, {2, 5}});
    CHECK(res.generators(4) == VP{{0, 6}, {2, 6}});
    CHECK(res.generators(5) == VP{{0, 7}, {2, 8}});
    CHECK(res.generators(6) == VP{{0, 9}, {2, 9}});
    CHECK(res.generators(7) == VP{{0, 10}, {2, 11}});
    CHECK(res.generators(8) == VP{{0, 12}, {2, 12}});

    std::string why;
    REQUIRE(res.verify(&why));

    auto om1 = syzygy(res, 1);
    std::vector<int> dims;
    for (int n = 0; n <= 4; ++n) dims.push_back(om1.dim(n));
    REQUIRE(dims == std::vector<int>{0, 2, 3, 1, 0});
    REQUIRE(syzygy(res, 0).dim(0) == 1);

    // the fourth syzygy repeats the second, three degrees up
    auto iso = graded_iso(syzygy(res, 4), shift(syzygy(res, 2), 3), 13);
    REQUIRE(iso.has_value());
    REQUIRE(iso->validate(13));

    REQUIRE_THROWS_AS(syzygy(res, 9), InputError);
    REQUIRE_THROWS_AS(res.generators(9), InputError);
    REQUIRE_THROWS_AS(minimal_resolution(simple_module(a, 0), -1, 5), InputError);
}

TEST_CASE("projectives and covered simples resolve at once", "[resolve]") {
    auto a = triangle();

    auto res3 = minimal_resolution(simple_module(a, 2), 3, 6);
    REQUIRE(res3.generators(0) == VP{{2, 0}});
    for (int i = 1; i <= 3; ++i) REQUIRE(res3.generators(i).empty());
    REQUIRE(res3.verify());

    auto resp = minimal_resolution(projective_module(a, {{0, 0}}), 3, 8);
    REQUIRE(resp.generators(0) == VP{{0, 0}});
    REQUIRE(resp.generators(1).empty());
    REQUIRE(resp.differential(0).at(2) == Matrix<PrimeField>::identity(fp, 3));
    REQUIRE(resp.verify());

    auto resz = minimal_resolution(projective_module(a, {}), 2, 5);
    for (int i = 0; i <= 2; ++i) REQUIRE(resz.generators(i).empty());
    REQUIRE(resz.verify());
}

TEST_CASE("truncated polynomial loops are periodic", "[resolve]") {
    auto a3 = Algebra<PrimeField>::truncated_path_algebra(fp, loop_quiver(), 3, 8);
    auto res = minimal_resolution(trivial_module(a3), 5, 8);
    const std::vector<int> degs = {0, 1, 3, 4, 6, 7};
    for (int i = 0; i <= 5; ++i) REQUIRE(res.generators(i) == VP{{0, degs[i]}});
    REQUIRE(res.verify());

    auto a2 = Algebra<PrimeField>::truncated_path_algebra(fp, loop_quiver(), 2, 6);
    auto res2 = minimal_resolution(trivial_module(a2), 5, 6);
    for (int i = 0; i <= 5; ++i) REQUIRE(res2.generators(i) == VP{{0, i}});
    REQUIRE(res2.verify());
}

TEST_CASE("two loops double up each even step", "[resolve]") {
    auto a = Algebra<PrimeField>::truncated_path_algebra(fp, two_loop_quiver(), 3, 8);
    auto res = minimal_resolution(trivial_module(a), 5, 8);
    const std::vector<int> counts = {1, 2, 8, 16, 64, 128};
    const std::vector<int> degs = {0, 1, 3, 4, 6, 7};
    for (int i = 0; i <= 5; ++i) {
        REQUIRE(static_cast<int>(res.generators(i).size()) == counts[i]);
        for (const auto& [v, s] : res.generators(i)) {
            REQUIRE(v == 0);
            REQUIRE(s == degs[i]);
        }
    }
    REQUIRE(res.verify());
}

TEST_CASE("cyclic quiver walks its vertices", "[resolve]") {
    auto a = Algebra<PrimeField>::truncated_path_algebra(fp, cycle3_quiver(), 3, 8);
    auto res = minimal_resolution(simple_module(a, 0), 5, 8);
    CHECK(res.generators(0) == VP{{0, 0}});
    CHECK(res.generators(1) == VP{{1, 1}});
    CHECK(res.generators(2) == VP{{0, 3}});
    CHECK(res.generators(3) == VP{{1, 4}});
    CHECK(res.generators(4) == VP{{0, 6}});
    CHECK(res.generators(5) == VP{{1, 7}});
    REQUIRE(res.verify());
}

TEST_CASE("hereditary algebras stop after one step", "[resolve]") {
    auto a = Algebra<PrimeField>::path_algebra(fp, kronecker_quiver(), {}, 4);
    auto res = minimal_resolution(trivial_module(a), 3, 4);
    REQUIRE(res.generators(0) == (VP{{0, 0}, {1, 0}}));
    REQUIRE(res.generators(1) == (VP{{1, 1}, {1, 1}}));
    REQUIRE(res.generators(2).empty());
    REQUIRE(res.generators(3).empty());
    REQUIRE(res.verify());
}

TEST_CASE("plane coordinate ring has global dimension two", "[resolve]") {
    auto a = plane_algebra();
    auto res = minimal_resolution(trivial_module(a), 3, 4);
    REQUIRE(res.generators(0) == VP{{0, 0}});
    REQUIRE(res.generators(1) == (VP{{0, 1}, {0, 1}}));
    REQUIRE(res.generators(2) == VP{{0, 2}});
    REQUIRE(res.generators(3).empty());
    REQUIRE(res.verify());

    // infinite-dimensional algebra: the window cannot outrun the truncation
    REQUIRE_THROWS_AS(minimal_resolution(trivial_module(a), 2, 7), BudgetError);
}

TEST_CASE("support floors dominate the trivial module's pattern", "[resolve]") {
    auto a = triangle();
    auto res_k = minimal_resolution(trivial_module(a), 3, 13);
    auto jm = radical_power(projective_module(a, {{0, 0}}), 1, 13).module;
    auto res_j = minimal_resolution(jm, 3, 13);
    for (int i = 0; i <= 3; ++i) {
        if (res_j.generators(i).empty()) continue;
        REQUIRE_FALSE(res_k.generators(i).empty());
        auto min_deg = [](const VP& v) {
            int m = v.front().second;
            for (const auto& [vx, s] : v) m = std::min(m, s);
            return m;
        };
        REQUIRE(min_deg(res_j.generators(i)) >= min_deg(res_k.generators(i)));
    }
}

TEST_CASE("horseshoe assembly over the radical sequence", "[resolve]") {
    auto a = triangle();
    auto m = direct_sum(simple_module(a, 0), projective_module(a, {{0, 0}}), 6);
    auto rad = radical_power(m, 1, 6);
    auto tp = top(m, 6);
    ShortExactSequence<PrimeField> ses{rad.inclusion, tp.projection};

    auto res_a = minimal_resolution(rad.module, 3, 6);
    auto res_c = minimal_resolution(tp.module, 3, 6);
    auto hs = horseshoe(ses, res_a, res_c);
    REQUIRE_FALSE(hs.claimed_minimal());
    std::string why;
    REQUIRE(hs.verify(&why));

    // generator multisets add up
    for (int i = 0; i <= 3; ++i) {
        VP both = res_a.generators(i);
        const auto& cg = res_c.generators(i);
        both.insert(both.end(), cg.begin(), cg.end());
        REQUIRE(norm(hs.generators(i)) == norm(both));
    }

    // minimizing the horseshoe output recovers the minimal generators; the last
    // step is omitted because its cancellations live one step further out
    auto res_b = minimal_resolution(m, 3, 6);
    auto mini = minimize(hs);
    for (int i = 0; i <= 2; ++i) REQUIRE(mini[i] == res_b.generators(i));

    // minimizing a minimal resolution changes nothing, top step included
    auto self_mini = minimize(res_b);
    for (int i = 0; i <= 3; ++i) REQUIRE(self_mini[i] == res_b.generators(i));
}

TEST_CASE("horseshoe with a zero end returns the other resolution", "[resolve]") {
    auto a = triangle();
    auto zero = std::make_shared<GradedModule<PrimeField>>(projective_module(a, {}));
    auto s1 = std::make_shared<GradedModule<PrimeField>>(densify(simple_module(a, 0), 0, 4));

    ShortExactSequence<PrimeField> ses;
    ses.inclusion.source = zero;
    ses.inclusion.target = s1;
    ses.projection.source = s1;
    ses.projection.target = s1;
    for (int n = 0; n <= 4; ++n)
        ses.projection.blocks.emplace(n, Matrix<PrimeField>::identity(fp, s1->dim(n)));

    auto res_a = minimal_resolution(*zero, 2, 4);
    auto res_c = minimal_resolution(*s1, 2, 4);
    auto hs = horseshoe(ses, res_a, res_c);
    for (int i = 0; i <= 2; ++i) REQUIRE(hs.generators(i) == res_c.generators(i));
    REQUIRE(hs.verify());
}

TEST_CASE("horseshoe rejects an inexact sequence", "[resolve]") {
    auto a = triangle();
    auto s1 = std::make_shared<GradedModule<PrimeField>>(densify(simple_module(a, 0), 0, 2));
    ShortExactSequence<PrimeField> ses;
    ses.inclusion.source = s1;
    ses.inclusion.target = s1;
    ses.projection.source = s1;
    ses.projection.target = s1;
    // identity on both sides: composite is nonzero, dimensions do not add up
    for (int n = 0; n <= 2; ++n) {
        ses.inclusion.blocks.emplace(n, Matrix<PrimeField>::identity(fp, s1->dim(n)));
        ses.projection.blocks.emplace(n, Matrix<PrimeField>::identity(fp, s1->dim(n)));
    }
    auto res = minimal_resolution(*s1, 1, 2);
    REQUIRE_THROWS_AS(horseshoe(ses, res, res), InputError);
}

TEST_CASE("chain map lifting", "[resolve]") {
    auto a = triangle();

    // identity over a projective lifts to literal identity blocks
    auto res_p = minimal_resolution(projective_module(a, {{0, 0}}), 2, 6);
    GradedMap<PrimeField> idp;
    idp.source = res_p.module_ptr();
    idp.target = res_p.module_ptr();
    for (int n = 0; n <= 6; ++n)
        idp.blocks.emplace(n, Matrix<PrimeField>::identity(fp, res_p.module().dim(n)));
    auto lifts = lift_chain_map(idp, res_p, res_p, 2);
    for (int n = 0; n <= 3; ++n)
        REQUIRE(lifts[0].at(n) == Matrix<PrimeField>::identity(fp, res_p.projective(0).dim(n)));

    // identity over a simple lifts to degreewise isomorphisms
    auto res_s = minimal_resolution(simple_module(a, 0), 3, 8);
    GradedMap<PrimeField> ids;
    ids.source = res_s.module_ptr();
    ids.target = res_s.module_ptr();
    Matrix<PrimeField> one = Matrix<PrimeField>::identity(fp, 1);
    ids.blocks.emplace(0, one);
    auto sl = lift_chain_map(ids, res_s, res_s, 3);
    for (int j = 0; j <= 3; ++j)
        for (int n = 0; n <= 8; ++n)
            REQUIRE(rank(sl[j].at(n)) == res_s.projective(j).dim(n));

    // the zero map lifts to zero
    GradedMap<PrimeField> zf;
    zf.source = res_s.module_ptr();
    zf.target = res_s.module_ptr();
    auto zl = lift_chain_map(zf, res_s, res_s, 2);
    for (int j = 0; j <= 2; ++j)
        for (int n = 0; n <= 8; ++n) REQUIRE(zl[j].at(n).is_zero());

    // lifting the radical inclusion: all squares commute
    auto m = densify(projective_module(a, {{0, 0}}), 0, 6);
    auto radm = radical_power(m, 1, 6);
    auto res_m = minimal_resolution(radm.module, 2, 6);
    auto res_n = minimal_resolution(m, 2, 6);
    auto rl = lift_chain_map(radm.inclusion, res_m, res_n, 2);
    for (int n = 0; n <= 6; ++n) {
        REQUIRE(res_n.differential(0).at(n).mul(rl[0].at(n)) ==
                radm.inclusion.at(n).mul(res_m.differential(0).at(n)));
        for (int j = 1; j <= 2; ++j)
            REQUIRE(res_n.differential(j).at(n).mul(rl[j].at(n)) ==
                    rl[j - 1].at(n).mul(res_m.differential(j).at(n)));
    }

    REQUIRE_THROWS_AS(lift_chain_map(radm.inclusion, res_m, res_n, 3), InputError);
}

namespace {

// Enables the process-wide cache for one test and wipes it on the way out,
// so no other test can observe a stale entry.
struct CacheGuard {
    CacheGuard() {
        auto& c = koszul::ResolutionCache<PrimeField>::instance();
        c.clear();
        c.set_enabled(true);
    }
    ~CacheGuard() {
        auto& c = koszul::ResolutionCache<PrimeField>::instance();
        c.set_enabled(false);
        c.set_verify(false);
        c.clear();
    }
};

}  // namespace

TEST_CASE("resolution cache replays stored steps", "[resolve][cache]") {
    CacheGuard guard;
    auto& cache = koszul::ResolutionCache<PrimeField>::instance();
    auto a = Algebra<PrimeField>::truncated_path_algebra(fp, two_loop_quiver(), 3, 8);
    const auto k = trivial_module(a);

    auto fresh = minimal_resolution(k, 4, 8);
    REQUIRE(cache.misses() == 1);
    REQUIRE(cache.size() == 1);

    auto replay = minimal_resolution(k, 4, 8);
    REQUIRE(cache.hits() == 1);

    for (int i = 0; i <= 4; ++i) {
        REQUIRE(replay.generators(i) == fresh.generators(i));
        REQUIRE(replay.differential(i).blocks == fresh.differential(i).blocks);
    }
    REQUIRE(replay.claimed_minimal());
    REQUIRE(replay.verify());

    // the replayed resolution has no stored kernels; syzygies recompute
    for (int i = 1; i <= 3; ++i) {
        auto s1 = syzygy(fresh, i);
        auto s2 = syzygy(replay, i);
        for (int n = 0; n <= 8; ++n) REQUIRE(s1.dim(n) == s2.dim(n));
    }
}

TEST_CASE("cache keys separate distinct requests", "[resolve][cache]") {
    auto a = Algebra<PrimeField>::truncated_path_algebra(fp, loop_quiver(), 3, 8);
    const auto k = trivial_module(a);
    const auto key = koszul::resolution_cache_key(k, 4, 8);
    REQUIRE(key.size() == 32);
    REQUIRE(koszul::resolution_cache_key(k, 5, 8) != key);
    REQUIRE(koszul::resolution_cache_key(k, 4, 7) != key);
    REQUIRE(koszul::resolution_cache_key(projective_module(a, {{0, 0}}), 4, 8) != key);

    auto b = Algebra<PrimeField>::truncated_path_algebra(fp, loop_quiver(), 2, 8);
    REQUIRE(koszul::resolution_cache_key(trivial_module(b), 4, 8) != key);
    REQUIRE(koszul::resolution_cache_key(trivial_module(a), 4, 8) == key);
}

TEST_CASE("cache verify mode recomputes and compares on hits", "[resolve][cache]") {
    CacheGuard guard;
    auto& cache = koszul::ResolutionCache<PrimeField>::instance();
    cache.set_verify(true);
    auto a = triangle();
    const auto s = simple_module(a, 0);

    auto first = minimal_resolution(s, 3, 8);
    auto second = minimal_resolution(s, 3, 8);
    REQUIRE(cache.hits() == 1);
    REQUIRE(cache.misses() == 1);  // the verify recomputation bypasses the lookup path
    for (int i = 0; i <= 3; ++i) REQUIRE(second.generators(i) == first.generators(i));
}

TEST_CASE("cache stays empty while disabled", "[resolve][cache]") {
    auto& cache = koszul::ResolutionCache<PrimeField>::instance();
    REQUIRE_FALSE(cache.enabled());
    auto a = triangle();
    auto res = minimal_resolution(trivial_module(a), 2, 8);
    REQUIRE(cache.size() == 0);
    REQUIRE(res.verify());
}
