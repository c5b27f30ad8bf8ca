#include "helpers.hpp"

#include "quivermorse/quiver.hpp"
#include "quivermorse/random.hpp"

using namespace qm;
using namespace qmt;

namespace {

// Independent dimension count: sum over vertices, edges and relations of head/tail products.
FormDims count_forms(const Quiver& q, const RelationSet& r, const DimensionVector& v1, const DimensionVector& v2) {
    FormDims f;
    for (std::size_t k = 0; k < q.num_vertices(); ++k) f.hom0 += v1[k] * v2[k];
    for (const auto& e : q.edges()) f.hom1 += v1[e.head] * v2[e.tail];
    for (const auto& rel : r) f.rel += v1[rel.head] * v2[rel.tail];
    f.ringel = f.hom0 - f.hom1;
    f.ringel_R = f.ringel + f.rel;
    return f;
}

const Relation& by_id(const RelationSet& r, const std::string& id) {
    for (const auto& rel : r)
        if (rel.id == id) return rel;
    FAIL("missing relation " << id);
    throw 0;
}

std::map<std::string, cplx> terms_of(const Quiver& q, const Relation& r) {
    std::map<std::string, cplx> out;
    for (const auto& t : r.terms) out[path_name(q, t.path)] = t.coeff;
    return out;
}

} // namespace

TEST_CASE("quiver construction rejects malformed input") {
    CHECK(error_of([] { Quiver({"1", "1"}, {}); }) == ErrorCode::InvalidQuiver);
    CHECK(error_of([] { Quiver({"1"}, {{"a", "1", "2"}}); }) == ErrorCode::InvalidQuiver);
    CHECK(error_of([] { Quiver({"1"}, {{"a", "1", "1"}, {"a", "1", "1"}}); }) == ErrorCode::InvalidQuiver);
    CHECK(error_of([] { Quiver({"1"}, {}, std::string("inf")); }) == ErrorCode::InvalidQuiver);
    auto q = fixtures::jordan_base();
    CHECK(q.framing() == q.vertex_index("inf"));
    CHECK(error_of([&] { dv({1, 1, 1}).check_for(q); }) == ErrorCode::InvalidDimensionVector);
}

TEST_CASE("paths compose in application order and print in reverse") {
    auto j = fixtures::jordan();
    const auto& q = *j.quiver;
    auto p = make_path(q, {"abar", "a"});
    CHECK(path_name(q, p) == "a*abar");
    CHECK(p.tail(q) == q.vertex_index("1"));
    CHECK(p.head(q) == q.vertex_index("1"));
    CHECK(error_of([&] { make_path(q, {"a", "a"}); }) == ErrorCode::InvalidPath);
    CHECK(error_of([&] { make_path(q, {"nope"}); }).has_value());
}

TEST_CASE("relations validate endpoints, duplicates and coefficients") {
    auto j = fixtures::jordan();
    const auto& q = *j.quiver;
    auto set_of = [&](Relation r) { return [&q, r] { RelationSet(q, {r}); }; };
    CHECK(error_of(set_of(make_relation(q, "r", "inf", "1", {{1.0, {"B"}}}))) == ErrorCode::InvalidRelation);
    CHECK(error_of(set_of(make_relation(q, "r", "1", "1", {{1.0, {"B"}}, {2.0, {"B"}}}))) ==
          ErrorCode::InvalidRelation);
    CHECK(error_of(set_of(make_relation(q, "r", "1", "1", {{0.0, {"B"}}}))) == ErrorCode::InvalidRelation);
    auto ok = make_relation(q, "r", "1", "1", {{1.0, {"B"}}});
    CHECK_FALSE(error_of([&] { RelationSet(q, {ok, ok}); }) == std::nullopt);
}

TEST_CASE("dims_and_forms on the Jordan fixture") {
    auto j = fixtures::jordan();
    auto f = dims_and_forms(*j.quiver, j.relations, dv({1, 1}), dv({1, 1}));
    CHECK(f.hom0 == 2);
    CHECK(f.hom1 == 4);
    CHECK(f.rel == 2);
    CHECK(f.ringel == -2);
    CHECK(f.ringel_R == 0);

    auto g = dims_and_forms(*j.quiver, j.relations, dv({1, 1}), dv({1, 0}));
    CHECK(g.hom0 == 1);
    CHECK(g.hom1 == 3);
    CHECK(g.rel == 1);
    CHECK(g.ringel == -2);
    CHECK(g.ringel_R == -1);
}

TEST_CASE("dims_and_forms agrees with a direct count on random dimension vectors") {
    Rng rng(11, "forms");
    for (const char* name : {"jordan", "a1", "adhm", "handsaw3", "adhm-ext", "edgeless"}) {
        auto qr = fixtures::by_name(name);
        const auto& q = *qr.quiver;
        for (int t = 0; t < 20; ++t) {
            std::vector<int> a(q.num_vertices()), b(q.num_vertices());
            for (auto& x : a) x = rng.uniform_int(0, 4);
            for (auto& x : b) x = rng.uniform_int(0, 4);
            auto got = dims_and_forms(q, qr.relations, dv(a), dv(b));
            auto want = count_forms(q, qr.relations, dv(a), dv(b));
            CHECK(got.hom0 == want.hom0);
            CHECK(got.hom1 == want.hom1);
            CHECK(got.rel == want.rel);
            CHECK(got.ringel_R == want.ringel_R);
        }
    }
}

TEST_CASE("edgeless quiver: the Euler form is the dot product") {
    auto e = fixtures::edgeless();
    auto f = dims_and_forms(*e.quiver, e.relations, dv({2, 3}), dv({4, 5}));
    CHECK(f.ringel == 2 * 4 + 3 * 5);
    CHECK(f.hom1 == 0);
}

TEST_CASE("canonical central element") {
    auto q = fixtures::jordan_base();
    auto a = canonical_central(q, dv({2, 1}));
    CHECK(a[0] == rat(1));
    CHECK(a[1] == rat(-2));
    auto b = canonical_central(q, dv({1, 1}));
    CHECK(b[1] == rat(-1));
    auto c = canonical_central(q, dv({0, 1}));
    CHECK(c[0] == rat(1));
    CHECK(c[1] == rat(0));
    CHECK(is_admissible(c, dv({0, 1})));
}

TEST_CASE("slope data and induced central elements") {
    auto q = fixtures::jordan_base();
    auto alpha = canonical_central(q, dv({1, 1}));
    auto s = slope_data(alpha, dv({1, 1}));
    CHECK(s.degree == rat(0));
    CHECK(s.rank == 2);
    CHECK(s.slope == rat(0));
    CHECK(s.admissible);
    CHECK(slope_data(alpha, dv({1, 0})).slope == rat(1));
    CHECK(slope_data(alpha, dv({0, 1})).degree == rat(-1));
    CHECK(slope_data(alpha, dv({0, 1})).slope == rat(-1));

    auto a2 = canonical_central(q, dv({2, 1}));
    auto ind = induced_central(a2, dv({2, 1}), dv({1, 1}));
    CHECK(ind[0] == rat(3, 2));
    CHECK(ind[1] == rat(-3, 2));
    CHECK(is_admissible(ind, dv({1, 1})));
    CHECK(induced_central(a2, dv({2, 1}), dv({2, 1})) == a2);

    auto sub = induced_central(alpha, dv({1, 1}), dv({1, 0}));
    CHECK(sub[0] == rat(0));
    CHECK(sub[1] == rat(-2));
}

TEST_CASE("induced elements are admissible on every sub-dimension vector") {
    auto q = fixtures::jordan_base();
    for (int n = 1; n <= 4; ++n) {
        auto v = dv({n, 1});
        auto alpha = canonical_central(q, v);
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= 1; ++b) {
                if (a + b == 0) continue;
                CHECK(is_admissible(induced_central(alpha, v, dv({a, b})), dv({a, b})));
            }
    }
}

TEST_CASE("Nakajima doubles have complete quadratic relations") {
    for (const char* name : {"jordan", "a1"}) {
        auto qr = fixtures::by_name(name);
        auto c = relation_set_checks(*qr.quiver, qr.relations);
        CHECK(c.quadratic);
        CHECK(c.complete);
        CHECK(c.homogeneous);
    }
    auto a1 = fixtures::a1();
    const auto& q = *a1.quiver;
    auto r1 = terms_of(q, by_id(a1.relations, "r_1"));
    auto rinf = terms_of(q, by_id(a1.relations, "r_inf"));
    CHECK(r1.size() == 1);
    CHECK(r1.at("a*abar") == cplx(1.0));
    CHECK(rinf.size() == 1);
    CHECK(rinf.at("abar*a") == cplx(-1.0));

    auto j = fixtures::jordan();
    auto jr = terms_of(*j.quiver, by_id(j.relations, "r_1"));
    CHECK(jr.size() == 3);
    CHECK(jr.at("B*Bbar") == cplx(1.0));
    CHECK(jr.at("a*abar") == cplx(1.0));
    CHECK(jr.at("Bbar*B") == cplx(-1.0));
}

TEST_CASE("Nakajima double of an edgeless base has only empty relations") {
    auto qr = build_nakajima_double(Quiver({"1", "2"}, {}));
    for (const auto& r : qr.relations) CHECK(r.terms.empty());
}

TEST_CASE("an extra relation through the same trailing edge breaks completeness") {
    auto j = fixtures::jordan();
    const auto& q = *j.quiver;
    auto rels = j.relations.relations();
    rels.push_back(make_relation(q, "r_extra", "1", "1", {{1.0, {"Bbar", "B"}}}));
    auto c = relation_set_checks(q, RelationSet(q, rels));
    CHECK_FALSE(c.complete);
    bool witnessed = false;
    for (const auto& w : c.witnesses)
        if (w.check == "complete" && w.clause == "2" && (w.edge == "B" || w.edge == "Bbar")) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("handsaw quivers") {
    auto h3 = build_handsaw(3);
    CHECK(h3.relations.size() == 1);
    for (const auto& r : h3.relations) CHECK(r.terms.size() == 3);
    CHECK(build_handsaw(2).relations.size() == 0);
    CHECK(build_handsaw(4).quiver->num_edges() == 11);
    for (int n : {3, 4, 5}) {
        auto h = build_handsaw(n);
        auto c = relation_set_checks(*h.quiver, h.relations);
        CHECK(c.complete);
        CHECK(c.quadratic);
    }
}

TEST_CASE("extended ADHM quivers") {
    auto e = build_extended_adhm(2, {2, 1});
    const auto& q = *e.quiver;
    REQUIRE(e.relations.size() == 2);
    std::size_t paths = 0, loops = 0;
    for (const auto& r : e.relations) (r.tail == r.head && q.vertex_id(r.tail) == "V" ? paths : loops) = r.terms.size();
    CHECK(paths == 3);
    CHECK(loops == 1);
    CHECK(relation_set_checks(q, e.relations).complete);

    auto one = build_extended_adhm(1, {1});
    CHECK(relation_set_checks(*one.quiver, one.relations).complete);
    auto three = build_extended_adhm(3, {2, 3, 1});
    std::size_t at_v = 0;
    for (const auto& r : three.relations)
        if (three.quiver->vertex_id(r.head) == "V") at_v = r.terms.size();
    CHECK(at_v == 4);
    CHECK(error_of([] { build_extended_adhm(2, {1, 1}); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("cubic relations are flagged as not quadratic") {
    auto c = fixtures::jordan_cubic();
    auto checks = relation_set_checks(*c.quiver, c.relations);
    CHECK_FALSE(checks.quadratic);
    CHECK(checks.homogeneous);
}
