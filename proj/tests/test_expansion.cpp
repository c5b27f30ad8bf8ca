#include "helpers.hpp"

#include "quivermorse/expansion.hpp"

#include <set>

using namespace qm;
using namespace qmt;

namespace {

std::multiset<std::string> term_names(const Quiver& q, const Relation& r) {
    std::multiset<std::string> out;
    for (const auto& t : r.terms) out.insert(path_name(q, t.path) + "@" + std::to_string(t.coeff.real()));
    return out;
}

} // namespace

TEST_CASE("ADHM splits into the handsaw quiver with its relations") {
    std::vector<int> vd = {1, 1}, wd = {1, 1, 1};
    auto res = expand_restrict(adhm_to_handsaw_spec(3, vd, wd));
    auto hs = build_handsaw(3, vd, wd);
    CHECK(res.fully_restricted);
    CHECK(*res.qprime == *hs.quiver);
    REQUIRE(res.rprime.size() == hs.relations.size());
    for (std::size_t i = 0; i < hs.relations.size(); ++i) {
        CHECK(res.rprime[i].tail == hs.relations[i].tail);
        CHECK(res.rprime[i].head == hs.relations[i].head);
        CHECK(term_names(*res.qprime, res.rprime[i]) == term_names(*hs.quiver, hs.relations[i]));
    }
    for (const auto& d : res.dropped_paths)
        if (d.relation_retained) CHECK(d.removed_edges >= 2);
}

TEST_CASE("ADHM to handsaw for n = 4 is also a full restriction") {
    auto res = expand_restrict(adhm_to_handsaw_spec(4, {1, 2, 1}, {1, 1, 1, 1}));
    auto hs = build_handsaw(4, {1, 2, 1}, {1, 1, 1, 1});
    CHECK(res.fully_restricted);
    CHECK(res.rprime.size() == hs.relations.size());
}

TEST_CASE("negative-slice quiver of the Jordan fixture") {
    auto j = fixtures::jordan();
    auto nsq = build_negative_slice_quiver(*j.quiver, j.relations, dv({1, 1}), dv({1, 0}));
    int copy1 = 0, copy21 = 0;
    for (const auto& e : nsq.spec.edges) {
        if (e.id.ends_with(".11")) ++copy1;
        if (e.id.ends_with(".21")) ++copy21;
    }
    CHECK(copy1 == 4);
    CHECK(copy21 == 3);
    CHECK(nsq.nu1_blocks.size() == 2);
    CHECK(nsq.nu2_blocks.size() == 2);
    auto res = expand_restrict(nsq.spec);
    CHECK_FALSE(res.fully_restricted);
    bool single = false;
    for (const auto& d : res.dropped_paths) single = single || d.removed_edges == 1;
    CHECK(single);
}

TEST_CASE("negative-slice quiver with v2 = 0 keeps the first copy only") {
    auto j = fixtures::jordan();
    auto nsq = build_negative_slice_quiver(*j.quiver, j.relations, dv({1, 1}), dv({0, 0}));
    for (const auto& e : nsq.spec.edges) CHECK(e.id.ends_with(".11"));
    auto res = expand_restrict(nsq.spec);
    CHECK(res.rprime.size() == j.relations.size());
}

TEST_CASE("trivial expansion reproduces the quiver") {
    auto j = fixtures::jordan();
    auto res = expand_restrict(trivial_expansion(j.quiver, j.relations, dv({2, 1})));
    CHECK(res.fully_restricted);
    CHECK(*res.qprime == *j.quiver);
    CHECK(res.rprime.size() == j.relations.size());
    CHECK(res.dropped_paths.empty());
}

TEST_CASE("expansion specs are validated") {
    auto spec = adhm_to_handsaw_spec(3, {1, 1}, {1, 1, 1});
    spec.vertices[0].dim = 0;
    CHECK(error_of([&] { spec.validate(); }) == ErrorCode::InvalidExpansion);
    auto worse = adhm_to_handsaw_spec(3, {1, 1}, {1, 1, 1});
    worse.edges[0].tail = worse.vertices.size() - 1;  // W3 is not over the tail of B1
    CHECK(error_of([&] { worse.validate(); }) == ErrorCode::InvalidExpansion);
}

TEST_CASE("embedding a restricted representation") {
    auto spec = adhm_to_handsaw_spec(3, {1, 1}, {1, 1, 1});
    auto res = expand_restrict(spec);
    auto zero = embed_restricted_rep(spec, Representation::zero(res.qprime, res.dims));
    CHECK(zero.norm() == 0.0);
    CHECK(zero.dims == spec.base_dims());

    // Handsaw points on nu' = 0 embed into nu = 0.
    Rng rng(3, "embed");
    for (int t = 0; t < 10; ++t) {
        auto x = Representation::random(res.qprime, res.dims, rng);
        double resid = 0.0;
        x = project_to_relations(x, res.rprime, 60, &resid);
        REQUIRE(resid < 1e-12);
        auto full = embed_restricted_rep(spec, x);
        CHECK(relation_map(full, spec.base_relations).norm() < 1e-12 * (1.0 + x.norm() * x.norm()));
    }
}

TEST_CASE("negative-slice embedding reproduces the block representation") {
    auto j = fixtures::jordan();
    auto v1 = dv({1, 1}), v2 = dv({1, 0});
    auto nsq = build_negative_slice_quiver(*j.quiver, j.relations, v1, v2);
    auto res = expand_restrict(nsq.spec);
    auto x1 = jordan_xmin();
    Rng rng(4, "nsq");
    auto y = GradedLinearMap::random(j.quiver, v2, v1, rng);
    auto xp = Representation::zero(res.qprime, res.dims);
    for (std::size_t a = 0; a < res.qprime->num_edges(); ++a) {
        const auto& id = res.qprime->edge(a).id;
        auto base = id.substr(0, id.find('.'));
        xp[a] = id.ends_with(".11") ? x1.at(base) : y.at(base);
    }
    auto full = embed_restricted_rep(nsq.spec, xp);
    auto want = block_triangular(x1, Representation::zero(j.quiver, v2), y);
    for (std::size_t a = 0; a < j.quiver->num_edges(); ++a) CHECK((full[a] - want[a]).norm() == 0.0);
}
