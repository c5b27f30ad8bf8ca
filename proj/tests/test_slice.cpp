#include "helpers.hpp"

#include "quivermorse/slice.hpp"

using namespace qm;
using namespace qmt;

namespace {

AdjacentPair pair_for(const char* fixture, std::vector<int> v, std::vector<int> v_u, std::uint64_t seed) {
    Rng rng(seed, "pair");
    return sample_adjacent_pair(fixtures::by_name(fixture), dv(v), dv(v_u), 0, rng);
}

} // namespace

TEST_CASE("adjacent pair data") {
    auto p = pair_for("jordan", {2, 1}, {0, 1}, 1);
    CHECK(p.v_ell == dv({1, 1}));
    CHECK(p.complement() == dv({2, 0}));
    CHECK(p.remainder() == dv({1, 0}));
    CHECK(p.ek() == dv({1, 0}));
    CHECK(p.upper_point().dims == p.v);

    auto j = fixtures::jordan();
    auto x_u = Representation::zero(j.quiver, dv({1, 1}));
    CHECK(error_of([&] { make_adjacent_pair(j, dv({2, 1}), dv({1, 1}), 0, x_u); }) ==
          ErrorCode::PreconditionFailed);
    CHECK(error_of([&] { make_adjacent_pair(j, dv({1, 1}), dv({1, 1}), 0, x_u); }) ==
          ErrorCode::PreconditionFailed);
}

TEST_CASE("fibre of the adjacent pair") {
    CHECK(adjacent_fibre(pair_for("jordan", {1, 1}, {0, 1}, 2)).coker_dim == 1);
    CHECK(adjacent_fibre(pair_for("a1", {1, 1}, {0, 1}, 2)).coker_dim == 1);
    auto f = adjacent_fibre(pair_for("jordan", {2, 1}, {1, 1}, 2));
    CHECK(f.coker_dim == f.hom1 - f.rank.rank);
}

TEST_CASE("negative slice dimensions") {
    auto j = fixtures::jordan();
    auto a = fixtures::a1();
    auto zj = Representation::zero(j.quiver, dv({0, 1}));
    auto za = Representation::zero(a.quiver, dv({0, 1}));
    CHECK(negative_slice_at(zj, RelationSet(), dv({1, 0})).size() == 1);
    CHECK(negative_slice_at(za, RelationSet(), dv({1, 0})).size() == 1);
    CHECK(negative_slice_at(zj, RelationSet(), dv({2, 0})).size() == 2);
}

TEST_CASE("kernel dimensions of a flow-line point") {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        auto p = pair_for("jordan", {2, 1}, {0, 1}, s);
        Rng rng(s, "line");
        auto dx = sample_flow_line_point(p, RelationSet(), rng);
        CHECK(kernel_dims(dx) == p.remainder());
    }
}

TEST_CASE("bundle ranks") {
    auto p = pair_for("jordan", {2, 1}, {0, 1}, 3);
    Rng rng(3, "line");
    auto dx = sample_flow_line_point(p, RelationSet(), rng);
    auto b = bundle_ranks(p, dx);
    CHECK(b.rank_T == 4);
    CHECK(b.expected_T == 4);
    CHECK(b.rank_V == b.rank_D + b.rank_T);
    auto cd = flow_line_codimension(p, RelationSet(), dx);
    CHECK(cd.codim_real == b.rank_D);

    auto zero = GradedLinearMap::zero(p.quiver, p.complement(), p.v_u);
    CHECK(error_of([&] { bundle_ranks(p, zero); }) == ErrorCode::NotOnFlowLine);

    auto top = pair_for("jordan", {1, 1}, {0, 1}, 3);
    Rng r2(4, "line");
    auto tx = sample_flow_line_point(top, RelationSet(), r2);
    auto bt = bundle_ranks(top, tx);
    CHECK(bt.rank_T == 0);
    CHECK(bt.expected_T == 0);
}

TEST_CASE("Euler data") {
    auto wide = euler_data(pair_for("jordan", {2, 1}, {0, 1}, 5));
    CHECK(wide.n == 2);
    CHECK(wide.degree == 4);
    auto top = euler_data(pair_for("jordan", {1, 1}, {0, 1}, 5));
    CHECK(top.degree == 0);
}

TEST_CASE("Hecke tangent reports") {
    for (std::uint64_t s = 1; s <= 3; ++s) {
        auto p = pair_for("jordan", {1, 1}, {0, 1}, s);
        Rng rng(s, "hecke");
        auto h = hecke_tangent_report(p, p.relations, sample_hecke_point(p, rng));
        CHECK(h.d == 0);
        CHECK(h.in_F);
        CHECK(h.in_B == (h.in_T && h.in_N));

        auto q = pair_for("jordan", {2, 1}, {1, 1}, s);
        Rng r2(s, "hecke2");
        auto hq = hecke_tangent_report(q, q.relations, sample_hecke_point(q, r2));
        CHECK(hq.d == 2);
        if (hq.loop_condition) CHECK(hq.d_numeric == hq.d);
        CHECK(hq.rank_B_in_T == hq.d);
        CHECK(hq.normal_angle <= 1e-8);
    }
}
