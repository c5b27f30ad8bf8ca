#include "helpers.hpp"

#include "quivermorse/io.hpp"
#include "quivermorse/ledger.hpp"

using namespace qm;
using namespace qmt;

namespace {

AdjacentPair jordan_pair(std::vector<int> v, std::vector<int> v_u, std::uint64_t seed) {
    Rng rng(seed, "pair");
    return sample_adjacent_pair(fixtures::jordan(), dv(v), dv(v_u), 0, rng);
}

} // namespace

TEST_CASE("worked ledger for the smallest Jordan pair") {
    auto j = fixtures::jordan();
    auto l = build_ledger(jordan_pair({1, 1}, {0, 1}, 1), j.relations, 5, 42);
    CHECK(l.lambda_u == 2);
    CHECK(l.nu == 0);
    CHECK(l.euler_degree == 0);
    CHECK(l.d == 0);
    CHECK(l.shift == -2);
    CHECK(l.grassmannian_dim == 0);
    CHECK(l.chern_degree == 2);
    CHECK(l.k == "1");
    CHECK(l.d_matches);
    CHECK(l.lambda_votes.size() == 5);
}

TEST_CASE("ledgers are byte-reproducible from the seed") {
    auto j = fixtures::jordan();
    auto p = jordan_pair({2, 1}, {0, 1}, 7);
    auto a = io::to_json(*j.quiver, build_ledger(p, j.relations, 3, 99)).dump();
    auto b = io::to_json(*j.quiver, build_ledger(p, j.relations, 3, 99)).dump();
    CHECK(a == b);
}

TEST_CASE("shift and target degrees") {
    auto j = fixtures::jordan();
    auto l = build_ledger(jordan_pair({2, 1}, {0, 1}, 3), j.relations, 3, 5);
    CHECK(l.euler_degree == 4);
    CHECK(l.shift == l.d - l.lambda_u);
    for (int p : {0, 2, 7}) {
        CHECK(convolution_target_degree(l, p) == p + l.d - l.lambda_u);
        CHECK(cup_product_target_degree(l, p, l.chern_degree) == p + 2 - l.lambda_u);
    }
    CHECK(error_of([&] { build_ledger(jordan_pair({1, 1}, {0, 1}, 1), j.relations, 0, 1); }) ==
          ErrorCode::InvalidParameter);
}
