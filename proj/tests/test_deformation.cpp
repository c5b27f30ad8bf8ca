#include "helpers.hpp"

#include "quivermorse/deformation.hpp"

using namespace qm;
using namespace qmt;

TEST_CASE("deformation complex at the Jordan minimum") {
    auto j = fixtures::jordan();
    auto v2 = dv({1, 0});
    auto d = deformation_complex(j.relations, jordan_xmin(), Representation::zero(j.quiver, v2));
    CHECK(d.h0 == 0);
    CHECK(d.h1 == 2);
    CHECK(d.h2 == 1);
    auto f = dims_and_forms(*j.quiver, j.relations, dv({1, 1}), v2);
    CHECK(f.ringel_R == -1);
    CHECK(d.h0 - d.h1 + d.h2 == f.ringel_R);
    CHECK(d.slice_basis.size() == 2);
}

TEST_CASE("deformation complex with zero maps") {
    auto j = fixtures::jordan();
    auto v1 = dv({1, 1}), v2 = dv({1, 0});
    auto d = deformation_complex(j.relations, Representation::zero(j.quiver, v1), Representation::zero(j.quiver, v2));
    CHECK(d.h0 == 1);
    CHECK(d.h1 == 3);
    CHECK(d.h2 == 1);
    CHECK(d.rho_rank.rank == 0);
    CHECK(d.dnu_rank.rank == 0);
}

TEST_CASE("deformation complex on the A1 double") {
    auto a = fixtures::a1();
    auto x = rep(a, dv({1, 1}), {{"abar", std::sqrt(2.0)}});
    auto d = deformation_complex(a.relations, x, Representation::zero(a.quiver, dv({1, 0})));
    CHECK(d.h0 == 0);
    CHECK(d.h1 == 0);
    CHECK(d.h2 == 1);
}

TEST_CASE("cokernel of d nu against the closed formula") {
    auto j = fixtures::jordan();
    auto c = coker_dnu_check(j.relations, jordan_xmin(), dv({1, 0}));
    CHECK(c.numeric == 1);
    CHECK(c.formula == 1);
    CHECK(c.image_perp == dv({1, 0}));

    auto a = fixtures::a1();
    auto ca = coker_dnu_check(a.relations, rep(a, dv({1, 1}), {{"abar", std::sqrt(2.0)}}), dv({1, 0}));
    CHECK(ca.numeric == 1);
    CHECK(ca.formula == 1);
}

TEST_CASE("image perp dimensions") {
    auto j = fixtures::jordan();
    CHECK(image_perp_dims(jordan_xmin()) == dv({1, 0}));
    CHECK(image_perp_dims(Representation::zero(j.quiver, dv({2, 1}))) == dv({2, 1}));
    auto x = rep(j, dv({1, 1}), {{"a", 1.0}, {"abar", 1.0}});
    CHECK(image_perp_dims(x) == dv({0, 0}));
}

TEST_CASE("index identity and slice orthonormality on random points of the relation locus") {
    Rng rng(21, "index");
    for (const char* name : {"jordan", "a1", "handsaw3"}) {
        auto qr = fixtures::by_name(name);
        std::size_t n = qr.quiver->num_vertices();
        int done = 0;
        for (int draw = 0; draw < 200 && done < 15; ++draw) {
            std::vector<int> a(n), b(n);
            for (auto& x : a) x = rng.uniform_int(0, 2);
            for (auto& x : b) x = rng.uniform_int(0, 2);
            double r1 = 0.0, r2 = 0.0;
            auto x1 = project_to_relations(Representation::random(qr.quiver, dv(a), rng), qr.relations, 60, &r1);
            auto x2 = project_to_relations(Representation::random(qr.quiver, dv(b), rng), qr.relations, 60, &r2);
            if (r1 > 1e-12 || r2 > 1e-12) continue;
            auto d = deformation_complex(qr.relations, x1, x2);
            // Skip draws whose rank decisions are not well separated.
            if (d.min_margin() < 1e3) continue;
            ++done;
            auto f = dims_and_forms(*qr.quiver, qr.relations, dv(a), dv(b));
            CHECK(d.h0 - d.h1 + d.h2 == f.ringel_R);
            REQUIRE(d.slice_basis.size() == static_cast<std::size_t>(d.h1));
            for (std::size_t i = 0; i < d.slice_basis.size(); ++i)
                for (std::size_t k = 0; k < d.slice_basis.size(); ++k) {
                    cplx want = i == k ? 1.0 : 0.0;
                    CHECK(std::abs(inner(d.slice_basis[i], d.slice_basis[k]) - want) < 1e-10);
                }
            for (const auto& s : d.slice_basis) CHECK(d_nu(x1, x2, qr.relations, s).norm() < 1e-9);
        }
        CHECK(done >= 10);
    }
}
