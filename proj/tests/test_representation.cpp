#include "helpers.hpp"

using namespace qm;
using namespace qmt;

namespace {

const double kRt2 = std::sqrt(2.0);

std::size_t rel_index(const RelationSet& r, const std::string& id) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].id == id) return i;
    throw std::runtime_error("missing relation " + id);
}

} // namespace

TEST_CASE("evaluate_path on scalar blocks") {
    auto j = fixtures::jordan();
    const auto& q = *j.quiver;
    auto x = rep(j, dv({1, 1}), {{"a", 1.0}, {"abar", 1.0}});
    CHECK(evaluate_path(x, make_path(q, {"abar", "a"}))(0, 0) == cplx(1.0));
    auto y = rep(j, dv({1, 1}), {{"B", 2.0}});
    CHECK(evaluate_path(y, make_path(q, {"B", "B"}))(0, 0) == cplx(4.0));
    auto z = Representation::zero(j.quiver, dv({2, 1}));
    CHECK(evaluate_path(z, make_path(q, {"B", "abar"})).norm() == 0.0);
}

TEST_CASE("relation_map worked values") {
    auto j = fixtures::jordan();
    auto r1 = rel_index(j.relations, "r_1"), rinf = rel_index(j.relations, "r_inf");
    CHECK(relation_map(jordan_xmin(), j.relations).norm() == 0.0);
    auto nu = relation_map(rep(j, dv({1, 1}), {{"a", 1.0}, {"abar", 1.0}}), j.relations);
    CHECK(nu.blocks[r1](0, 0) == cplx(1.0));
    CHECK(nu.blocks[rinf](0, 0) == cplx(-1.0));
    CHECK(relation_map(Representation::zero(j.quiver, dv({2, 1})), j.relations).norm() == 0.0);
}

TEST_CASE("path_derivative and d_nu worked values") {
    auto j = fixtures::jordan();
    const auto& q = *j.quiver;
    auto v = dv({1, 1});
    auto x1 = rep(j, v, {{"B", 1.0}});
    auto x2 = Representation::zero(j.quiver, v);
    auto dx = GradedLinearMap::zero(j.quiver, v, v);
    dx.at("Bbar")(0, 0) = 1.0;
    CHECK(path_derivative(x1, x2, dx, make_path(q, {"Bbar", "B"}))(0, 0) == cplx(1.0));
    CHECK(path_derivative(x1, x2, dx, make_path(q, {"a"})) == dx.at("a"));

    cplx t(0.3, -0.7);
    dx.at("Bbar")(0, 0) = t;
    auto dn = d_nu(x1, x2, j.relations, dx);
    CHECK(std::abs(dn.blocks[rel_index(j.relations, "r_1")](0, 0) - t) < 1e-15);

    Rng rng(1, "dnu-zero");
    auto z = Representation::zero(j.quiver, v);
    auto any = GradedLinearMap::random(j.quiver, v, v, rng);
    CHECK(d_nu(z, z, j.relations, any).norm() == 0.0);
    CHECK(path_derivative(z, z, any, make_path(q, {"Bbar", "B"})).norm() == 0.0);

    auto v2 = dv({1, 0});
    auto dy = GradedLinearMap::random(j.quiver, v2, v, rng);
    CHECK(d_nu(jordan_xmin(), Representation::zero(j.quiver, v2), j.relations, dy).norm() == 0.0);
}

TEST_CASE("d_nu_adjoint worked values") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1}), v2 = dv({1, 0});
    Rng rng(2, "adj");
    auto z = Representation::zero(j.quiver, v);
    auto u = RelationValue::random(j.relations, v, v, rng);
    CHECK(d_nu_adjoint(z, z, j.relations, u).norm() == 0.0);

    auto w = RelationValue::zero(j.relations, v2, v);
    w.blocks[rel_index(j.relations, "r_1")](0, 0) = 1.0;
    CHECK(d_nu_adjoint(jordan_xmin(), Representation::zero(j.quiver, v2), j.relations, w).norm() == 0.0);
}

TEST_CASE("inf_action and its adjoint worked values") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    Rng rng(3, "rho");
    auto x = Representation::random(j.quiver, dv({2, 1}), rng);
    CHECK(inf_action(x, LieAlgebraElement::identity(x.dims)).norm() < 1e-15);

    auto xa = rep(j, v, {{"a", 1.0}});
    auto u = LieAlgebraElement::zero(v, v);
    u[0](0, 0) = 1.0;
    CHECK(inf_action(xa, u).at("a")(0, 0) == cplx(1.0));
    CHECK(inf_action(Representation::zero(j.quiver, v), u).norm() == 0.0);

    auto dx = GradedLinearMap::zero(j.quiver, v, v);
    dx.at("abar")(0, 0) = 1.0;
    auto adj = inf_action_adjoint(jordan_xmin(), dx);
    CHECK(std::abs(adj[0](0, 0) + kRt2) < 1e-15);
    CHECK(std::abs(adj[1](0, 0) - kRt2) < 1e-15);
    CHECK(inf_action_adjoint(Representation::zero(j.quiver, v), dx).norm() == 0.0);
}

TEST_CASE("pairing identities on random data") {
    Rng rng(4, "pairing");
    for (const char* name : {"jordan", "a1", "adhm", "handsaw3", "adhm-ext"}) {
        auto qr = fixtures::by_name(name);
        for (int t = 0; t < 25; ++t) {
            std::vector<int> a(qr.quiver->num_vertices()), b(a.size());
            for (auto& x : a) x = rng.uniform_int(0, 3);
            for (auto& x : b) x = rng.uniform_int(0, 3);
            auto x1 = Representation::random(qr.quiver, dv(a), rng);
            auto x2 = Representation::random(qr.quiver, dv(b), rng);
            auto u0 = LieAlgebraElement::random(dv(b), dv(a), rng);
            auto dx = GradedLinearMap::random(qr.quiver, dv(b), dv(a), rng);
            auto w = RelationValue::random(qr.relations, dv(b), dv(a), rng);
            double s = (1.0 + x1.norm() + x2.norm());
            // dx in the image of rho: the adjoint pairing still holds.
            auto img = inf_action(x1, x2, u0);
            CHECK(std::abs(inner(img, img) - inner(u0, inf_action_adjoint(x1, x2, img))) <=
                  1e-10 * s * s * (1.0 + u0.norm() * u0.norm()));
            CHECK(std::abs(inner(d_nu(x1, x2, qr.relations, dx), w) -
                           inner(dx, d_nu_adjoint(x1, x2, qr.relations, w))) <= 1e-10 * s * dx.norm() * w.norm() + 1e-300);
        }
    }
}

TEST_CASE("moment map worked values and equivariance") {
    auto j = fixtures::jordan();
    CHECK(moment_map(Representation::zero(j.quiver, dv({2, 1}))).norm() == 0.0);
    auto mu = moment_map(jordan_xmin());
    CHECK(std::abs(mu[0](0, 0) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(mu[1](0, 0) - cplx(0.0, -1.0)) < 1e-15);

    Rng rng(5, "equivariance");
    for (int t = 0; t < 20; ++t) {
        auto x = Representation::random(j.quiver, dv({3, 1}), rng);
        std::vector<Mat> k = {rng.unitary(3), rng.unitary(1)};
        auto lhs = moment_map(act(k, x));
        auto rhs = moment_map(x);
        double err = 0.0;
        for (std::size_t v = 0; v < 2; ++v) err += (lhs[v] - k[v] * rhs[v] * k[v].adjoint()).norm();
        CHECK(err <= 1e-10 * (1.0 + x.norm() * x.norm()));
        CHECK(mu.skew_defect() <= 1e-12);
        CHECK(moment_map(x).skew_defect() <= 1e-12 * (1.0 + x.norm() * x.norm()));
    }
}

TEST_CASE("block-triangular linearization is exact for quadratic relations") {
    Rng rng(6, "linearize");
    for (const char* name : {"jordan", "handsaw4", "adhm-ext"}) {
        auto qr = fixtures::by_name(name);
        for (int t = 0; t < 20; ++t) {
            std::vector<int> a(qr.quiver->num_vertices()), b(a.size());
            for (auto& x : a) x = rng.uniform_int(0, 2);
            for (auto& x : b) x = rng.uniform_int(0, 2);
            auto x1 = Representation::random(qr.quiver, dv(a), rng);
            auto x2 = Representation::random(qr.quiver, dv(b), rng);
            auto dx = GradedLinearMap::random(qr.quiver, dv(b), dv(a), rng);
            auto X = block_triangular(x1, x2, dx);
            CHECK((upper_block(X, dv(a)) - dx).norm() == 0.0);
            auto [d1, d2] = split_diagonal(X, dv(a));
            CHECK((to_graded(d1) - to_graded(x1)).norm() == 0.0);
            CHECK((to_graded(d2) - to_graded(x2)).norm() == 0.0);
            auto full = relation_map(X, qr.relations);
            auto up = upper_block(X, dv(a));
            auto dn = d_nu(x1, x2, qr.relations, up);
            for (std::size_t i = 0; i < qr.relations.size(); ++i) {
                const auto& r = qr.relations[i];
                Mat block = full.blocks[i].block(0, a[r.tail], a[r.head], b[r.tail]);
                CHECK((block - dn.blocks[i]).norm() <= 1e-12 * (1.0 + X.norm() * X.norm()));
            }
        }
    }
}

TEST_CASE("projection onto the relation locus") {
    auto j = fixtures::jordan();
    Rng rng(7, "project");
    for (int t = 0; t < 10; ++t) {
        auto x = Representation::random(j.quiver, dv({2, 1}), rng);
        double res = 1.0;
        auto y = project_to_relations(x, j.relations, 60, &res);
        CHECK(res < 1e-12);
        CHECK(relation_map(y, j.relations).norm() < 1e-12);
    }
}

TEST_CASE("shape errors") {
    auto j = fixtures::jordan();
    auto x = Representation::zero(j.quiver, dv({2, 1}));
    x.at("B") = Mat::Zero(1, 2);
    CHECK(error_of([&] { x.check(); }) == ErrorCode::ShapeError);
}
