#include "helpers.hpp"

#include "quivermorse/ledger.hpp"
#include "quivermorse/stability.hpp"

using namespace qm;
using namespace qmt;

namespace {

CentralElement canon(const QuiverWithRelations& qr, const DimensionVector& v) {
    return canonical_central(*qr.quiver, v);
}

// Central difference of f along every real and imaginary coordinate direction.
GradedLinearMap fd_gradient(const Representation& x, const CentralElement& alpha, double h = 1e-6) {
    auto g = GradedLinearMap::zero(x.quiver, x.dims, x.dims);
    for (std::size_t a = 0; a < x.blocks.size(); ++a)
        for (Eigen::Index i = 0; i < x[a].rows(); ++i)
            for (Eigen::Index j = 0; j < x[a].cols(); ++j)
                for (cplx dir : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
                    auto p = x, m = x;
                    p[a](i, j) += h * dir;
                    m[a](i, j) -= h * dir;
                    double d = (energy(p, alpha) - energy(m, alpha)) / (2 * h);
                    g[a](i, j) += d * dir;
                }
    return g;
}

} // namespace

TEST_CASE("energy and gradient worked values") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    CHECK(energy(jordan_xmin(), alpha) < 1e-28);
    CHECK(grad_energy(jordan_xmin(), alpha).norm() < 1e-14);

    auto x = rep(j, v, {{"a", 1.0}, {"abar", 1.0}});
    CHECK(energy(x, alpha) == doctest::Approx(2.0));
    auto g = grad_energy(x, alpha);
    CHECK(std::abs(g.at("a")(0, 0) - 4.0) < 1e-14);
    CHECK(std::abs(g.at("abar")(0, 0) + 4.0) < 1e-14);
    CHECK(g.at("B").norm() == 0.0);
    CHECK((g - fd_gradient(x, alpha)).norm() < 1e-6);
}

TEST_CASE("gradient agrees with finite differences on random points") {
    Rng rng(31, "grad");
    for (const char* name : {"jordan", "a1", "adhm"}) {
        auto qr = fixtures::by_name(name);
        for (int t = 0; t < 10; ++t) {
            std::vector<int> d(qr.quiver->num_vertices());
            for (auto& x : d) x = rng.uniform_int(1, 2);
            d[*qr.quiver->framing()] = 1;
            auto x = Representation::random(qr.quiver, dv(d), rng);
            auto alpha = canon(qr, dv(d));
            auto g = grad_energy(x, alpha);
            CHECK((g - fd_gradient(x, alpha)).norm() <= 1e-5 * (1.0 + g.norm()));
            CHECK(descent_direction_certified(x, alpha));
        }
    }
}

TEST_CASE("flow from a = abar = 1 reaches the minimum") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    auto res = integrate_flow(rep(j, v, {{"a", 1.0}, {"abar", 1.0}}), alpha);
    CHECK(res.status == FlowStatus::Converged);
    CHECK(energy(res.limit, alpha) <= 1e-10);
    CHECK(res.max_f_increase <= 0.0);
    double gap = res.limit.at("abar").squaredNorm() - res.limit.at("a").squaredNorm();
    CHECK(gap == doctest::Approx(2.0).epsilon(1e-5));
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        CHECK(res.trajectory[i].f <= res.trajectory[i - 1].f);
}

TEST_CASE("critical starting points take no steps") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    auto loop = integrate_flow(rep(j, v, {{"B", 1.0}}), alpha);
    CHECK(loop.status == FlowStatus::Converged);
    CHECK(loop.accepted_steps == 0);
    CHECK(energy(loop.limit, alpha) == doctest::Approx(2.0));

    auto zero = integrate_flow(Representation::zero(j.quiver, v), alpha);
    CHECK(zero.accepted_steps == 0);
    CHECK(zero.limit.norm() == 0.0);
}

TEST_CASE("classification of critical points") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);

    auto top = classify_critical(jordan_xmin(), alpha);
    REQUIRE(top.hn.blocks.size() == 1);
    CHECK(top.hn.label() == v);

    auto z = Representation::zero(j.quiver, v);
    auto cls = classify_critical(z, alpha);
    REQUIRE(cls.hn.blocks.size() == 2);
    CHECK(cls.hn.label() == dv({0, 1}));
    CHECK(cls.hn.blocks[1] == dv({1, 0}));
    CHECK(cls.hn.slopes[0] < cls.hn.slopes[1]);
    CHECK(cls.hn == hn_type_algebraic(z, alpha));
    CHECK(error_of([&] { classify_critical(rep(j, v, {{"a", 1.0}, {"abar", 1.0}}), alpha); }) ==
          ErrorCode::NotCritical);
}

TEST_CASE("stability and algebraic types") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    CHECK(is_alpha_stable(jordan_xmin(), alpha));
    CHECK_FALSE(is_alpha_stable(Representation::zero(j.quiver, v), alpha));
    CHECK(hn_type_algebraic(jordan_xmin(), alpha).blocks.size() == 1);

    // B is diagonal and abar kills the second eigenline, which is then the largest subrepresentation
    // avoiding the framing vertex.
    auto x = Representation::zero(j.quiver, dv({2, 1}));
    x.at("B")(0, 0) = 1.0;
    x.at("B")(1, 1) = 2.0;
    x.at("abar")(0, 0) = 1.0;
    auto h = hn_type_algebraic(x, canon(j, dv({2, 1})));
    CHECK(h.label() == dv({1, 1}));
    CHECK(h.blocks.back() == dv({1, 0}));
}

TEST_CASE("Hessian index at the zero and minimal critical points") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    auto h0 = hessian_index(Representation::zero(j.quiver, v), alpha);
    CHECK(h0.index == 2);
    auto hm = hessian_index(jordan_xmin(), alpha);
    CHECK(hm.index == 0);
    CHECK(error_of([&] { hessian_index(rep(j, v, {{"a", 1.0}}), alpha); }) == ErrorCode::NotCritical);
}

TEST_CASE("closed path traces") {
    auto j = fixtures::jordan();
    auto t = closed_path_traces(rep(j, dv({1, 1}), {{"B", 2.0}}), 2);
    CHECK(t.at("B") == cplx(2.0));
    CHECK(t.at("B*B") == cplx(4.0));
    CHECK(t.at("Bbar") == cplx(0.0));
    // One representative per rotation class.
    CHECK(t.count("Bbar*B") + t.count("B*Bbar") == 1);
    CHECK(error_of([&] { closed_path_traces(jordan_xmin(), 0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("traces are conserved by the flow") {
    auto j = fixtures::jordan();
    Rng rng(32, "traces");
    for (int i = 0; i < 5; ++i) {
        auto x = Representation::random(j.quiver, dv({2, 1}), rng);
        auto res = integrate_flow(x, canon(j, x.dims));
        CHECK(res.invariant_drift <= 1e-6);
        CHECK(max_trace_difference(res.traces_start, res.traces_end) <= 1e-6);
    }
}

TEST_CASE("critical factorization of the zero point") {
    auto j = fixtures::jordan();
    auto v = dv({1, 1});
    auto alpha = canon(j, v);
    auto cls = classify_critical(Representation::zero(j.quiver, v), alpha);
    auto f = critical_factorization(cls, alpha);
    REQUIRE(f.blocks.size() == 2);
    CHECK(f.blocks[0].dims == dv({0, 1}));
    CHECK(f.blocks[1].dims == dv({1, 0}));
    for (const auto& b : f.blocks) CHECK(is_admissible(b.alpha, b.dims));
}
