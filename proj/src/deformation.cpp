#include "quivermorse/deformation.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qm {

namespace {

// Rank thresholds relative to the size of x, so blocks that are pure round-off count as zero
// even when they are the only entries of the operator.
Tolerances floored(const Tolerances& tol, double scale) {
    Tolerances t = tol;
    t.rank_floor = std::max(tol.rank_floor, scale);
    return t;
}

std::size_t max_degree(const RelationSet& r) {
    std::size_t d = 1;
    for (const auto& rel : r)
        for (const auto& term : rel.terms) d = std::max(d, term.path.length());
    return d;
}

} // namespace

double DeformationReport::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double x : singular_value_margins) m = std::min(m, x);
    return m;
}

DeformationReport deformation_complex(const RelationSet& r, const Representation& x1, const Representation& x2,
                                      const Tolerances& tol) {
    const auto& q = *x1.quiver;
    DeformationReport out;
    Mat rho = inf_action_matrix(x1, x2);
    Mat dnu = d_nu_matrix(x1, x2, r);
    const double s = x1.norm() + x2.norm();
    const Tolerances trho = floored(tol, s);
    const Tolerances tnu = floored(tol, std::pow(s, static_cast<double>(max_degree(r) - 1)));
    out.rho_rank = numerical_rank(rho, trho);
    out.dnu_rank = numerical_rank(dnu, tnu);
    out.h0 = out.rho_rank.nullity();
    out.h2 = out.dnu_rank.corank();

    // ker(rho^*) first, then the kernel of d nu restricted to it; both bases are orthonormal,
    // so their product is an orthonormal basis of the intersection.
    RankResult adj_rank;
    Mat k = kernel_basis(rho.adjoint(), trho, &adj_rank);
    Mat n = kernel_basis(dnu * k, tnu, &out.slice_rank);
    Mat basis = k * n;
    out.h1 = static_cast<int>(basis.cols());
    auto layout = hom1_layout(q, x2.dims, x1.dims);
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
        out.slice_basis.push_back(GradedLinearMap{x1.quiver, x2.dims, x1.dims, layout.unflatten(basis.col(j))});
    out.singular_value_margins = {out.rho_rank.margin, out.dnu_rank.margin, adj_rank.margin, out.slice_rank.margin};
    return out;
}

DimensionVector image_perp_dims(const Representation& x, const Tolerances& tol) {
    const auto& q = *x.quiver;
    std::vector<int> perp(q.num_vertices(), 0);
    for (std::size_t k = 0; k < q.num_vertices(); ++k) {
        int cols = 0;
        for (const auto& e : q.edges())
            if (e.head == k) cols += x.dims[e.tail];
        Mat images(x.dims[k], cols);
        int c = 0;
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            const auto& e = q.edge(a);
            if (e.head != k) continue;
            images.middleCols(c, x.dims[e.tail]) = x[a];
            c += x.dims[e.tail];
        }
        perp[k] = x.dims[k] - numerical_rank(images, floored(tol, x.norm())).rank;
    }
    return DimensionVector(perp);
}

CokernelCheck coker_dnu_check(const RelationSet& r, const Representation& x1, const DimensionVector& v2,
                              const Tolerances& tol) {
    auto checks = relation_set_checks(*x1.quiver, r);
    if (!checks.quadratic || !checks.complete)
        throw Error(ErrorCode::PreconditionFailed, "cokernel formula needs a complete quadratic relation set");
    auto x2 = Representation::zero(x1.quiver, v2);
    CokernelCheck out;
    out.rank = numerical_rank(d_nu_matrix(x1, x2, r), floored(tol, x1.norm()));
    out.numeric = out.rank.corank();
    out.image_perp = image_perp_dims(x1, tol);
    for (const auto& rel : r) out.formula += v2[rel.tail] * out.image_perp[rel.head];
    return out;
}

} // namespace qm
