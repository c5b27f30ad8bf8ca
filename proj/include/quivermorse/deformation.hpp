#pragma once

#include "quivermorse/representation.hpp"

namespace qm {

/// Cohomology dimensions of Hom^0(v2,v1) -> Hom^1(v2,v1) -> Rel(v2,v1) at (x1, x2).
struct DeformationReport {
    int h0 = 0;
    int h1 = 0;
    int h2 = 0;
    std::vector<GradedLinearMap> slice_basis;  // orthonormal basis of ker(rho^*) ∩ ker(d nu)
    RankResult rho_rank;
    RankResult dnu_rank;
    RankResult slice_rank;  // d nu restricted to ker(rho^*)
    std::vector<double> singular_value_margins;

    double min_margin() const;
};

DeformationReport deformation_complex(const RelationSet& r, const Representation& x1, const Representation& x2,
                                      const Tolerances& tol = {});

struct CokernelCheck {
    int numeric = 0;
    int formula = 0;
    DimensionVector image_perp;  // per-vertex dimension of (im x1)^perp
    RankResult rank;
};

/// dim coker d nu at (x1, 0) against the closed formula for complete quadratic relations.
CokernelCheck coker_dnu_check(const RelationSet& r, const Representation& x1, const DimensionVector& v2,
                              const Tolerances& tol = {});

/// Per-vertex dimension of the orthogonal complement of the span of the incoming edge images.
DimensionVector image_perp_dims(const Representation& x, const Tolerances& tol = {});

} // namespace qm
