#pragma once

#include "quivermorse/expansion.hpp"
#include "quivermorse/linalg.hpp"
#include "quivermorse/quiver.hpp"
#include "quivermorse/random.hpp"

#include <vector>

namespace qm {

/// One matrix per edge, x_a of shape dims[h(a)] x dims[t(a)].
struct Representation {
    QuiverPtr quiver;
    DimensionVector dims;
    std::vector<Mat> blocks;

    static Representation zero(QuiverPtr q, const DimensionVector& v);
    static Representation random(QuiverPtr q, const DimensionVector& v, Rng& rng);

    const Mat& operator[](std::size_t a) const { return blocks.at(a); }
    Mat& operator[](std::size_t a) { return blocks.at(a); }
    const Mat& at(std::string_view edge) const { return blocks.at(quiver->edge_index(edge)); }
    Mat& at(std::string_view edge) { return blocks.at(quiver->edge_index(edge)); }

    double norm() const { return frob(blocks); }
    /// Throws ShapeError if any block shape disagrees with dims.
    void check() const;
};

/// Element of Hom^1(Q, source, target): per edge a matrix target[h(a)] x source[t(a)].
struct GradedLinearMap {
    QuiverPtr quiver;
    DimensionVector source;
    DimensionVector target;
    std::vector<Mat> blocks;

    static GradedLinearMap zero(QuiverPtr q, const DimensionVector& source, const DimensionVector& target);
    static GradedLinearMap random(QuiverPtr q, const DimensionVector& source, const DimensionVector& target, Rng& rng);

    const Mat& operator[](std::size_t a) const { return blocks.at(a); }
    Mat& operator[](std::size_t a) { return blocks.at(a); }
    Mat& at(std::string_view edge) { return blocks.at(quiver->edge_index(edge)); }
    const Mat& at(std::string_view edge) const { return blocks.at(quiver->edge_index(edge)); }

    double norm() const { return frob(blocks); }
    void check() const;

    GradedLinearMap operator+(const GradedLinearMap& o) const;
    GradedLinearMap operator-(const GradedLinearMap& o) const;
    GradedLinearMap operator*(cplx s) const;
};

/// Per-vertex matrices target[k] x source[k]: elements of gl_v or of Hom^0(Q, source, target).
struct LieAlgebraElement {
    DimensionVector source;
    DimensionVector target;
    std::vector<Mat> blocks;
    bool skew = false;  // marked as k-valued (skew-Hermitian blocks)

    static LieAlgebraElement zero(const DimensionVector& source, const DimensionVector& target);
    static LieAlgebraElement identity(const DimensionVector& v);
    /// i * alpha_k * id at every vertex.
    static LieAlgebraElement central(const CentralElement& alpha, const DimensionVector& v);
    static LieAlgebraElement random(const DimensionVector& source, const DimensionVector& target, Rng& rng);

    const Mat& operator[](std::size_t k) const { return blocks.at(k); }
    Mat& operator[](std::size_t k) { return blocks.at(k); }
    double norm() const { return frob(blocks); }
    /// Largest ||u_k + u_k^*|| over the vertices.
    double skew_defect() const;

    LieAlgebraElement operator-(const LieAlgebraElement& o) const;
};

/// Per-relation matrices target[h(r)] x source[t(r)].
struct RelationValue {
    std::vector<Mat> blocks;

    static RelationValue zero(const RelationSet& r, const DimensionVector& source, const DimensionVector& target);
    static RelationValue random(const RelationSet& r, const DimensionVector& source, const DimensionVector& target,
                                Rng& rng);
    double norm() const { return frob(blocks); }
};

BlockLayout hom1_layout(const Quiver& q, const DimensionVector& source, const DimensionVector& target);
BlockLayout hom0_layout(const DimensionVector& source, const DimensionVector& target);
BlockLayout rel_layout(const RelationSet& r, const DimensionVector& source, const DimensionVector& target);

/// <A, B> = sum_k tr(A_k B_k^*).
cplx inner(const std::vector<Mat>& a, const std::vector<Mat>& b);
inline cplx inner(const GradedLinearMap& a, const GradedLinearMap& b) { return inner(a.blocks, b.blocks); }
inline cplx inner(const LieAlgebraElement& a, const LieAlgebraElement& b) { return inner(a.blocks, b.blocks); }
inline cplx inner(const RelationValue& a, const RelationValue& b) { return inner(a.blocks, b.blocks); }

Mat evaluate_path(const Representation& x, const Path& p);
RelationValue relation_map(const Representation& x, const RelationSet& r);

/// Derivative of the path map in the block-triangular setting: x1 on the target side, x2 on the source side.
Mat path_derivative(const Representation& x1, const Representation& x2, const GradedLinearMap& dx, const Path& p);
RelationValue d_nu(const Representation& x1, const Representation& x2, const RelationSet& r,
                   const GradedLinearMap& dx);
/// Adjoint of d_nu for quadratic relation sets.
GradedLinearMap d_nu_adjoint(const Representation& x1, const Representation& x2, const RelationSet& r,
                             const RelationValue& u);

/// (rho(u))_a = u_{h(a)} (x2)_a - (x1)_a u_{t(a)} for u in Hom^0(v2, v1).
GradedLinearMap inf_action(const Representation& x1, const Representation& x2, const LieAlgebraElement& u);
GradedLinearMap inf_action(const Representation& x, const LieAlgebraElement& u);
LieAlgebraElement inf_action_adjoint(const Representation& x1, const Representation& x2, const GradedLinearMap& dx);
LieAlgebraElement inf_action_adjoint(const Representation& x, const GradedLinearMap& dx);

/// mu(x)_k = (1/2i) (sum_{h(a)=k} x_a x_a^* - sum_{t(a)=k} x_a^* x_a).
LieAlgebraElement moment_map(const Representation& x);

/// Matrices of rho: Hom^0(v2,v1) -> Hom^1(v2,v1) and d_nu: Hom^1(v2,v1) -> Rel(v2,v1).
Mat inf_action_matrix(const Representation& x1, const Representation& x2);
Mat d_nu_matrix(const Representation& x1, const Representation& x2, const RelationSet& r);

/// x1 (+) x2 with the first summand in the leading coordinates of every vertex.
Representation direct_sum(const Representation& x1, const Representation& x2);
/// x1 (+) x2 plus dx in the (1,2) block: dx maps the x2 summand into the x1 summand.
Representation block_triangular(const Representation& x1, const Representation& x2, const GradedLinearMap& dx);
/// Diagonal blocks of x for the split v = v1 + v2 (first v1 coordinates at every vertex).
std::pair<Representation, Representation> split_diagonal(const Representation& x, const DimensionVector& v1);
/// Off-diagonal (1,2) block of x for the split v = v1 + v2, as an element of Hom^1(v2, v1).
GradedLinearMap upper_block(const Representation& x, const DimensionVector& v1);

/// g . x with g_k invertible: (g.x)_a = g_{h(a)} x_a g_{t(a)}^{-1}.
Representation act(const std::vector<Mat>& g, const Representation& x);

GradedLinearMap to_graded(const Representation& x);
Representation from_graded(const GradedLinearMap& m);

/// Gauss-Newton projection onto nu^{-1}(0); returns the final residual norm through *residual.
Representation project_to_relations(const Representation& x, const RelationSet& r, int max_iter = 60,
                                    double* residual = nullptr);

/// S(x') for a restricted representation: block assembly over the base quiver.
Representation embed_restricted_rep(const ExpansionSpec& spec, const Representation& xprime);

} // namespace qm
