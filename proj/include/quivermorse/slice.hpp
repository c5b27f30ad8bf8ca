#pragma once

#include "quivermorse/deformation.hpp"
#include "quivermorse/flow.hpp"
#include "quivermorse/stability.hpp"

#include <string>
#include <vector>

namespace qm {

/// Upper critical set of type v_u and lower one of type v_ell = v_u + e_k inside Rep(Q, v).
/// x_u lives on v_u; the upper critical point in Rep(Q, v) is x_u (+) 0.
struct AdjacentPair {
    QuiverPtr quiver;
    RelationSet relations;
    DimensionVector v;
    DimensionVector v_u;
    DimensionVector v_ell;
    std::size_t k = 0;
    Representation x_u;
    CentralElement alpha;  // canonical element for v

    DimensionVector complement() const { return v - v_u; }   // v - v_u
    DimensionVector remainder() const { return v - v_ell; }   // v - v_ell
    DimensionVector ek() const;
    /// x_u (+) 0 in Rep(Q, v).
    Representation upper_point() const;
};

/// Validates the dimension data and stability of x_u; throws PreconditionFailed otherwise.
AdjacentPair make_adjacent_pair(const QuiverWithRelations& qr, const DimensionVector& v, const DimensionVector& v_u,
                                std::size_t k, const Representation& x_u, const Tolerances& tol = {});

/// A critical point x on v_u for the central element induced from the canonical element of v:
/// random start, projection to the relation locus, stability check, flow. Throws NumericalStall
/// if no sample converges within the attempt budget.
Representation upper_critical_point(const QuiverWithRelations& qr, const DimensionVector& v,
                                    const DimensionVector& v_u, Rng& rng, const Tolerances& tol = {});

/// make_adjacent_pair with a sampled upper critical point.
AdjacentPair sample_adjacent_pair(const QuiverWithRelations& qr, const DimensionVector& v,
                                  const DimensionVector& v_u, std::size_t k, Rng& rng, const Tolerances& tol = {});

struct FibreReport {
    int coker_dim = 0;
    int hom0 = 0;
    int hom1 = 0;
    RankResult rank;
    std::string description;
};

/// Cokernel of rho_{x_u}: Hom^0(e_k, v_u) -> Hom^1(e_k, v_u).
FibreReport adjacent_fibre(const AdjacentPair& pair, const Tolerances& tol = {});

/// Orthonormal basis of Hom^1(v2, v1) ∩ ker rho^* ∩ ker d nu at (x_u, 0).
std::vector<GradedLinearMap> negative_slice_at(const Representation& x_u, const RelationSet& r,
                                               const DimensionVector& v2, const Tolerances& tol = {});

/// Per-vertex kernel dimensions of dx: the joint kernel of the edges leaving each vertex.
DimensionVector kernel_dims(const GradedLinearMap& dx, const Tolerances& tol = {});

/// A point of the flow-line set: dx_a = s_a e^* for t(a) = k, with e a unit vector of (v - v_u)_k and
/// s a random element of the slice in Hom^1(e_k, v_u). The relation set defines the slice.
GradedLinearMap sample_flow_line_point(const AdjacentPair& pair, const RelationSet& r, Rng& rng,
                                       const Tolerances& tol = {});

struct BundleRanks {
    int rank_D = 0;  // real ranks
    int rank_V = 0;
    int rank_T = 0;
    int expected_T = 0;  // 2 dim Hom^1(v - v_ell, e_k)
    int nu = 0;
    int lambda_u = 0;
    double margin = 0.0;
};

/// Real ranks of the cokernels of the normal complexes to the flow-line set (D) and to the lower
/// stratum (V) at (x_u, dx). Throws NotOnFlowLine if ker dx does not have dimension vector v - v_ell.
BundleRanks bundle_ranks(const AdjacentPair& pair, const GradedLinearMap& dx, const Tolerances& tol = {});

struct FlowLineCodim {
    int slice_dim = 0;    // complex
    int tangent_dim = 0;  // complex dimension of the tangent to the kernel-dimension stratum
    int codim_real = 0;
    double margin = 0.0;
};

/// Codimension of the flow-line set inside the slice at dx, measured as the rank of
/// D -> (I - P_im D_j) D P_ker(D_j) over the vertices, restricted to the slice.
FlowLineCodim flow_line_codimension(const AdjacentPair& pair, const RelationSet& r, const GradedLinearMap& dx,
                                    const Tolerances& tol = {});

struct WeightBlock {
    std::string edge;
    std::string source_vertex;  // vertex of v - v_ell acted on by the dual standard representation
    int rows = 0;
    int cols = 0;
    int ek_weight = 1;
};

struct EulerData {
    int n = 0;
    int degree = 0;
    std::vector<WeightBlock> weights;
};

EulerData euler_data(const AdjacentPair& pair);

struct HeckeReport {
    bool in_F = false;
    bool in_N = false;
    bool in_T = false;
    bool in_B = false;
    bool loop_condition = false;
    bool injectivity_checked = false;
    int d = 0;              // 2 dim Rel(e_k, v_u)
    int d_numeric = 0;      // 2 rank of (d nu_{x_u} + d nu_y)
    int rank_N_in_F = 0;    // real codimensions
    int rank_B_in_F = 0;
    int rank_B_in_T = 0;
    int rank_Ntilde = 0;
    double normal_angle = 0.0;  // largest principal angle between the two normal-space assemblies
    double dnu_y_norm = 0.0;
    double nu_xu_norm = 0.0;
    double min_margin = 0.0;
};

/// Point sets and tangent ranks at (x_u, y), y in Hom^1(e_k, v_u). Requires a quadratic relation set.
HeckeReport hecke_tangent_report(const AdjacentPair& pair, const RelationSet& r, const GradedLinearMap& y,
                                 const Tolerances& tol = {});

/// Random element of the slice in Hom^1(e_k, v_u) with R = pair.relations, scaled to unit norm.
GradedLinearMap sample_hecke_point(const AdjacentPair& pair, Rng& rng, const Tolerances& tol = {});

} // namespace qm
