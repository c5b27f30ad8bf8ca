#pragma once

#include "quivermorse/quiver.hpp"

#include <string>
#include <vector>

namespace qm {

struct ExpandedVertex {
    std::string id;
    std::size_t base;  // vertex of the base quiver this part splits
    int dim;
};

struct RetainedEdge {
    std::string id;
    std::size_t base;  // base edge
    std::size_t tail;  // index into ExpansionSpec::vertices
    std::size_t head;
};

/// Vertex split of a base quiver plus the subset of lifted edges that are kept.
/// The base dimension vector is the sum of the part dimensions over each fibre.
struct ExpansionSpec {
    QuiverPtr base;
    RelationSet base_relations;
    std::vector<ExpandedVertex> vertices;
    std::vector<RetainedEdge> edges;

    DimensionVector base_dims() const;
    /// Throws InvalidExpansion if the split is inconsistent.
    void validate() const;
};

struct DroppedPath {
    std::string relation;  // lifted relation id
    std::string path;      // print order, lifted edge names
    cplx coeff;
    int removed_edges;
    bool relation_retained;  // the lifted relation keeps at least one path
};

struct RestrictionResult {
    QuiverPtr qprime;
    RelationSet rprime;
    DimensionVector dims;                       // part dimensions, in Q' vertex order
    std::vector<std::size_t> base_relation;     // for each relation of R', the relation of R it lifts
    bool fully_restricted = true;
    std::vector<DroppedPath> dropped_paths;
};

RestrictionResult expand_restrict(const ExpansionSpec& spec);

struct RelationBlock {
    std::string relation;
    int rows;
    int cols;
};

struct NegativeSliceQuiver {
    ExpansionSpec spec;
    std::vector<RelationBlock> nu1_blocks;  // Rel(v1, v1): one block per relation of R
    std::vector<RelationBlock> nu2_blocks;  // Rel(v2, v1): one block per relation of R
};

/// Two copies of every vertex (copy 1 carries v1, copy 2 carries v2); keeps all copy-1 edges
/// and all copy-2 -> copy-1 edges. Part ids are "<vertex>.1" / "<vertex>.2", edge ids
/// "<edge>.11" / "<edge>.21".
NegativeSliceQuiver build_negative_slice_quiver(const Quiver& q, const RelationSet& r, const DimensionVector& v1,
                                                const DimensionVector& v2);

/// Identity expansion: one part per vertex, every edge retained.
ExpansionSpec trivial_expansion(QuiverPtr q, RelationSet r, const DimensionVector& v);

/// ADHM quiver (loops B1, B2 at V; a: W->V; b: V->W; r = B1B2 - B2B1 + ab) split into the
/// handsaw quiver of build_handsaw(n, v_dims, w_dims).
ExpansionSpec adhm_to_handsaw_spec(int n, const std::vector<int>& v_dims, const std::vector<int>& w_dims);

} // namespace qm
