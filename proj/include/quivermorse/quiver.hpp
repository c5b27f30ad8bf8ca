#pragma once

#include "quivermorse/rational.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qm {

using cplx = std::complex<double>;

struct Edge {
    std::string id;
    std::size_t tail;
    std::size_t head;

    bool is_loop() const { return tail == head; }
};

struct EdgeSpec {
    std::string id;
    std::string tail;
    std::string head;
};

/// A finite directed graph with an optional framing vertex.
class Quiver {
public:
    Quiver(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
           std::optional<std::string> framing = std::nullopt);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& vertex_id(std::size_t k) const { return vertices_.at(k); }
    const Edge& edge(std::size_t a) const { return edges_.at(a); }

    std::size_t vertex_index(std::string_view id) const;
    std::size_t edge_index(std::string_view id) const;
    std::optional<std::size_t> find_vertex(std::string_view id) const;
    std::optional<std::size_t> find_edge(std::string_view id) const;

    std::optional<std::size_t> framing() const { return framing_; }

    bool operator==(const Quiver& other) const;

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::optional<std::size_t> framing_;
    std::map<std::string, std::size_t, std::less<>> vertex_lookup_;
    std::map<std::string, std::size_t, std::less<>> edge_lookup_;
};

using QuiverPtr = std::shared_ptr<const Quiver>;

/// Nonnegative integer per vertex, stored in the quiver's vertex order.
class DimensionVector {
public:
    DimensionVector() = default;
    explicit DimensionVector(std::vector<int> dims);

    static DimensionVector zero(const Quiver& q);
    static DimensionVector unit(const Quiver& q, std::size_t k);
    static DimensionVector from_map(const Quiver& q, const std::map<std::string, int>& dims);

    std::size_t size() const { return dims_.size(); }
    int operator[](std::size_t k) const { return dims_.at(k); }
    int& operator[](std::size_t k) { return dims_.at(k); }
    const std::vector<int>& values() const { return dims_; }

    int total() const;
    bool is_zero() const;
    bool leq(const DimensionVector& other) const;

    /// Throws InvalidDimensionVector unless the vector has one entry per vertex of q.
    void check_for(const Quiver& q) const;

    DimensionVector operator+(const DimensionVector& o) const;
    DimensionVector operator-(const DimensionVector& o) const;
    bool operator==(const DimensionVector& o) const { return dims_ == o.dims_; }
    bool operator!=(const DimensionVector& o) const { return dims_ != o.dims_; }
    bool operator<(const DimensionVector& o) const { return dims_ < o.dims_; }

    std::string str() const;

private:
    std::vector<int> dims_;
};

/// Edge indices in application order: [a1, ..., an] means x_an ... x_a1.
struct Path {
    std::vector<std::size_t> edges;

    std::size_t length() const { return edges.size(); }
    std::size_t tail(const Quiver& q) const { return q.edge(edges.front()).tail; }
    std::size_t head(const Quiver& q) const { return q.edge(edges.back()).head; }
    bool operator==(const Path& o) const { return edges == o.edges; }
    bool operator<(const Path& o) const { return edges < o.edges; }
};

/// Validates composability; throws InvalidPath.
void check_path(const Quiver& q, const Path& p);
Path make_path(const Quiver& q, const std::vector<std::string>& edge_ids);
/// Print order, e.g. "a*abar" for the path that applies abar first.
std::string path_name(const Quiver& q, const Path& p);

struct Term {
    cplx coeff;
    Path path;
};

struct Relation {
    std::string id;
    std::size_t tail;
    std::size_t head;
    std::vector<Term> terms;
};

class RelationSet {
public:
    RelationSet() = default;
    /// Validates every relation against q; throws InvalidRelation.
    RelationSet(const Quiver& q, std::vector<Relation> relations);

    std::size_t size() const { return relations_.size(); }
    bool empty() const { return relations_.empty(); }
    const Relation& operator[](std::size_t i) const { return relations_.at(i); }
    const std::vector<Relation>& relations() const { return relations_; }
    auto begin() const { return relations_.begin(); }
    auto end() const { return relations_.end(); }

private:
    std::vector<Relation> relations_;
};

/// Relation built from (coefficient, edge ids in application order) pairs.
Relation make_relation(const Quiver& q, std::string id, std::string_view tail, std::string_view head,
                       const std::vector<std::pair<cplx, std::vector<std::string>>>& terms);

struct QuiverWithRelations {
    QuiverPtr quiver;
    RelationSet relations;
};

/// Per-vertex real scalars; the Lie algebra element is i * alpha_k * id.
struct CentralElement {
    std::vector<Rational> scalars;

    Rational operator[](std::size_t k) const { return scalars.at(k); }
    bool operator==(const CentralElement& o) const { return scalars == o.scalars; }
};

struct FormDims {
    int hom0 = 0;
    int hom1 = 0;
    int rel = 0;
    int ringel = 0;
    int ringel_R = 0;
};

/// Dimensions of Hom^0(v2,v1), Hom^1(v2,v1), Rel(v2,v1) and the two Euler forms.
FormDims dims_and_forms(const Quiver& q, const RelationSet& r, const DimensionVector& v1,
                        const DimensionVector& v2);

int hom1_dim(const Quiver& q, const DimensionVector& source, const DimensionVector& target);
int rel_dim(const RelationSet& r, const DimensionVector& source, const DimensionVector& target);

CentralElement canonical_central(const Quiver& q, const DimensionVector& v);

struct SlopeData {
    Rational degree;
    int rank = 0;
    Rational slope;
    bool admissible = false;
};

SlopeData slope_data(const CentralElement& alpha, const DimensionVector& v);
bool is_admissible(const CentralElement& alpha, const DimensionVector& v);
CentralElement induced_central(const CentralElement& alpha, const DimensionVector& v,
                               const DimensionVector& vp);

struct Violation {
    std::string check;
    std::string clause;
    std::string edge;
    std::string relation;
    std::string path;
    std::string message;
};

struct RelationChecks {
    bool quadratic = false;
    bool complete = false;
    bool homogeneous = false;
    bool loop_condition = false;
    std::vector<Violation> witnesses;
};

RelationChecks relation_set_checks(const Quiver& q, const RelationSet& r);

/// Doubles every edge of base (a -> a, abar) and adds one moment-map relation per vertex.
/// Conjugate ids default to id + "bar".
QuiverWithRelations build_nakajima_double(const Quiver& base,
                                          const std::map<std::string, std::string>& conjugate_ids = {});

struct HandsawQuiver {
    QuiverPtr quiver;
    RelationSet relations;
    DimensionVector dims;
};

/// Handsaw quiver with vertices V1..V_{n-1}, W1..W_n. Empty dimension lists give all-zero dims.
HandsawQuiver build_handsaw(int n, const std::vector<int>& v_dims = {}, const std::vector<int>& w_dims = {});

/// Two vertices V, W; loops a1..an at V; b1: W->V, b2: V->W; sigma is 1-based.
QuiverWithRelations build_extended_adhm(int n_loops, const std::vector<int>& sigma);

} // namespace qm
