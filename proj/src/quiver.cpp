#include "quivermorse/quiver.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace qm {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidQuiver: return "InvalidQuiver";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::InvalidDimensionVector: return "InvalidDimensionVector";
    case ErrorCode::InvalidFraming: return "InvalidFraming";
    case ErrorCode::ZeroDimensionVector: return "ZeroDimensionVector";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidExpansion: return "InvalidExpansion";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::UnsupportedRelationDegree: return "UnsupportedRelationDegree";
    case ErrorCode::InadmissibleCentral: return "InadmissibleCentral";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotOnFlowLine: return "NotOnFlowLine";
    case ErrorCode::UnstableLedger: return "UnstableLedger";
    case ErrorCode::NumericalStall: return "NumericalStall";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        return Rational(std::stoll(digits), den);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "not a rational number: '" + text + "'");
    }
}

// ---------------------------------------------------------------- Quiver

Quiver::Quiver(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
               std::optional<std::string> framing)
    : vertices_(std::move(vertices)) {
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
        if (!vertex_lookup_.emplace(vertices_[k], k).second)
            throw Error(ErrorCode::InvalidQuiver, "duplicate vertex id '" + vertices_[k] + "'");
    }
    for (const auto& e : edges) {
        auto t = find_vertex(e.tail);
        auto h = find_vertex(e.head);
        if (!t || !h)
            throw Error(ErrorCode::InvalidQuiver, "edge '" + e.id + "' references an unknown vertex");
        if (!edge_lookup_.emplace(e.id, edges_.size()).second)
            throw Error(ErrorCode::InvalidQuiver, "duplicate edge id '" + e.id + "'");
        edges_.push_back(Edge{e.id, *t, *h});
    }
    if (framing) {
        auto f = find_vertex(*framing);
        if (!f) throw Error(ErrorCode::InvalidQuiver, "framing vertex '" + *framing + "' is not a vertex");
        framing_ = *f;
    }
}

std::optional<std::size_t> Quiver::find_vertex(std::string_view id) const {
    auto it = vertex_lookup_.find(id);
    if (it == vertex_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Quiver::find_edge(std::string_view id) const {
    auto it = edge_lookup_.find(id);
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t Quiver::vertex_index(std::string_view id) const {
    auto k = find_vertex(id);
    if (!k) throw Error(ErrorCode::InvalidQuiver, "unknown vertex '" + std::string(id) + "'");
    return *k;
}

std::size_t Quiver::edge_index(std::string_view id) const {
    auto a = find_edge(id);
    if (!a) throw Error(ErrorCode::InvalidPath, "unknown edge '" + std::string(id) + "'");
    return *a;
}

bool Quiver::operator==(const Quiver& other) const {
    if (vertices_ != other.vertices_ || framing_ != other.framing_) return false;
    if (edges_.size() != other.edges_.size()) return false;
    for (std::size_t a = 0; a < edges_.size(); ++a) {
        const auto& e = edges_[a];
        const auto& f = other.edges_[a];
        if (e.id != f.id || e.tail != f.tail || e.head != f.head) return false;
    }
    return true;
}

// ------------------------------------------------------- DimensionVector

DimensionVector::DimensionVector(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_)
        if (d < 0) throw Error(ErrorCode::InvalidDimensionVector, "negative dimension");
}

DimensionVector DimensionVector::zero(const Quiver& q) {
    return DimensionVector(std::vector<int>(q.num_vertices(), 0));
}

DimensionVector DimensionVector::unit(const Quiver& q, std::size_t k) {
    auto e = zero(q);
    e[k] = 1;
    return e;
}

DimensionVector DimensionVector::from_map(const Quiver& q, const std::map<std::string, int>& dims) {
    if (dims.size() != q.num_vertices())
        throw Error(ErrorCode::InvalidDimensionVector, "keys must be exactly the quiver's vertices");
    std::vector<int> out(q.num_vertices(), 0);
    for (const auto& [id, d] : dims) {
        auto k = q.find_vertex(id);
        if (!k) throw Error(ErrorCode::InvalidDimensionVector, "unknown vertex '" + id + "'");
        out[*k] = d;
    }
    return DimensionVector(std::move(out));
}

int DimensionVector::total() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

bool DimensionVector::is_zero() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 0; });
}

bool DimensionVector::leq(const DimensionVector& other) const {
    if (size() != other.size()) return false;
    for (std::size_t k = 0; k < size(); ++k)
        if (dims_[k] > other.dims_[k]) return false;
    return true;
}

void DimensionVector::check_for(const Quiver& q) const {
    if (dims_.size() != q.num_vertices())
        throw Error(ErrorCode::InvalidDimensionVector,
                    "dimension vector has " + std::to_string(dims_.size()) + " entries, quiver has " +
                        std::to_string(q.num_vertices()) + " vertices");
}

DimensionVector DimensionVector::operator+(const DimensionVector& o) const {
    if (size() != o.size()) throw Error(ErrorCode::InvalidDimensionVector, "size mismatch");
    std::vector<int> out(size());
    for (std::size_t k = 0; k < size(); ++k) out[k] = dims_[k] + o.dims_[k];
    return DimensionVector(std::move(out));
}

DimensionVector DimensionVector::operator-(const DimensionVector& o) const {
    if (size() != o.size()) throw Error(ErrorCode::InvalidDimensionVector, "size mismatch");
    std::vector<int> out(size());
    for (std::size_t k = 0; k < size(); ++k) out[k] = dims_[k] - o.dims_[k];
    return DimensionVector(std::move(out));
}

std::string DimensionVector::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < size(); ++k) os << (k ? "," : "") << dims_[k];
    os << ')';
    return os.str();
}

// ------------------------------------------------------------ paths

void check_path(const Quiver& q, const Path& p) {
    if (p.edges.empty()) throw Error(ErrorCode::InvalidPath, "empty path");
    for (std::size_t a : p.edges)
        if (a >= q.num_edges()) throw Error(ErrorCode::InvalidPath, "edge index out of range");
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i) {
        if (q.edge(p.edges[i]).head != q.edge(p.edges[i + 1]).tail)
            throw Error(ErrorCode::InvalidPath, "edges '" + q.edge(p.edges[i]).id + "' and '" +
                                                    q.edge(p.edges[i + 1]).id + "' do not compose");
    }
}

Path make_path(const Quiver& q, const std::vector<std::string>& edge_ids) {
    Path p;
    for (const auto& id : edge_ids) p.edges.push_back(q.edge_index(id));
    check_path(q, p);
    return p;
}

std::string path_name(const Quiver& q, const Path& p) {
    std::string out;
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
        if (!out.empty()) out += '*';
        out += q.edge(*it).id;
    }
    return out;
}

// -------------------------------------------------------- relations

RelationSet::RelationSet(const Quiver& q, std::vector<Relation> relations) : relations_(std::move(relations)) {
    std::set<std::string> ids;
    for (const auto& r : relations_) {
        if (!ids.insert(r.id).second) throw Error(ErrorCode::InvalidRelation, "duplicate relation id '" + r.id + "'");
        if (r.tail >= q.num_vertices() || r.head >= q.num_vertices())
            throw Error(ErrorCode::InvalidRelation, "relation '" + r.id + "' references an unknown vertex");
        std::set<Path> seen;
        for (const auto& term : r.terms) {
            check_path(q, term.path);
            if (term.path.tail(q) != r.tail || term.path.head(q) != r.head)
                throw Error(ErrorCode::InvalidRelation, "relation '" + r.id + "': path '" + path_name(q, term.path) +
                                                            "' has the wrong endpoints");
            if (term.coeff == cplx(0.0, 0.0))
                throw Error(ErrorCode::InvalidRelation, "relation '" + r.id + "' has a zero coefficient");
            if (!seen.insert(term.path).second)
                throw Error(ErrorCode::InvalidRelation, "relation '" + r.id + "' repeats a path");
        }
    }
}

Relation make_relation(const Quiver& q, std::string id, std::string_view tail, std::string_view head,
                       const std::vector<std::pair<cplx, std::vector<std::string>>>& terms) {
    Relation r{std::move(id), q.vertex_index(tail), q.vertex_index(head), {}};
    for (const auto& [c, edges] : terms) r.terms.push_back(Term{c, make_path(q, edges)});
    return r;
}

// ------------------------------------------------------------ forms

int hom1_dim(const Quiver& q, const DimensionVector& source, const DimensionVector& target) {
    int total = 0;
    for (const auto& e : q.edges()) total += source[e.tail] * target[e.head];
    return total;
}

int rel_dim(const RelationSet& r, const DimensionVector& source, const DimensionVector& target) {
    int total = 0;
    for (const auto& rel : r) total += source[rel.tail] * target[rel.head];
    return total;
}

FormDims dims_and_forms(const Quiver& q, const RelationSet& r, const DimensionVector& v1,
                        const DimensionVector& v2) {
    v1.check_for(q);
    v2.check_for(q);
    FormDims out;
    for (std::size_t k = 0; k < q.num_vertices(); ++k) out.hom0 += v1[k] * v2[k];
    out.hom1 = hom1_dim(q, v2, v1);
    out.rel = rel_dim(r, v2, v1);
    out.ringel = out.hom0 - out.hom1;
    out.ringel_R = out.ringel + out.rel;
    return out;
}

// ------------------------------------------------- central elements

CentralElement canonical_central(const Quiver& q, const DimensionVector& v) {
    v.check_for(q);
    auto inf = q.framing();
    if (!inf) throw Error(ErrorCode::InvalidFraming, "quiver has no framing vertex");
    if (v[*inf] != 1) throw Error(ErrorCode::InvalidFraming, "canonical element needs dim 1 at the framing vertex");
    CentralElement alpha{std::vector<Rational>(q.num_vertices(), Rational(1))};
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < q.num_vertices(); ++k)
        if (k != *inf) sum += v[k];
    alpha.scalars[*inf] = Rational(-sum);
    return alpha;
}

SlopeData slope_data(const CentralElement& alpha, const DimensionVector& v) {
    if (alpha.scalars.size() != v.size()) throw Error(ErrorCode::InvalidDimensionVector, "size mismatch");
    if (v.is_zero()) throw Error(ErrorCode::ZeroDimensionVector, "slope of the zero dimension vector");
    SlopeData out;
    for (std::size_t k = 0; k < v.size(); ++k) out.degree += alpha.scalars[k] * Rational(v[k]);
    out.rank = v.total();
    out.slope = out.degree / Rational(out.rank);
    out.admissible = out.degree == Rational(0);
    return out;
}

bool is_admissible(const CentralElement& alpha, const DimensionVector& v) {
    if (alpha.scalars.size() != v.size()) return false;
    Rational degree;
    for (std::size_t k = 0; k < v.size(); ++k) degree += alpha.scalars[k] * Rational(v[k]);
    return degree == Rational(0);
}

CentralElement induced_central(const CentralElement& alpha, const DimensionVector& v, const DimensionVector& vp) {
    if (!vp.leq(v)) throw Error(ErrorCode::InvalidDimensionVector, "vp must satisfy 0 <= vp <= v");
    Rational s = slope_data(alpha, vp).slope;
    CentralElement out = alpha;
    for (auto& a : out.scalars) a -= s;
    return out;
}

// -------------------------------------------------- relation checks

namespace {

struct CheckContext {
    const Quiver& q;
    const RelationSet& r;
    std::vector<std::size_t> edges_by_id;
    std::vector<std::size_t> relations_by_id;
};

bool nonzero_path(const Relation& rel, const Path& p) {
    for (const auto& t : rel.terms)
        if (t.path == p) return t.coeff != cplx(0.0, 0.0);
    return false;
}

} // namespace

RelationChecks relation_set_checks(const Quiver& q, const RelationSet& r) {
    RelationChecks out;
    CheckContext ctx{q, r, {}, {}};
    ctx.edges_by_id.resize(q.num_edges());
    std::iota(ctx.edges_by_id.begin(), ctx.edges_by_id.end(), 0);
    std::sort(ctx.edges_by_id.begin(), ctx.edges_by_id.end(),
              [&](auto a, auto b) { return q.edge(a).id < q.edge(b).id; });
    ctx.relations_by_id.resize(r.size());
    std::iota(ctx.relations_by_id.begin(), ctx.relations_by_id.end(), 0);
    std::sort(ctx.relations_by_id.begin(), ctx.relations_by_id.end(),
              [&](auto a, auto b) { return r[a].id < r[b].id; });

    out.homogeneous = true;
    for (std::size_t i : ctx.relations_by_id) {
        const auto& rel = r[i];
        for (const auto& t : rel.terms) {
            if (t.path.length() != rel.terms.front().path.length()) {
                out.homogeneous = false;
                out.witnesses.push_back({"homogeneous", "", "", rel.id, path_name(q, t.path),
                                         "paths of different lengths in one relation"});
                break;
            }
        }
        if (!out.homogeneous) break;
    }

    out.quadratic = true;
    for (std::size_t i : ctx.relations_by_id) {
        for (const auto& t : r[i].terms) {
            if (t.path.length() != 2) {
                out.quadratic = false;
                out.witnesses.push_back({"quadratic", "", "", r[i].id, path_name(q, t.path), "path of length != 2"});
                break;
            }
        }
        if (!out.quadratic) break;
    }
    if (!out.quadratic) {
        out.witnesses.push_back({"complete", "", "", "", "", "not evaluated: relations are not quadratic"});
        out.witnesses.push_back({"loop_condition", "", "", "", "", "not evaluated: relations are not quadratic"});
        return out;
    }

    // Clause (1): every edge into the head of a relation leads a nonzero path of it.
    bool clause1 = true;
    for (std::size_t a : ctx.edges_by_id) {
        for (std::size_t i : ctx.relations_by_id) {
            const auto& rel = r[i];
            if (q.edge(a).head != rel.head) continue;
            bool found = std::any_of(rel.terms.begin(), rel.terms.end(),
                                     [&](const Term& t) { return t.coeff != cplx(0.0) && t.path.edges[1] == a; });
            if (!found) {
                clause1 = false;
                out.witnesses.push_back({"complete", "1", q.edge(a).id, rel.id, "",
                                         "no path of the relation ends with this edge"});
                break;
            }
        }
        if (!clause1) break;
    }

    // Clause (2): an edge out of a relation tail belongs to a unique relation and trails a unique path.
    bool clause2 = true;
    for (std::size_t a : ctx.edges_by_id) {
        std::vector<std::size_t> with_tail;
        for (std::size_t i : ctx.relations_by_id)
            if (r[i].tail == q.edge(a).tail) with_tail.push_back(i);
        if (with_tail.empty()) continue;
        if (with_tail.size() > 1) {
            clause2 = false;
            out.witnesses.push_back({"complete", "2", q.edge(a).id, r[with_tail[1]].id, "",
                                     "edge tail is the tail of " + std::to_string(with_tail.size()) + " relations"});
            break;
        }
        const auto& rel = r[with_tail.front()];
        auto count = std::count_if(rel.terms.begin(), rel.terms.end(),
                                   [&](const Term& t) { return t.coeff != cplx(0.0) && t.path.edges[0] == a; });
        if (count != 1) {
            clause2 = false;
            out.witnesses.push_back({"complete", "2", q.edge(a).id, rel.id, "",
                                     std::to_string(count) + " paths of the relation start with this edge"});
            break;
        }
    }
    out.complete = clause1 && clause2;

    // Loop condition: a loop at t(r) starting a path b*a forces a unique loop a' at h(r) with a'*b in r.
    out.loop_condition = true;
    for (std::size_t i : ctx.relations_by_id) {
        const auto& rel = r[i];
        for (const auto& t : rel.terms) {
            std::size_t first = t.path.edges[0];
            std::size_t second = t.path.edges[1];
            const auto& e = q.edge(first);
            if (!(e.is_loop() && e.tail == rel.tail)) continue;
            int matches = 0;
            for (std::size_t c = 0; c < q.num_edges(); ++c) {
                const auto& loop = q.edge(c);
                if (!(loop.is_loop() && loop.tail == rel.head)) continue;
                if (nonzero_path(rel, Path{{second, c}})) ++matches;
            }
            if (matches != 1) {
                out.loop_condition = false;
                out.witnesses.push_back({"loop_condition", "", e.id, rel.id, path_name(q, t.path),
                                         std::to_string(matches) + " matching loops at the relation head"});
                break;
            }
        }
        if (!out.loop_condition) break;
    }
    return out;
}

// ------------------------------------------------------- builders

QuiverWithRelations build_nakajima_double(const Quiver& base, const std::map<std::string, std::string>& conjugate_ids) {
    std::vector<EdgeSpec> edges;
    std::vector<std::string> conj(base.num_edges());
    for (std::size_t a = 0; a < base.num_edges(); ++a) {
        const auto& e = base.edge(a);
        auto it = conjugate_ids.find(e.id);
        conj[a] = it != conjugate_ids.end() ? it->second : e.id + "bar";
        edges.push_back({e.id, base.vertex_id(e.tail), base.vertex_id(e.head)});
    }
    for (std::size_t a = 0; a < base.num_edges(); ++a) {
        const auto& e = base.edge(a);
        edges.push_back({conj[a], base.vertex_id(e.head), base.vertex_id(e.tail)});
    }
    std::optional<std::string> framing;
    if (base.framing()) framing = base.vertex_id(*base.framing());
    auto q = std::make_shared<const Quiver>(base.vertices(), edges, framing);

    std::vector<Relation> rels;
    for (std::size_t k = 0; k < base.num_vertices(); ++k) {
        std::map<Path, cplx> terms;
        for (std::size_t a = 0; a < base.num_edges(); ++a) {
            const auto& e = base.edge(a);
            std::size_t x = a;
            std::size_t xbar = base.num_edges() + a;
            // a*abar: apply abar then a, a path from h(a) to h(a).
            if (e.head == k) terms[Path{{xbar, x}}] += 1.0;
            // abar*a: apply a then abar, a path from t(a) to t(a).
            if (e.tail == k) terms[Path{{x, xbar}}] -= 1.0;
        }
        Relation r{"r_" + base.vertex_id(k), k, k, {}};
        for (const auto& [p, c] : terms)
            if (c != cplx(0.0)) r.terms.push_back({c, p});
        // Keep the print-order convention of the moment-map relation: head terms first.
        std::stable_sort(r.terms.begin(), r.terms.end(),
                         [](const Term& s, const Term& t) { return s.coeff.real() > t.coeff.real(); });
        rels.push_back(std::move(r));
    }
    RelationSet rs(*q, std::move(rels));
    return {q, std::move(rs)};
}

HandsawQuiver build_handsaw(int n, const std::vector<int>& v_dims, const std::vector<int>& w_dims) {
    if (n < 2) throw Error(ErrorCode::InvalidParameter, "handsaw quiver needs n >= 2");
    if (!v_dims.empty() && static_cast<int>(v_dims.size()) != n - 1)
        throw Error(ErrorCode::InvalidParameter, "handsaw needs n-1 V dimensions");
    if (!w_dims.empty() && static_cast<int>(w_dims.size()) != n)
        throw Error(ErrorCode::InvalidParameter, "handsaw needs n W dimensions");
    auto V = [](int k) { return "V" + std::to_string(k); };
    auto W = [](int k) { return "W" + std::to_string(k); };
    std::vector<std::string> vertices;
    for (int k = 1; k <= n - 1; ++k) vertices.push_back(V(k));
    for (int k = 1; k <= n; ++k) vertices.push_back(W(k));

    std::vector<EdgeSpec> edges;
    for (int k = 1; k <= n - 2; ++k) edges.push_back({"B1_" + std::to_string(k), V(k), V(k + 1)});
    for (int k = 1; k <= n - 1; ++k) edges.push_back({"B2_" + std::to_string(k), V(k), V(k)});
    for (int k = 1; k <= n - 1; ++k) edges.push_back({"a_" + std::to_string(k), W(k), V(k)});
    for (int k = 2; k <= n; ++k) edges.push_back({"b_" + std::to_string(k), V(k - 1), W(k)});
    auto q = std::make_shared<const Quiver>(vertices, edges);

    std::vector<Relation> rels;
    for (int k = 1; k <= n - 2; ++k) {
        auto s = std::to_string(k);
        auto s1 = std::to_string(k + 1);
        rels.push_back(make_relation(*q, "r_" + s, V(k), V(k + 1),
                                     {{1.0, {"B2_" + s, "B1_" + s}},
                                      {-1.0, {"B1_" + s, "B2_" + s1}},
                                      {1.0, {"b_" + s1, "a_" + s1}}}));
    }
    RelationSet rs(*q, std::move(rels));

    std::vector<int> dims(q->num_vertices(), 0);
    for (std::size_t i = 0; i < v_dims.size(); ++i) dims[i] = v_dims[i];
    for (std::size_t i = 0; i < w_dims.size(); ++i) dims[n - 1 + i] = w_dims[i];
    return {q, std::move(rs), DimensionVector(dims)};
}

QuiverWithRelations build_extended_adhm(int n_loops, const std::vector<int>& sigma) {
    if (n_loops < 1) throw Error(ErrorCode::InvalidParameter, "extended ADHM needs at least one loop");
    if (static_cast<int>(sigma.size()) != n_loops)
        throw Error(ErrorCode::InvalidParameter, "permutation has the wrong length");
    std::vector<int> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n_loops; ++i)
        if (sorted[i] != i + 1) throw Error(ErrorCode::InvalidParameter, "sigma is not a permutation of 1..n");

    std::vector<EdgeSpec> edges;
    for (int i = 1; i <= n_loops; ++i) edges.push_back({"a" + std::to_string(i), "V", "V"});
    edges.push_back({"b1", "W", "V"});
    edges.push_back({"b2", "V", "W"});
    auto q = std::make_shared<const Quiver>(std::vector<std::string>{"V", "W"}, edges);

    std::vector<std::pair<cplx, std::vector<std::string>>> terms;
    for (int i = 1; i <= n_loops; ++i)
        terms.push_back({1.0, {"a" + std::to_string(sigma[i - 1]), "a" + std::to_string(i)}});
    terms.push_back({1.0, {"b2", "b1"}});
    std::vector<Relation> rels;
    rels.push_back(make_relation(*q, "r", "V", "V", terms));
    rels.push_back(make_relation(*q, "r'", "W", "W", {{1.0, {"b1", "b2"}}}));
    RelationSet rs(*q, std::move(rels));
    return {q, std::move(rs)};
}

} // namespace qm
