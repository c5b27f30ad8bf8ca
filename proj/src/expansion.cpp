#include "quivermorse/expansion.hpp"

#include "quivermorse/errors.hpp"
#include "quivermorse/fixtures.hpp"

#include <map>
#include <set>
#include <tuple>

namespace qm {

DimensionVector ExpansionSpec::base_dims() const {
    std::vector<int> dims(base->num_vertices(), 0);
    for (const auto& p : vertices) dims.at(p.base) += p.dim;
    return DimensionVector(dims);
}

void ExpansionSpec::validate() const {
    if (!base) throw Error(ErrorCode::InvalidExpansion, "missing base quiver");
    std::vector<int> parts(base->num_vertices(), 0);
    std::vector<int> total(base->num_vertices(), 0);
    std::set<std::string> ids;
    for (const auto& p : vertices) {
        if (p.base >= base->num_vertices()) throw Error(ErrorCode::InvalidExpansion, "part of unknown vertex");
        if (p.dim < 0) throw Error(ErrorCode::InvalidExpansion, "negative part dimension");
        if (!ids.insert(p.id).second) throw Error(ErrorCode::InvalidExpansion, "duplicate part id '" + p.id + "'");
        ++parts[p.base];
        total[p.base] += p.dim;
    }
    for (std::size_t k = 0; k < base->num_vertices(); ++k) {
        if (parts[k] == 0)
            throw Error(ErrorCode::InvalidExpansion, "vertex '" + base->vertex_id(k) + "' has no part");
        // A vertex of total dimension zero keeps a single zero-dimensional part.
        if (total[k] > 0) {
            for (const auto& p : vertices)
                if (p.base == k && p.dim == 0)
                    throw Error(ErrorCode::InvalidExpansion, "part '" + p.id + "' has dimension zero");
        } else if (parts[k] != 1) {
            throw Error(ErrorCode::InvalidExpansion, "zero-dimensional vertex split into several parts");
        }
    }
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> lifts;
    std::set<std::string> edge_ids;
    for (const auto& e : edges) {
        if (e.base >= base->num_edges() || e.tail >= vertices.size() || e.head >= vertices.size())
            throw Error(ErrorCode::InvalidExpansion, "retained edge '" + e.id + "' out of range");
        const auto& b = base->edge(e.base);
        if (vertices[e.tail].base != b.tail || vertices[e.head].base != b.head)
            throw Error(ErrorCode::InvalidExpansion, "retained edge '" + e.id + "' does not lift '" + b.id + "'");
        if (!lifts.insert({e.base, e.tail, e.head}).second)
            throw Error(ErrorCode::InvalidExpansion, "edge lift retained twice");
        if (!edge_ids.insert(e.id).second) throw Error(ErrorCode::InvalidExpansion, "duplicate edge id '" + e.id + "'");
    }
}

namespace {

struct LiftedPath {
    std::vector<std::size_t> parts;  // parts visited: parts[0] = tail, parts[i+1] = head of edge i
};

void enumerate_lifts(const ExpansionSpec& spec, const std::vector<std::vector<std::size_t>>& fibre, const Path& p,
                     std::size_t tail_part, std::size_t head_part, std::vector<std::size_t>& current,
                     std::vector<LiftedPath>& out) {
    std::size_t i = current.size() - 1;  // number of edges already lifted
    const auto& q = *spec.base;
    if (i == p.length()) {
        if (current.back() == head_part) out.push_back({current});
        return;
    }
    std::size_t h = q.edge(p.edges[i]).head;
    for (std::size_t part : fibre[h]) {
        if (i + 1 == p.length() && part != head_part) continue;
        current.push_back(part);
        enumerate_lifts(spec, fibre, p, tail_part, head_part, current, out);
        current.pop_back();
    }
}

} // namespace

RestrictionResult expand_restrict(const ExpansionSpec& spec) {
    spec.validate();
    const auto& q = *spec.base;

    std::vector<std::string> vids;
    std::vector<int> dims;
    for (const auto& p : spec.vertices) {
        vids.push_back(p.id);
        dims.push_back(p.dim);
    }
    std::vector<EdgeSpec> espec;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> retained;
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const auto& e = spec.edges[i];
        espec.push_back({e.id, vids[e.tail], vids[e.head]});
        retained[{e.base, e.tail, e.head}] = i;
    }
    std::optional<std::string> framing;
    if (q.framing()) {
        std::vector<std::size_t> over;
        for (std::size_t i = 0; i < spec.vertices.size(); ++i)
            if (spec.vertices[i].base == *q.framing()) over.push_back(i);
        if (over.size() == 1) framing = vids[over.front()];
    }
    auto qprime = std::make_shared<const Quiver>(vids, espec, framing);

    std::vector<std::vector<std::size_t>> fibre(q.num_vertices());
    for (std::size_t i = 0; i < spec.vertices.size(); ++i) fibre[spec.vertices[i].base].push_back(i);

    auto lifted_name = [&](std::size_t edge, std::size_t t, std::size_t h) {
        auto it = retained.find({edge, t, h});
        if (it != retained.end()) return spec.edges[it->second].id;
        return q.edge(edge).id + "[" + vids[t] + "->" + vids[h] + "]";
    };

    RestrictionResult out;
    out.qprime = qprime;
    out.dims = DimensionVector(dims);
    std::vector<Relation> rels;
    for (std::size_t ri = 0; ri < spec.base_relations.size(); ++ri) {
        const auto& r = spec.base_relations[ri];
        for (std::size_t tp : fibre[r.tail]) {
            for (std::size_t hp : fibre[r.head]) {
                std::string id = r.id + "[" + vids[tp] + "->" + vids[hp] + "]";
                Relation lifted{id, tp, hp, {}};
                std::vector<DroppedPath> dropped;
                for (const auto& term : r.terms) {
                    std::vector<LiftedPath> lifts;
                    std::vector<std::size_t> current{tp};
                    enumerate_lifts(spec, fibre, term.path, tp, hp, current, lifts);
                    for (const auto& lp : lifts) {
                        Path kept;
                        int removed = 0;
                        std::string name;
                        for (std::size_t i = 0; i < term.path.length(); ++i) {
                            std::size_t edge = term.path.edges[i];
                            auto it = retained.find({edge, lp.parts[i], lp.parts[i + 1]});
                            if (it == retained.end()) ++removed;
                            else kept.edges.push_back(it->second);
                            std::string piece = lifted_name(edge, lp.parts[i], lp.parts[i + 1]);
                            name = name.empty() ? piece : piece + "*" + name;
                        }
                        if (removed == 0) lifted.terms.push_back({term.coeff, kept});
                        else dropped.push_back({id, name, term.coeff, removed, false});
                    }
                }
                bool keep = !lifted.terms.empty();
                for (auto& d : dropped) {
                    d.relation_retained = keep;
                    // Only paths lost from relations that survive restriction constrain the
                    // retained relation map; those must lose at least two edges.
                    if (keep && d.coeff != cplx(0.0) && d.removed_edges < 2) out.fully_restricted = false;
                    out.dropped_paths.push_back(d);
                }
                if (keep) {
                    rels.push_back(std::move(lifted));
                    out.base_relation.push_back(ri);
                }
            }
        }
    }
    out.rprime = RelationSet(*qprime, std::move(rels));
    return out;
}

NegativeSliceQuiver build_negative_slice_quiver(const Quiver& q, const RelationSet& r, const DimensionVector& v1,
                                                const DimensionVector& v2) {
    v1.check_for(q);
    v2.check_for(q);
    NegativeSliceQuiver out;
    auto& spec = out.spec;
    spec.base = std::make_shared<const Quiver>(q);
    spec.base_relations = r;
    std::vector<std::optional<std::size_t>> copy1(q.num_vertices()), copy2(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) {
        bool zero = v1[k] + v2[k] == 0;
        if (v1[k] > 0 || zero) {
            copy1[k] = spec.vertices.size();
            spec.vertices.push_back({q.vertex_id(k) + ".1", k, v1[k]});
        }
        if (v2[k] > 0) {
            copy2[k] = spec.vertices.size();
            spec.vertices.push_back({q.vertex_id(k) + ".2", k, v2[k]});
        }
    }
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        const auto& e = q.edge(a);
        if (copy1[e.tail] && copy1[e.head]) spec.edges.push_back({e.id + ".11", a, *copy1[e.tail], *copy1[e.head]});
    }
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        const auto& e = q.edge(a);
        if (copy2[e.tail] && copy1[e.head]) spec.edges.push_back({e.id + ".21", a, *copy2[e.tail], *copy1[e.head]});
    }
    for (const auto& rel : r) {
        out.nu1_blocks.push_back({rel.id, v1[rel.head], v1[rel.tail]});
        out.nu2_blocks.push_back({rel.id, v1[rel.head], v2[rel.tail]});
    }
    return out;
}

ExpansionSpec trivial_expansion(QuiverPtr q, RelationSet r, const DimensionVector& v) {
    v.check_for(*q);
    ExpansionSpec spec;
    spec.base = q;
    spec.base_relations = std::move(r);
    for (std::size_t k = 0; k < q->num_vertices(); ++k) spec.vertices.push_back({q->vertex_id(k), k, v[k]});
    for (std::size_t a = 0; a < q->num_edges(); ++a) {
        const auto& e = q->edge(a);
        spec.edges.push_back({e.id, a, e.tail, e.head});
    }
    return spec;
}

ExpansionSpec adhm_to_handsaw_spec(int n, const std::vector<int>& v_dims, const std::vector<int>& w_dims) {
    if (n < 2) throw Error(ErrorCode::InvalidParameter, "handsaw split needs n >= 2");
    if (static_cast<int>(v_dims.size()) != n - 1 || static_cast<int>(w_dims.size()) != n)
        throw Error(ErrorCode::InvalidParameter, "handsaw split needs n-1 V dimensions and n W dimensions");
    auto adhm = fixtures::adhm();
    const auto& q = *adhm.quiver;
    ExpansionSpec spec;
    spec.base = adhm.quiver;
    spec.base_relations = adhm.relations;
    std::size_t V = q.vertex_index("V");
    std::size_t W = q.vertex_index("W");
    for (int k = 1; k <= n - 1; ++k) spec.vertices.push_back({"V" + std::to_string(k), V, v_dims[k - 1]});
    for (int k = 1; k <= n; ++k) spec.vertices.push_back({"W" + std::to_string(k), W, w_dims[k - 1]});
    auto vpart = [](int k) { return static_cast<std::size_t>(k - 1); };
    auto wpart = [n](int k) { return static_cast<std::size_t>(n - 1 + k - 1); };
    for (int k = 1; k <= n - 2; ++k)
        spec.edges.push_back({"B1_" + std::to_string(k), q.edge_index("B1"), vpart(k), vpart(k + 1)});
    for (int k = 1; k <= n - 1; ++k)
        spec.edges.push_back({"B2_" + std::to_string(k), q.edge_index("B2"), vpart(k), vpart(k)});
    for (int k = 1; k <= n - 1; ++k)
        spec.edges.push_back({"a_" + std::to_string(k), q.edge_index("a"), wpart(k), vpart(k)});
    for (int k = 2; k <= n; ++k)
        spec.edges.push_back({"b_" + std::to_string(k), q.edge_index("b"), vpart(k - 1), wpart(k)});
    return spec;
}

} // namespace qm
