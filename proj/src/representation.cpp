#include "quivermorse/representation.hpp"

#include "quivermorse/errors.hpp"

#include <cmath>

namespace qm {

namespace {

void check_shape(const Mat& m, int rows, int cols, const std::string& what) {
    if (m.rows() != rows || m.cols() != cols)
        throw Error(ErrorCode::ShapeError, what + " has shape " + std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                               "x" + std::to_string(cols));
}

void check_same_quiver(const QuiverPtr& a, const QuiverPtr& b) {
    if (a != b && !(*a == *b)) throw Error(ErrorCode::ShapeError, "operands live on different quivers");
}

} // namespace

// ---------------------------------------------------------- containers

Representation Representation::zero(QuiverPtr q, const DimensionVector& v) {
    v.check_for(*q);
    Representation x{q, v, {}};
    for (const auto& e : q->edges()) x.blocks.push_back(Mat::Zero(v[e.head], v[e.tail]));
    return x;
}

Representation Representation::random(QuiverPtr q, const DimensionVector& v, Rng& rng) {
    v.check_for(*q);
    Representation x{q, v, {}};
    for (const auto& e : q->edges()) x.blocks.push_back(rng.matrix(v[e.head], v[e.tail]));
    return x;
}

void Representation::check() const {
    dims.check_for(*quiver);
    if (blocks.size() != quiver->num_edges()) throw Error(ErrorCode::ShapeError, "wrong number of edge blocks");
    for (std::size_t a = 0; a < blocks.size(); ++a) {
        const auto& e = quiver->edge(a);
        check_shape(blocks[a], dims[e.head], dims[e.tail], "block '" + e.id + "'");
    }
}

GradedLinearMap GradedLinearMap::zero(QuiverPtr q, const DimensionVector& source, const DimensionVector& target) {
    source.check_for(*q);
    target.check_for(*q);
    GradedLinearMap m{q, source, target, {}};
    for (const auto& e : q->edges()) m.blocks.push_back(Mat::Zero(target[e.head], source[e.tail]));
    return m;
}

GradedLinearMap GradedLinearMap::random(QuiverPtr q, const DimensionVector& source, const DimensionVector& target,
                                        Rng& rng) {
    auto m = zero(q, source, target);
    for (auto& b : m.blocks) b = rng.matrix(static_cast<int>(b.rows()), static_cast<int>(b.cols()));
    return m;
}

void GradedLinearMap::check() const {
    source.check_for(*quiver);
    target.check_for(*quiver);
    if (blocks.size() != quiver->num_edges()) throw Error(ErrorCode::ShapeError, "wrong number of edge blocks");
    for (std::size_t a = 0; a < blocks.size(); ++a) {
        const auto& e = quiver->edge(a);
        check_shape(blocks[a], target[e.head], source[e.tail], "block '" + e.id + "'");
    }
}

GradedLinearMap GradedLinearMap::operator+(const GradedLinearMap& o) const {
    GradedLinearMap out = *this;
    for (std::size_t a = 0; a < blocks.size(); ++a) out.blocks[a] += o.blocks.at(a);
    return out;
}

GradedLinearMap GradedLinearMap::operator-(const GradedLinearMap& o) const {
    GradedLinearMap out = *this;
    for (std::size_t a = 0; a < blocks.size(); ++a) out.blocks[a] -= o.blocks.at(a);
    return out;
}

GradedLinearMap GradedLinearMap::operator*(cplx s) const {
    GradedLinearMap out = *this;
    for (auto& b : out.blocks) b *= s;
    return out;
}

LieAlgebraElement LieAlgebraElement::zero(const DimensionVector& source, const DimensionVector& target) {
    LieAlgebraElement u{source, target, {}, false};
    for (std::size_t k = 0; k < source.size(); ++k) u.blocks.push_back(Mat::Zero(target[k], source[k]));
    return u;
}

LieAlgebraElement LieAlgebraElement::identity(const DimensionVector& v) {
    LieAlgebraElement u{v, v, {}, false};
    for (std::size_t k = 0; k < v.size(); ++k) u.blocks.push_back(Mat::Identity(v[k], v[k]));
    return u;
}

LieAlgebraElement LieAlgebraElement::central(const CentralElement& alpha, const DimensionVector& v) {
    LieAlgebraElement u{v, v, {}, true};
    for (std::size_t k = 0; k < v.size(); ++k)
        u.blocks.push_back(Mat::Identity(v[k], v[k]) * cplx(0.0, to_double(alpha[k])));
    return u;
}

LieAlgebraElement LieAlgebraElement::random(const DimensionVector& source, const DimensionVector& target, Rng& rng) {
    LieAlgebraElement u{source, target, {}, false};
    for (std::size_t k = 0; k < source.size(); ++k) u.blocks.push_back(rng.matrix(target[k], source[k]));
    return u;
}

double LieAlgebraElement::skew_defect() const {
    double worst = 0.0;
    for (const auto& b : blocks)
        if (b.rows() == b.cols()) worst = std::max(worst, (b + b.adjoint()).norm());
    return worst;
}

LieAlgebraElement LieAlgebraElement::operator-(const LieAlgebraElement& o) const {
    LieAlgebraElement out = *this;
    for (std::size_t k = 0; k < blocks.size(); ++k) out.blocks[k] -= o.blocks.at(k);
    out.skew = skew && o.skew;
    return out;
}

RelationValue RelationValue::zero(const RelationSet& r, const DimensionVector& source, const DimensionVector& target) {
    RelationValue u;
    for (const auto& rel : r) u.blocks.push_back(Mat::Zero(target[rel.head], source[rel.tail]));
    return u;
}

RelationValue RelationValue::random(const RelationSet& r, const DimensionVector& source, const DimensionVector& target,
                                    Rng& rng) {
    RelationValue u;
    for (const auto& rel : r) u.blocks.push_back(rng.matrix(target[rel.head], source[rel.tail]));
    return u;
}

BlockLayout hom1_layout(const Quiver& q, const DimensionVector& source, const DimensionVector& target) {
    std::vector<std::pair<int, int>> shapes;
    for (const auto& e : q.edges()) shapes.emplace_back(target[e.head], source[e.tail]);
    return BlockLayout(std::move(shapes));
}

BlockLayout hom0_layout(const DimensionVector& source, const DimensionVector& target) {
    std::vector<std::pair<int, int>> shapes;
    for (std::size_t k = 0; k < source.size(); ++k) shapes.emplace_back(target[k], source[k]);
    return BlockLayout(std::move(shapes));
}

BlockLayout rel_layout(const RelationSet& r, const DimensionVector& source, const DimensionVector& target) {
    std::vector<std::pair<int, int>> shapes;
    for (const auto& rel : r) shapes.emplace_back(target[rel.head], source[rel.tail]);
    return BlockLayout(std::move(shapes));
}

cplx inner(const std::vector<Mat>& a, const std::vector<Mat>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeError, "inner product of different block counts");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        check_shape(b[i], static_cast<int>(a[i].rows()), static_cast<int>(a[i].cols()), "inner product block");
        // tr(A B^*) = sum_ij A_ij conj(B_ij)
        s += (a[i].array() * b[i].array().conjugate()).sum();
    }
    return s;
}

// -------------------------------------------------------- path maps

Mat evaluate_path(const Representation& x, const Path& p) {
    check_path(*x.quiver, p);
    Mat out = x[p.edges.front()];
    for (std::size_t i = 1; i < p.edges.size(); ++i) out = x[p.edges[i]] * out;
    return out;
}

RelationValue relation_map(const Representation& x, const RelationSet& r) {
    RelationValue out;
    for (const auto& rel : r) {
        Mat m = Mat::Zero(x.dims[rel.head], x.dims[rel.tail]);
        for (const auto& t : rel.terms) m += t.coeff * evaluate_path(x, t.path);
        out.blocks.push_back(std::move(m));
    }
    return out;
}

namespace {

void check_triangular_operands(const Representation& x1, const Representation& x2, const GradedLinearMap& dx) {
    check_same_quiver(x1.quiver, x2.quiver);
    check_same_quiver(x1.quiver, dx.quiver);
    if (dx.source != x2.dims || dx.target != x1.dims)
        throw Error(ErrorCode::ShapeError, "dx must map the x2 dimensions " + x2.dims.str() + " to the x1 dimensions " +
                                               x1.dims.str());
    x1.check();
    x2.check();
    dx.check();
}

} // namespace

Mat path_derivative(const Representation& x1, const Representation& x2, const GradedLinearMap& dx, const Path& p) {
    check_triangular_operands(x1, x2, dx);
    check_path(*x1.quiver, p);
    const auto& q = *x1.quiver;
    const std::size_t n = p.edges.size();
    // right[l] = (x2)_{a_{l-1}} ... (x2)_{a_1}, left[l] = (x1)_{a_n} ... (x1)_{a_{l+1}} (0-based l).
    std::vector<Mat> right(n), left(n);
    right[0] = Mat::Identity(x2.dims[q.edge(p.edges[0]).tail], x2.dims[q.edge(p.edges[0]).tail]);
    for (std::size_t l = 1; l < n; ++l) right[l] = x2[p.edges[l - 1]] * right[l - 1];
    std::size_t h = q.edge(p.edges[n - 1]).head;
    left[n - 1] = Mat::Identity(x1.dims[h], x1.dims[h]);
    for (std::size_t l = n - 1; l-- > 0;) left[l] = left[l + 1] * x1[p.edges[l + 1]];
    Mat out = Mat::Zero(x1.dims[h], x2.dims[q.edge(p.edges[0]).tail]);
    for (std::size_t l = 0; l < n; ++l) out += left[l] * dx[p.edges[l]] * right[l];
    return out;
}

RelationValue d_nu(const Representation& x1, const Representation& x2, const RelationSet& r,
                   const GradedLinearMap& dx) {
    check_triangular_operands(x1, x2, dx);
    RelationValue out;
    for (const auto& rel : r) {
        Mat m = Mat::Zero(x1.dims[rel.head], x2.dims[rel.tail]);
        for (const auto& t : rel.terms) m += t.coeff * path_derivative(x1, x2, dx, t.path);
        out.blocks.push_back(std::move(m));
    }
    return out;
}

GradedLinearMap d_nu_adjoint(const Representation& x1, const Representation& x2, const RelationSet& r,
                             const RelationValue& u) {
    check_same_quiver(x1.quiver, x2.quiver);
    if (u.blocks.size() != r.size()) throw Error(ErrorCode::ShapeError, "one block per relation expected");
    auto out = GradedLinearMap::zero(x1.quiver, x2.dims, x1.dims);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto& rel = r[i];
        check_shape(u.blocks[i], x1.dims[rel.head], x2.dims[rel.tail], "relation block '" + rel.id + "'");
        for (const auto& t : rel.terms) {
            if (t.path.length() != 2)
                throw Error(ErrorCode::UnsupportedRelationDegree,
                            "adjoint is implemented for quadratic relations; '" + rel.id + "' has a path of length " +
                                std::to_string(t.path.length()));
            std::size_t a1 = t.path.edges[0];
            std::size_t a2 = t.path.edges[1];
            cplx c = std::conj(t.coeff);
            out[a1] += c * x1[a2].adjoint() * u.blocks[i];
            out[a2] += c * u.blocks[i] * x2[a1].adjoint();
        }
    }
    return out;
}

// --------------------------------------------------- group actions

GradedLinearMap inf_action(const Representation& x1, const Representation& x2, const LieAlgebraElement& u) {
    check_same_quiver(x1.quiver, x2.quiver);
    if (u.source != x2.dims || u.target != x1.dims)
        throw Error(ErrorCode::ShapeError, "u must map the x2 dimensions to the x1 dimensions");
    auto out = GradedLinearMap::zero(x1.quiver, x2.dims, x1.dims);
    for (std::size_t a = 0; a < x1.quiver->num_edges(); ++a) {
        const auto& e = x1.quiver->edge(a);
        out[a] = u[e.head] * x2[a] - x1[a] * u[e.tail];
    }
    return out;
}

GradedLinearMap inf_action(const Representation& x, const LieAlgebraElement& u) { return inf_action(x, x, u); }

LieAlgebraElement inf_action_adjoint(const Representation& x1, const Representation& x2, const GradedLinearMap& dx) {
    check_triangular_operands(x1, x2, dx);
    auto out = LieAlgebraElement::zero(x2.dims, x1.dims);
    for (std::size_t a = 0; a < x1.quiver->num_edges(); ++a) {
        const auto& e = x1.quiver->edge(a);
        out[e.head] += dx[a] * x2[a].adjoint();
        out[e.tail] -= x1[a].adjoint() * dx[a];
    }
    return out;
}

LieAlgebraElement inf_action_adjoint(const Representation& x, const GradedLinearMap& dx) {
    return inf_action_adjoint(x, x, dx);
}

LieAlgebraElement moment_map(const Representation& x) {
    auto out = LieAlgebraElement::zero(x.dims, x.dims);
    out.skew = true;
    for (std::size_t a = 0; a < x.quiver->num_edges(); ++a) {
        const auto& e = x.quiver->edge(a);
        out[e.head] += x[a] * x[a].adjoint();
        out[e.tail] -= x[a].adjoint() * x[a];
    }
    const cplx factor(0.0, -0.5);  // 1/(2i)
    for (auto& b : out.blocks) b *= factor;
    return out;
}

Mat inf_action_matrix(const Representation& x1, const Representation& x2) {
    const auto& q = *x1.quiver;
    auto in = hom0_layout(x2.dims, x1.dims);
    auto outl = hom1_layout(q, x2.dims, x1.dims);
    return assemble(in.size(), outl.size(), [&](const Vec& v) {
        LieAlgebraElement u{x2.dims, x1.dims, in.unflatten(v), false};
        return outl.flatten(inf_action(x1, x2, u).blocks);
    });
}

Mat d_nu_matrix(const Representation& x1, const Representation& x2, const RelationSet& r) {
    const auto& q = *x1.quiver;
    auto in = hom1_layout(q, x2.dims, x1.dims);
    auto outl = rel_layout(r, x2.dims, x1.dims);
    return assemble(in.size(), outl.size(), [&](const Vec& v) {
        GradedLinearMap dx{x1.quiver, x2.dims, x1.dims, in.unflatten(v)};
        return outl.flatten(d_nu(x1, x2, r, dx).blocks);
    });
}

// ------------------------------------------------ block structure

Representation direct_sum(const Representation& x1, const Representation& x2) {
    return block_triangular(x1, x2, GradedLinearMap::zero(x1.quiver, x2.dims, x1.dims));
}

Representation block_triangular(const Representation& x1, const Representation& x2, const GradedLinearMap& dx) {
    check_triangular_operands(x1, x2, dx);
    const auto& q = *x1.quiver;
    auto v = x1.dims + x2.dims;
    auto x = Representation::zero(x1.quiver, v);
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        const auto& e = q.edge(a);
        int h1 = x1.dims[e.head], t1 = x1.dims[e.tail];
        int h2 = x2.dims[e.head], t2 = x2.dims[e.tail];
        x[a].block(0, 0, h1, t1) = x1[a];
        x[a].block(h1, t1, h2, t2) = x2[a];
        x[a].block(0, t1, h1, t2) = dx[a];
    }
    return x;
}

std::pair<Representation, Representation> split_diagonal(const Representation& x, const DimensionVector& v1) {
    if (!v1.leq(x.dims)) throw Error(ErrorCode::ShapeError, "split dimension exceeds the representation");
    auto v2 = x.dims - v1;
    auto x1 = Representation::zero(x.quiver, v1);
    auto x2 = Representation::zero(x.quiver, v2);
    for (std::size_t a = 0; a < x.quiver->num_edges(); ++a) {
        const auto& e = x.quiver->edge(a);
        x1[a] = x[a].block(0, 0, v1[e.head], v1[e.tail]);
        x2[a] = x[a].block(v1[e.head], v1[e.tail], v2[e.head], v2[e.tail]);
    }
    return {x1, x2};
}

GradedLinearMap upper_block(const Representation& x, const DimensionVector& v1) {
    auto v2 = x.dims - v1;
    auto m = GradedLinearMap::zero(x.quiver, v2, v1);
    for (std::size_t a = 0; a < x.quiver->num_edges(); ++a) {
        const auto& e = x.quiver->edge(a);
        m[a] = x[a].block(0, v1[e.tail], v1[e.head], v2[e.tail]);
    }
    return m;
}

Representation act(const std::vector<Mat>& g, const Representation& x) {
    if (g.size() != x.quiver->num_vertices()) throw Error(ErrorCode::ShapeError, "one group element per vertex");
    std::vector<Mat> inv;
    for (std::size_t k = 0; k < g.size(); ++k) {
        check_shape(g[k], x.dims[k], x.dims[k], "group element");
        inv.push_back(g[k].rows() ? Mat(g[k].inverse()) : g[k]);
    }
    Representation out = x;
    for (std::size_t a = 0; a < x.quiver->num_edges(); ++a) {
        const auto& e = x.quiver->edge(a);
        out[a] = g[e.head] * x[a] * inv[e.tail];
    }
    return out;
}

GradedLinearMap to_graded(const Representation& x) { return {x.quiver, x.dims, x.dims, x.blocks}; }

Representation from_graded(const GradedLinearMap& m) {
    if (m.source != m.target) throw Error(ErrorCode::ShapeError, "only square graded maps are representations");
    return {m.quiver, m.source, m.blocks};
}

Representation project_to_relations(const Representation& x, const RelationSet& r, int max_iter, double* residual) {
    Representation y = x;
    auto layout = hom1_layout(*x.quiver, x.dims, x.dims);
    auto rl = rel_layout(r, x.dims, x.dims);
    double res = relation_map(y, r).norm();
    for (int it = 0; it < max_iter && rl.size() > 0; ++it) {
        double scale = 1.0 + y.norm() * y.norm();
        if (res <= 1e-15 * scale) break;
        Mat j = d_nu_matrix(y, y, r);
        Vec rhs = rl.flatten(relation_map(y, r).blocks);
        Vec step = j.completeOrthogonalDecomposition().solve(rhs);
        auto delta = layout.unflatten(step);
        Representation trial = y;
        for (std::size_t a = 0; a < trial.blocks.size(); ++a) trial[a] -= delta[a];
        double trial_res = relation_map(trial, r).norm();
        if (!(trial_res < res)) break;
        y = std::move(trial);
        res = trial_res;
    }
    if (residual) *residual = res;
    return y;
}

Representation embed_restricted_rep(const ExpansionSpec& spec, const Representation& xprime) {
    spec.validate();
    const auto& qp = *xprime.quiver;
    if (qp.num_vertices() != spec.vertices.size() || qp.num_edges() != spec.edges.size())
        throw Error(ErrorCode::InvalidExpansion, "representation does not live on the restricted quiver");
    for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
        if (qp.vertex_id(i) != spec.vertices[i].id)
            throw Error(ErrorCode::InvalidExpansion, "vertex '" + qp.vertex_id(i) + "' is not part of the split");
        if (xprime.dims[i] != spec.vertices[i].dim)
            throw Error(ErrorCode::InvalidExpansion, "part '" + spec.vertices[i].id + "' has dimension " +
                                                         std::to_string(xprime.dims[i]) + ", split says " +
                                                         std::to_string(spec.vertices[i].dim));
    }
    for (std::size_t i = 0; i < spec.edges.size(); ++i)
        if (qp.edge(i).id != spec.edges[i].id)
            throw Error(ErrorCode::InvalidExpansion, "edge '" + qp.edge(i).id + "' is not a retained edge");
    xprime.check();

    std::vector<int> offset(spec.vertices.size(), 0);
    std::vector<int> fill(spec.base->num_vertices(), 0);
    for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
        offset[i] = fill[spec.vertices[i].base];
        fill[spec.vertices[i].base] += spec.vertices[i].dim;
    }
    auto x = Representation::zero(spec.base, spec.base_dims());
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const auto& e = spec.edges[i];
        x[e.base].block(offset[e.head], offset[e.tail], spec.vertices[e.head].dim, spec.vertices[e.tail].dim) =
            xprime[i];
    }
    return x;
}

} // namespace qm
