#include "quivermorse/slice.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qm {

DimensionVector AdjacentPair::ek() const { return DimensionVector::unit(*quiver, k); }

Representation AdjacentPair::upper_point() const {
    return direct_sum(x_u, Representation::zero(quiver, complement()));
}

namespace {

std::size_t framing_vertex(const Quiver& q) {
    auto f = q.framing();
    if (!f) throw Error(ErrorCode::InvalidFraming, "adjacent pairs need a framed quiver");
    return *f;
}

double min_margin(std::initializer_list<double> values) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

// Joint map W_j -> (+)_{t(a)=j} target_{h(a)} of the edges leaving vertex j.
Mat stacked_outgoing(const GradedLinearMap& dx, std::size_t j) {
    const auto& q = *dx.quiver;
    Eigen::Index rows = 0;
    for (const auto& e : q.edges())
        if (e.tail == j) rows += dx.target[e.head];
    Mat m(rows, dx.source[j]);
    Eigen::Index r = 0;
    for (std::size_t a = 0; a < q.num_edges(); ++a) {
        const auto& e = q.edge(a);
        if (e.tail != j) continue;
        m.middleRows(r, dx[a].rows()) = dx[a];
        r += dx[a].rows();
    }
    return m;
}

Mat projector(const Mat& basis, Eigen::Index n) {
    if (basis.cols() == 0) return Mat::Zero(n, n);
    return basis * basis.adjoint();
}

// Unit vector orthogonal to the trace directions of Rel(v, v): identity on every relation with t = h.
Mat trace_free_projector(const RelationSet& r, const DimensionVector& v) {
    auto layout = rel_layout(r, v, v);
    auto blocks = layout.zeros();
    bool any = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].tail != r[i].head || v[r[i].head] == 0) continue;
        blocks[i] = Mat::Identity(v[r[i].head], v[r[i].head]);
        any = true;
    }
    const auto n = static_cast<Eigen::Index>(layout.size());
    Mat p = Mat::Identity(n, n);
    if (!any) return p;
    Vec z = layout.flatten(blocks);
    z.normalize();
    return p - z * z.adjoint();
}

} // namespace

AdjacentPair make_adjacent_pair(const QuiverWithRelations& qr, const DimensionVector& v, const DimensionVector& v_u,
                                std::size_t k, const Representation& x_u, const Tolerances& tol) {
    const auto& q = *qr.quiver;
    v.check_for(q);
    v_u.check_for(q);
    std::size_t inf = framing_vertex(q);
    if (k >= q.num_vertices() || k == inf)
        throw Error(ErrorCode::PreconditionFailed, "k must be a non-framing vertex");
    if (v[inf] != 1 || v_u[inf] != 1)
        throw Error(ErrorCode::PreconditionFailed, "v and v_u must have dimension 1 at the framing vertex");
    AdjacentPair p;
    p.quiver = qr.quiver;
    p.relations = qr.relations;
    p.v = v;
    p.v_u = v_u;
    p.k = k;
    p.v_ell = v_u + DimensionVector::unit(q, k);
    if (!v_u.leq(v) || !p.v_ell.leq(v))
        throw Error(ErrorCode::PreconditionFailed, "need v_u <= v_u + e_k <= v, got v = " + v.str() +
                                                       ", v_u = " + v_u.str());
    if (x_u.dims != v_u) throw Error(ErrorCode::PreconditionFailed, "x_u must have dimension vector v_u");
    p.x_u = x_u;
    p.alpha = canonical_central(q, v);
    if (!is_alpha_stable(x_u, canonical_central(q, v_u), tol))
        throw Error(ErrorCode::PreconditionFailed, "x_u is not stable");
    return p;
}

Representation upper_critical_point(const QuiverWithRelations& qr, const DimensionVector& v,
                                    const DimensionVector& v_u, Rng& rng, const Tolerances& tol) {
    const auto& q = *qr.quiver;
    auto alpha_u = induced_central(canonical_central(q, v), v, v_u);
    auto canon_u = canonical_central(q, v_u);
    constexpr int attempts = 40;
    for (int i = 0; i < attempts; ++i) {
        Rng sub = rng.fork(static_cast<std::uint64_t>(i));
        auto x = Representation::random(qr.quiver, v_u, sub);
        double res = 0.0;
        if (!qr.relations.empty()) {
            x = project_to_relations(x, qr.relations, 60, &res);
            if (res > 1e-10 * (1.0 + x.norm() * x.norm())) continue;
        }
        if (!is_alpha_stable(x, canon_u, tol)) continue;
        auto flow = integrate_flow(x, alpha_u, tol);
        if (flow.status != FlowStatus::Converged) continue;
        if (!qr.relations.empty() && relation_map(flow.limit, qr.relations).norm() >
                                         1e-8 * (1.0 + flow.limit.norm() * flow.limit.norm()))
            continue;
        return flow.limit;
    }
    throw Error(ErrorCode::NumericalStall, "no converged stable sample on " + v_u.str() + " after " +
                                               std::to_string(attempts) + " attempts");
}

AdjacentPair sample_adjacent_pair(const QuiverWithRelations& qr, const DimensionVector& v,
                                  const DimensionVector& v_u, std::size_t k, Rng& rng, const Tolerances& tol) {
    return make_adjacent_pair(qr, v, v_u, k, upper_critical_point(qr, v, v_u, rng, tol), tol);
}

FibreReport adjacent_fibre(const AdjacentPair& pair, const Tolerances& tol) {
    const auto& q = *pair.quiver;
    auto ek = pair.ek();
    auto z = Representation::zero(pair.quiver, ek);
    FibreReport out;
    out.hom0 = static_cast<int>(hom0_layout(ek, pair.v_u).size());
    out.hom1 = hom1_dim(q, ek, pair.v_u);
    out.rank = numerical_rank(inf_action_matrix(pair.x_u, z), tol);
    out.coker_dim = out.rank.corank();
    out.description = out.coker_dim == 0
                          ? std::string("empty fibre")
                          : "C^" + std::to_string(out.coker_dim) + " minus the origin, U(1) acting with weight one";
    return out;
}

std::vector<GradedLinearMap> negative_slice_at(const Representation& x_u, const RelationSet& r,
                                               const DimensionVector& v2, const Tolerances& tol) {
    return deformation_complex(r, x_u, Representation::zero(x_u.quiver, v2), tol).slice_basis;
}

DimensionVector kernel_dims(const GradedLinearMap& dx, const Tolerances& tol) {
    const auto& q = *dx.quiver;
    std::vector<int> out(q.num_vertices(), 0);
    double scale = dx.norm();
    for (std::size_t j = 0; j < q.num_vertices(); ++j)
        out[j] = numerical_rank_scaled(stacked_outgoing(dx, j), scale, tol).nullity();
    return DimensionVector(out);
}

GradedLinearMap sample_flow_line_point(const AdjacentPair& pair, const RelationSet& r, Rng& rng,
                                       const Tolerances& tol) {
    auto ek = pair.ek();
    auto basis = negative_slice_at(pair.x_u, r, ek, tol);
    if (basis.empty()) throw Error(ErrorCode::PreconditionFailed, "the slice in Hom^1(e_k, v_u) is zero");
    auto s = GradedLinearMap::zero(pair.quiver, ek, pair.v_u);
    for (const auto& b : basis) s = s + b * rng.cnormal();
    auto w = pair.complement();
    Vec e(w[pair.k]);
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.cnormal();
    e.normalize();
    auto dx = GradedLinearMap::zero(pair.quiver, w, pair.v_u);
    const auto& q = *pair.quiver;
    for (std::size_t a = 0; a < q.num_edges(); ++a)
        if (q.edge(a).tail == pair.k) dx[a] = s[a] * e.adjoint();
    return dx;
}

BundleRanks bundle_ranks(const AdjacentPair& pair, const GradedLinearMap& dx, const Tolerances& tol) {
    const auto& q = *pair.quiver;
    const auto w = pair.complement();
    const auto wp = pair.remainder();
    const auto ek = pair.ek();
    if (dx.source != w || dx.target != pair.v_u)
        throw Error(ErrorCode::ShapeError, "dx must lie in Hom^1(v - v_u, v_u)");
    auto kd = kernel_dims(dx, tol);
    if (kd != wp)
        throw Error(ErrorCode::NotOnFlowLine, "kernel of dx has dimension vector " + kd.str() + ", expected " +
                                                  wp.str());

    // e spans the orthogonal complement of the kernel at k.
    Eigen::JacobiSVD<Mat> svd(stacked_outgoing(dx, pair.k), Eigen::ComputeFullV);
    Vec e = svd.matrixV().col(0);

    // Reduced data: s in Hom^1(e_k, v_u); the restriction of dx to the kernel is zero.
    auto s = GradedLinearMap::zero(pair.quiver, ek, pair.v_u);
    for (std::size_t a = 0; a < q.num_edges(); ++a)
        if (q.edge(a).tail == pair.k) s[a] = dx[a] * e;

    // D: Hom^0(W', v_u) (+) Hom^0(W', e_k) -> Hom^1(W', v_u), (u1, u2) -> -x_u u1_t - s u2_t.
    auto in1 = hom0_layout(wp, pair.v_u);
    auto in2 = hom0_layout(wp, ek);
    auto outl = hom1_layout(q, wp, pair.v_u);
    Mat dmat = assemble(in1.size() + in2.size(), outl.size(), [&](const Vec& v) {
        auto u1 = in1.unflatten(v.head(static_cast<Eigen::Index>(in1.size())));
        auto u2 = in2.unflatten(v.tail(static_cast<Eigen::Index>(in2.size())));
        auto out = outl.zeros();
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            const auto& edge = q.edge(a);
            out[a] = -pair.x_u[a] * u1[edge.tail];
            if (edge.tail == pair.k) out[a] -= s[a] * u2[edge.tail];
        }
        return outl.flatten(out);
    });

    // V: rho of x = [[x_u, s], [0, 0]] on v_ell against 0 on W', Hom^0(W', v_ell) -> Hom^1(W', v_ell).
    auto x_ell = block_triangular(pair.x_u, Representation::zero(pair.quiver, ek), s);
    Mat vmat = inf_action_matrix(x_ell, Representation::zero(pair.quiver, wp));

    auto rd = numerical_rank(dmat, tol);
    auto rv = numerical_rank(vmat, tol);
    BundleRanks out;
    out.rank_D = 2 * rd.corank();
    out.rank_V = 2 * rv.corank();
    out.rank_T = out.rank_V - out.rank_D;
    out.expected_T = 2 * hom1_dim(q, wp, ek);
    out.nu = out.rank_D;
    auto h = hessian_index(pair.upper_point(), pair.alpha, tol);
    out.lambda_u = h.index;
    out.margin = min_margin({rd.margin, rv.margin, h.eigen_margin});
    return out;
}

FlowLineCodim flow_line_codimension(const AdjacentPair& pair, const RelationSet& r, const GradedLinearMap& dx,
                                    const Tolerances& tol) {
    const auto& q = *pair.quiver;
    const auto w = pair.complement();
    auto kd = kernel_dims(dx, tol);
    if (kd != pair.remainder())
        throw Error(ErrorCode::NotOnFlowLine, "kernel of dx has dimension vector " + kd.str());
    auto basis = negative_slice_at(pair.x_u, r, w, tol);
    const double scale = dx.norm();

    std::vector<Mat> left(q.num_vertices()), right(q.num_vertices());
    for (std::size_t j = 0; j < q.num_vertices(); ++j) {
        Mat m = stacked_outgoing(dx, j);
        // I - P_im is the projector onto ker m^*.
        left[j] = projector(kernel_basis_scaled(m.adjoint(), scale, tol), m.rows());
        right[j] = projector(kernel_basis_scaled(m, scale, tol), m.cols());
    }
    // Columns: the constraint (I - P_im) Delta_j P_ker for each slice basis element.
    Eigen::Index rows = 0;
    for (std::size_t j = 0; j < q.num_vertices(); ++j) rows += left[j].rows() * right[j].cols();
    Mat m(rows, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Eigen::Index r0 = 0;
        for (std::size_t j = 0; j < q.num_vertices(); ++j) {
            Mat c = left[j] * stacked_outgoing(basis[i], j) * right[j];
            m.col(static_cast<Eigen::Index>(i)).segment(r0, c.size()) = Eigen::Map<const Vec>(c.data(), c.size());
            r0 += c.size();
        }
    }
    auto rr = numerical_rank(m, tol);
    FlowLineCodim out;
    out.slice_dim = static_cast<int>(basis.size());
    out.tangent_dim = out.slice_dim - rr.rank;
    out.codim_real = 2 * rr.rank;
    out.margin = rr.margin;
    return out;
}

EulerData euler_data(const AdjacentPair& pair) {
    const auto& q = *pair.quiver;
    auto wp = pair.remainder();
    EulerData out;
    out.n = hom1_dim(q, wp, pair.ek());
    out.degree = 2 * out.n;
    for (const auto& e : q.edges()) {
        if (e.head != pair.k || wp[e.tail] == 0) continue;
        out.weights.push_back({e.id, q.vertex_id(e.tail), 1, wp[e.tail], 1});
    }
    return out;
}

GradedLinearMap sample_hecke_point(const AdjacentPair& pair, Rng& rng, const Tolerances& tol) {
    auto ek = pair.ek();
    auto basis = negative_slice_at(pair.x_u, pair.relations, ek, tol);
    if (basis.empty()) throw Error(ErrorCode::PreconditionFailed, "the slice in Hom^1(e_k, v_u) is zero");
    auto y = GradedLinearMap::zero(pair.quiver, ek, pair.v_u);
    for (const auto& b : basis) y = y + b * rng.cnormal();
    return y * cplx(1.0 / y.norm(), 0.0);
}

HeckeReport hecke_tangent_report(const AdjacentPair& pair, const RelationSet& r, const GradedLinearMap& y,
                                 const Tolerances& tol) {
    const auto& q = *pair.quiver;
    const auto ek = pair.ek();
    const auto& vu = pair.v_u;
    const auto& xu = pair.x_u;
    if (y.source != ek || y.target != vu) throw Error(ErrorCode::ShapeError, "y must lie in Hom^1(e_k, v_u)");
    const double ynorm = y.norm();
    if (ynorm == 0.0) throw Error(ErrorCode::PreconditionFailed, "y must be nonzero");
    auto checks = relation_set_checks(q, r);
    if (!checks.quadratic)
        throw Error(ErrorCode::UnsupportedRelationDegree, "tangent report needs a quadratic relation set");

    HeckeReport out;
    out.loop_condition = checks.loop_condition;
    out.injectivity_checked = checks.loop_condition;
    const auto z = Representation::zero(pair.quiver, ek);
    const double xscale = 1.0 + xu.norm();

    // Membership.
    Mat rho = inf_action_matrix(xu, z);
    auto h1e = hom1_layout(q, ek, vu);
    Vec yv = h1e.flatten(y.blocks);
    double rho_adj = (rho.adjoint() * yv).norm();
    out.in_F = rho_adj <= 1e-9 * xscale * ynorm;
    out.dnu_y_norm = d_nu(xu, z, r, y).norm();
    out.nu_xu_norm = relation_map(xu, r).norm();
    out.in_N = out.in_F && out.dnu_y_norm <= 1e-9 * xscale * ynorm;
    out.in_T = out.in_F && out.nu_xu_norm <= 1e-9 * xscale * xscale;
    auto x_full = block_triangular(xu, z, y);
    out.in_B = out.in_F && relation_map(x_full, r).norm() <= 1e-9 * (1.0 + x_full.norm()) * (1.0 + x_full.norm());

    // Sum map (dx, dy) -> d nu_{x_u}(dy) + d nu_y(dx) into Rel(e_k, v_u).
    auto h1u = hom1_layout(q, vu, vu);
    auto relk = rel_layout(r, ek, vu);
    const auto nu_ = static_cast<Eigen::Index>(h1u.size());
    const auto ne = static_cast<Eigen::Index>(h1e.size());
    Mat a_y = d_nu_matrix(xu, z, r);
    Mat a_x = assemble(h1u.size(), relk.size(), [&](const Vec& v) {
        Representation dx{pair.quiver, vu, h1u.unflatten(v)};
        return relk.flatten(d_nu(dx, z, r, y).blocks);
    });
    Mat sum(relk.size(), nu_ + ne);
    sum << a_x, a_y;
    auto r_sum = numerical_rank(sum, tol);
    out.rank_N_in_F = 2 * r_sum.rank;
    out.d = 2 * rel_dim(r, ek, vu);

    // Adjoint route: d nu^*_{x_u + y} on the (v_u, e_k) relation block, projected to Hom^1(v_u, v_u) (+) Hom^1(e_k, v_u).
    const auto vl = pair.v_ell;
    auto rel_full = rel_layout(r, vl, vl);
    Mat adj(nu_ + ne, relk.size());
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(relk.size()); ++j) {
        Vec unit = Vec::Zero(static_cast<Eigen::Index>(relk.size()));
        unit[j] = 1.0;
        auto small = relk.unflatten(unit);
        RelationValue u{rel_full.zeros()};
        for (std::size_t i = 0; i < r.size(); ++i)
            u.blocks[i].block(0, vu[r[i].tail], vu[r[i].head], ek[r[i].tail]) = small[i];
        auto g = d_nu_adjoint(x_full, x_full, r, u);
        std::vector<Mat> bx(q.num_edges()), by(q.num_edges());
        for (std::size_t a = 0; a < q.num_edges(); ++a) {
            const auto& e = q.edge(a);
            bx[a] = g[a].block(0, 0, vu[e.head], vu[e.tail]);
            by[a] = g[a].block(0, vu[e.tail], vu[e.head], ek[e.tail]);
        }
        adj.col(j) << h1u.flatten(bx), h1e.flatten(by);
    }
    RankResult r_adj;
    Mat normal_adj = range_basis(adj, tol, &r_adj);
    out.d_numeric = 2 * r_adj.rank;
    RankResult r_sumh;
    Mat normal_sum = range_basis(sum.adjoint(), tol, &r_sumh);
    if (normal_adj.cols() != normal_sum.cols()) {
        out.normal_angle = std::acos(0.0);  // ranks disagree
    } else if (normal_adj.cols() > 0) {
        auto angles = principal_angles(normal_adj, normal_sum);
        out.normal_angle = angles.empty() ? 0.0 : angles.back();
    }

    // B in F: add the trace-free part of d nu_{x_u}(dx) in Rel(v_u, v_u).
    Mat p0 = trace_free_projector(r, vu);
    Mat dnu_uu = p0 * d_nu_matrix(xu, xu, r);
    Mat bf(dnu_uu.rows() + sum.rows(), nu_ + ne);
    bf << dnu_uu, Mat::Zero(dnu_uu.rows(), ne), sum;
    auto r_bf = numerical_rank(bf, tol);
    out.rank_B_in_F = 2 * r_bf.rank;

    // B in T: the sum map on ker(P0 d nu_{x_u}) (+) Hom^1(e_k, v_u).
    RankResult r_kt;
    Mat kt = kernel_basis(dnu_uu, tol, &r_kt);
    Mat restricted(sum.rows(), kt.cols() + ne);
    restricted << a_x * kt, a_y;
    auto r_bt = numerical_rank(restricted, tol);
    out.rank_B_in_T = 2 * r_bt.rank;

    // Ntilde: real Jacobian of x -> d nu_{x_u(x)}(y_h(x)) at x = x_u + y in Rep(v_ell).
    auto layout_full = hom1_layout(q, vl, vl);
    Vec x0 = layout_full.flatten(x_full.blocks);
    auto cond = [&](const Vec& xv) {
        Representation x{pair.quiver, vl, layout_full.unflatten(xv)};
        auto [x11, x22] = split_diagonal(x, vu);
        (void)x22;
        auto yy = upper_block(x, vu);
        Mat rh = inf_action_matrix(x11, z);
        Mat kb = kernel_basis(rh.adjoint(), tol);
        Vec yh = kb * (kb.adjoint() * h1e.flatten(yy.blocks));
        GradedLinearMap yhm{pair.quiver, ek, vu, h1e.unflatten(yh)};
        return relk.flatten(d_nu(x11, z, r, yhm).blocks);
    };
    const double fd = 1e-6;
    const auto n = static_cast<Eigen::Index>(layout_full.size());
    const auto m = static_cast<Eigen::Index>(relk.size());
    Eigen::MatrixXd jac(2 * m, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (int part = 0; part < 2; ++part) {
            Vec d = Vec::Zero(n);
            d[j] = part == 0 ? cplx(fd, 0.0) : cplx(0.0, fd);
            Vec diff = (cond(x0 + d) - cond(x0 - d)) / (2.0 * fd);
            jac.col(j + part * n) << diff.real(), diff.imag();
        }
    }
    Tolerances fd_tol = tol;
    fd_tol.rank_rel = std::max(tol.rank_rel, 1e-6);  // finite differences carry ~fd^2 relative error
    auto r_nt = numerical_rank(jac.cast<cplx>(), fd_tol);
    out.rank_Ntilde = r_nt.rank;

    out.min_margin = min_margin({r_sum.margin, r_adj.margin, r_bf.margin, r_bt.margin, r_nt.margin});
    return out;
}

} // namespace qm
