#include "quivermorse/io.hpp"

#include "quivermorse/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qm::io {

namespace {

template <class F>
auto parse_guard(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
}

cplx parse_coeff(const json& c) {
    if (c.is_number()) return {c.get<double>(), 0.0};
    if (c.is_array() && c.size() == 2) return {c[0].get<double>(), c[1].get<double>()};
    throw Error(ErrorCode::ParseError, "coefficient must be a number or [re, im]");
}

// Non-finite doubles have no JSON encoding; they are written as strings.
json num(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? json("nan") : json(x > 0 ? "inf" : "-inf");
}

} // namespace

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return parse_guard("'" + path + "'", [&] { return json::parse(in); });
}

QuiverWithRelations quiver_from_json(const json& j) {
    return parse_guard("quiver", [&] {
        auto vertices = j.at("vertices").get<std::vector<std::string>>();
        std::vector<EdgeSpec> edges;
        for (const auto& e : j.value("edges", json::array()))
            edges.push_back({e.at("id").get<std::string>(), e.at("tail").get<std::string>(),
                             e.at("head").get<std::string>()});
        std::optional<std::string> framing;
        if (j.contains("framing") && !j["framing"].is_null()) framing = j["framing"].get<std::string>();
        auto q = std::make_shared<const Quiver>(vertices, edges, framing);
        std::vector<Relation> rels;
        for (const auto& r : j.value("relations", json::array())) {
            std::vector<std::pair<cplx, std::vector<std::string>>> terms;
            for (const auto& t : r.at("terms"))
                terms.emplace_back(parse_coeff(t.at("coeff")), t.at("path").get<std::vector<std::string>>());
            rels.push_back(make_relation(*q, r.at("id").get<std::string>(), r.at("tail").get<std::string>(),
                                         r.at("head").get<std::string>(), terms));
        }
        return QuiverWithRelations{q, RelationSet(*q, std::move(rels))};
    });
}

json quiver_to_json(const QuiverWithRelations& qr) {
    const auto& q = *qr.quiver;
    json j;
    j["vertices"] = q.vertices();
    if (q.framing()) j["framing"] = q.vertex_id(*q.framing());
    j["edges"] = json::array();
    for (const auto& e : q.edges())
        j["edges"].push_back({{"id", e.id}, {"tail", q.vertex_id(e.tail)}, {"head", q.vertex_id(e.head)}});
    j["relations"] = json::array();
    for (const auto& r : qr.relations) {
        json terms = json::array();
        for (const auto& t : r.terms) {
            std::vector<std::string> path;
            for (auto a : t.path.edges) path.push_back(q.edge(a).id);
            terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"path", path}});
        }
        j["relations"].push_back(
            {{"id", r.id}, {"tail", q.vertex_id(r.tail)}, {"head", q.vertex_id(r.head)}, {"terms", terms}});
    }
    return j;
}

DimensionVector dims_from_json(const Quiver& q, const json& j) {
    return parse_guard("dimension vector", [&] {
        std::map<std::string, int> m = j.get<std::map<std::string, int>>();
        return DimensionVector::from_map(q, m);
    });
}

DimensionVector parse_dims(const Quiver& q, const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int d = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            dims.push_back(d);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad dimension entry '" + item + "'");
        }
    }
    DimensionVector v(dims);
    v.check_for(q);
    return v;
}

json dims_to_json(const Quiver& q, const DimensionVector& v) {
    json j = json::object();
    for (std::size_t k = 0; k < q.num_vertices(); ++k) j[q.vertex_id(k)] = v[k];
    return j;
}

Representation rep_from_json(QuiverPtr q, const json& j) {
    return parse_guard("representation", [&] {
        auto v = dims_from_json(*q, j.at("dims"));
        auto x = Representation::zero(q, v);
        const json blocks = j.value("blocks", json::object());
        for (const auto& [edge, rows] : blocks.items()) {
            auto a = q->edge_index(edge);
            Mat& m = x[a];
            if (static_cast<Eigen::Index>(rows.size()) != m.rows())
                throw Error(ErrorCode::ShapeError, "block '" + edge + "' has " + std::to_string(rows.size()) +
                                                       " rows, expected " + std::to_string(m.rows()));
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                const auto& row = rows[static_cast<std::size_t>(r)];
                if (static_cast<Eigen::Index>(row.size()) != m.cols())
                    throw Error(ErrorCode::ShapeError, "block '" + edge + "' row has the wrong length");
                for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = parse_coeff(row[static_cast<std::size_t>(c)]);
            }
        }
        return x;
    });
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

json rep_to_json(const Representation& x) {
    const auto& q = *x.quiver;
    json blocks = json::object();
    for (std::size_t a = 0; a < q.num_edges(); ++a) blocks[q.edge(a).id] = matrix_to_json(x[a]);
    return {{"dims", dims_to_json(q, x.dims)}, {"blocks", blocks}};
}

CentralElement central_from_json(const Quiver& q, const json& j) {
    return parse_guard("central element", [&] {
        CentralElement a;
        a.scalars.assign(q.num_vertices(), Rational(0));
        std::vector<bool> seen(q.num_vertices(), false);
        for (const auto& [id, val] : j.items()) {
            auto k = q.vertex_index(id);
            a.scalars[k] = val.is_string() ? parse_rational(val.get<std::string>())
                                           : parse_rational(val.dump());
            seen[k] = true;
        }
        for (std::size_t k = 0; k < seen.size(); ++k)
            if (!seen[k]) throw Error(ErrorCode::ParseError, "central element misses vertex '" + q.vertex_id(k) + "'");
        return a;
    });
}

json central_to_json(const Quiver& q, const CentralElement& alpha) {
    json j = json::object();
    for (std::size_t k = 0; k < q.num_vertices(); ++k) j[q.vertex_id(k)] = to_string(alpha[k]);
    return j;
}

json to_json(const Quiver&, const RelationChecks& c) {
    json w = json::array();
    for (const auto& v : c.witnesses)
        w.push_back({{"check", v.check}, {"clause", v.clause}, {"edge", v.edge}, {"relation", v.relation},
                     {"path", v.path}, {"message", v.message}});
    return {{"quadratic", c.quadratic}, {"complete", c.complete}, {"homogeneous", c.homogeneous},
            {"loop_condition", c.loop_condition}, {"witnesses", w}};
}

json to_json(const FormDims& f) {
    return {{"hom0", f.hom0}, {"hom1", f.hom1}, {"rel", f.rel}, {"ringel", f.ringel}, {"ringel_R", f.ringel_R}};
}

json to_json(const RankResult& r) {
    return {{"rank", r.rank}, {"rows", r.rows}, {"cols", r.cols}, {"margin", num(r.margin)}};
}

json to_json(const Quiver& q, const HNType& h) {
    json blocks = json::array();
    for (std::size_t i = 0; i < h.blocks.size(); ++i)
        blocks.push_back({{"dims", dims_to_json(q, h.blocks[i])}, {"slope", to_string(h.slopes[i])}});
    return {{"blocks", blocks}, {"label", dims_to_json(q, h.label())}};
}

json to_json(const Quiver& q, const CriticalClassification& c) {
    json res = json::array();
    for (double r : c.residuals) res.push_back(num(r));
    json eig = json::array();
    for (double e : c.eigenvalues) eig.push_back(num(e));
    return {{"hn", to_json(q, c.hn)},         {"residuals", res},
            {"eigenvalues", eig},             {"off_block", num(c.off_block)},
            {"class_tol", num(c.class_tol)},  {"cluster_margin", num(c.cluster_margin)},
            {"grad_norm", num(c.grad_norm)}};
}

json to_json(const FlowResult& f) {
    return {{"status", to_string(f.status)},
            {"accepted_steps", f.accepted_steps},
            {"rejected_steps", f.rejected_steps},
            {"f_start", num(f.trajectory.front().f)},
            {"f_limit", num(f.trajectory.back().f)},
            {"grad_norm", num(f.trajectory.back().grad_norm)},
            {"t_end", num(f.trajectory.back().t)},
            {"max_f_increase", num(f.max_f_increase)},
            {"invariant_drift", num(f.invariant_drift)},
            {"limit", rep_to_json(f.limit)}};
}

json to_json(const DeformationReport& d) {
    json margins = json::array();
    for (double m : d.singular_value_margins) margins.push_back(num(m));
    json basis = json::array();
    for (const auto& b : d.slice_basis) {
        json blocks = json::object();
        for (std::size_t a = 0; a < b.blocks.size(); ++a) blocks[b.quiver->edge(a).id] = matrix_to_json(b[a]);
        basis.push_back(blocks);
    }
    return {{"h0", d.h0}, {"h1", d.h1}, {"h2", d.h2}, {"margins", margins}, {"slice_basis", basis}};
}

json to_json(const HeckeReport& h) {
    return {{"membership", {{"F", h.in_F}, {"N", h.in_N}, {"T", h.in_T}, {"B", h.in_B}}},
            {"ranks",
             {{"N_in_F", h.rank_N_in_F},
              {"B_in_F", h.rank_B_in_F},
              {"B_in_T", h.rank_B_in_T},
              {"Ntilde", h.rank_Ntilde},
              {"adjoint", h.d_numeric}}},
            {"d", h.d},
            {"loop_condition", h.loop_condition},
            {"injectivity_checked", h.injectivity_checked},
            {"margins",
             {{"min_rank_margin", num(h.min_margin)},
              {"normal_angle", num(h.normal_angle)},
              {"dnu_y_norm", num(h.dnu_y_norm)},
              {"nu_xu_norm", num(h.nu_xu_norm)}}}};
}

json to_json(const BundleRanks& b) {
    return {{"rank_D", b.rank_D},       {"rank_V", b.rank_V}, {"rank_T", b.rank_T},
            {"expected_T", b.expected_T}, {"nu", b.nu},       {"lambda_u", b.lambda_u},
            {"margin", num(b.margin)}};
}

json to_json(const Quiver& q, const ConvolutionLedger& l) {
    return {{"v", dims_to_json(q, l.v)},
            {"v_u", dims_to_json(q, l.v_u)},
            {"v_ell", dims_to_json(q, l.v_ell)},
            {"k", l.k},
            {"lambda_u", l.lambda_u},
            {"nu", l.nu},
            {"euler_degree", l.euler_degree},
            {"d", l.d},
            {"chern_degree", l.chern_degree},
            {"shift", l.shift},
            {"grassmannian_dim", l.grassmannian_dim},
            {"provenance",
             {{"seed", l.seed},
              {"samples", l.samples},
              {"lambda_votes", l.lambda_votes},
              {"nu_votes", l.nu_votes},
              {"d_numeric", l.d_numeric},
              {"d_matches", l.d_matches},
              {"loop_condition", l.loop_condition},
              {"min_hessian_margin", num(l.min_hessian_margin)},
              {"min_rank_margin", num(l.min_rank_margin)}}}};
}

std::string trajectory_csv(const FlowResult& f) {
    std::ostringstream os;
    os.precision(17);
    os << "t,f,grad_norm\n";
    for (const auto& s : f.trajectory) os << s.t << ',' << s.f << ',' << s.grad_norm << '\n';
    return os.str();
}

} // namespace qm::io
