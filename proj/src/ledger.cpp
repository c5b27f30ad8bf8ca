#include "quivermorse/ledger.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace qm {

namespace {

std::string join(const std::vector<int>& xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

int majority(const std::vector<int>& votes, const std::string& what, const std::string& margins) {
    std::map<int, int> count;
    for (int v : votes) ++count[v];
    for (const auto& [value, n] : count)
        if (2 * n > static_cast<int>(votes.size())) return value;
    throw Error(ErrorCode::UnstableLedger,
                what + " has no majority: votes [" + join(votes) + "], margins " + margins);
}

} // namespace

ConvolutionLedger build_ledger(const AdjacentPair& pair, const RelationSet& r, int samples, std::uint64_t seed,
                               const Tolerances& tol) {
    if (samples < 1) throw Error(ErrorCode::InvalidParameter, "samples must be at least 1");
    const auto& q = *pair.quiver;
    QuiverWithRelations qr{pair.quiver, r};
    ConvolutionLedger out;
    out.v = pair.v;
    out.v_u = pair.v_u;
    out.v_ell = pair.v_ell;
    out.k = q.vertex_id(pair.k);
    out.seed = seed;
    out.samples = samples;
    out.loop_condition = relation_set_checks(q, r).loop_condition;
    out.min_hessian_margin = std::numeric_limits<double>::infinity();
    out.min_rank_margin = std::numeric_limits<double>::infinity();
    std::ostringstream margins;

    out.d = 2 * rel_dim(r, pair.ek(), pair.v_u);
    for (int i = 0; i < samples; ++i) {
        Rng rng(seed, "ledger", static_cast<std::uint64_t>(i));
        AdjacentPair p = pair;
        if (i > 0) {
            Rng upper = rng.fork(0);
            p = make_adjacent_pair(qr, pair.v, pair.v_u, pair.k,
                                   upper_critical_point(qr, pair.v, pair.v_u, upper, tol), tol);
        }
        Rng line = rng.fork(1);
        auto dx = sample_flow_line_point(p, RelationSet{}, line, tol);
        auto br = bundle_ranks(p, dx, tol);
        out.lambda_votes.push_back(br.lambda_u);
        out.nu_votes.push_back(br.nu);
        out.min_hessian_margin = std::min(out.min_hessian_margin, br.margin);

        Rng hecke = rng.fork(2);
        auto y = sample_hecke_point(p, hecke, tol);
        auto rep = hecke_tangent_report(p, r, y, tol);
        out.d_numeric.push_back(rep.d_numeric);
        out.min_rank_margin = std::min(out.min_rank_margin, rep.min_margin);
        if (out.loop_condition && rep.d_numeric != out.d) out.d_matches = false;
        margins << (i ? "; " : "") << "sample " << i << ": bundle " << br.margin << ", hecke " << rep.min_margin;
    }
    out.lambda_u = majority(out.lambda_votes, "lambda_u", margins.str());
    out.nu = majority(out.nu_votes, "nu", margins.str());
    out.euler_degree = euler_data(pair).degree;
    out.shift = out.d - out.lambda_u;
    out.grassmannian_dim = 0;
    for (std::size_t j = 0; j < q.num_vertices(); ++j)
        out.grassmannian_dim += pair.v_u[j] * (pair.v_ell[j] - pair.v_u[j]);
    return out;
}

int convolution_target_degree(const ConvolutionLedger& l, int p) { return p + l.d - l.lambda_u; }

int cup_product_target_degree(const ConvolutionLedger& l, int p, int m) { return p + m - l.lambda_u; }

CriticalFactorization critical_factorization(const CriticalClassification& cls, const CentralElement& alpha) {
    if (cls.hn.blocks.empty()) throw Error(ErrorCode::InvalidParameter, "empty classification");
    DimensionVector v = cls.hn.blocks.front();
    for (std::size_t i = 1; i < cls.hn.blocks.size(); ++i) v = v + cls.hn.blocks[i];
    CriticalFactorization out;
    for (const auto& w : cls.hn.blocks) {
        auto a = induced_central(alpha, v, w);
        if (!is_admissible(a, w))
            throw Error(ErrorCode::InadmissibleCentral, "induced element is not admissible for " + w.str());
        out.blocks.push_back({w, a});
    }
    return out;
}

} // namespace qm
