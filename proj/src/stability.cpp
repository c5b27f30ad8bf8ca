#include "quivermorse/stability.hpp"

#include "quivermorse/errors.hpp"

namespace qm {

SubrepResult max_subrep_avoiding(const Representation& x, const std::vector<bool>& avoid, const Tolerances& tol) {
    const auto& q = *x.quiver;
    if (avoid.size() != q.num_vertices())
        throw Error(ErrorCode::InvalidParameter, "avoid set must have one entry per vertex");
    const double scale = x.norm();
    SubrepResult out;
    out.bases.resize(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) {
        int n = x.dims[k];
        out.bases[k] = avoid[k] ? Mat(n, 0) : Mat(Mat::Identity(n, n));
    }
    const int max_iter = x.dims.total() + 1;
    for (int it = 0; it < max_iter; ++it) {
        ++out.iterations;
        bool changed = false;
        for (std::size_t k = 0; k < q.num_vertices(); ++k) {
            Mat& b = out.bases[k];
            if (b.cols() == 0) continue;
            // Stack (I - P_{W_h}) x_a B_k over outgoing edges; its kernel is the new W_k in B_k coordinates.
            std::vector<Mat> rows;
            Eigen::Index total = 0;
            for (std::size_t a = 0; a < q.num_edges(); ++a) {
                const auto& e = q.edge(a);
                if (e.tail != k || x.dims[e.head] == 0) continue;
                const Mat& bh = out.bases[e.head];
                Mat proj = Mat::Identity(x.dims[e.head], x.dims[e.head]) - bh * bh.adjoint();
                rows.push_back(proj * x[a] * b);
                total += rows.back().rows();
            }
            if (total == 0) continue;
            Mat stacked(total, b.cols());
            Eigen::Index r = 0;
            for (const auto& m : rows) {
                stacked.middleRows(r, m.rows()) = m;
                r += m.rows();
            }
            Mat ker = kernel_basis_scaled(stacked, scale, tol);
            if (ker.cols() < b.cols()) {
                b = b * ker;
                // re-orthonormalize against drift
                if (b.cols() > 0) {
                    Eigen::HouseholderQR<Mat> qr(b);
                    b = qr.householderQ() * Mat::Identity(b.rows(), b.cols());
                }
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::vector<int> dims(q.num_vertices());
    for (std::size_t k = 0; k < q.num_vertices(); ++k) dims[k] = static_cast<int>(out.bases[k].cols());
    out.dims = DimensionVector(dims);
    return out;
}

namespace {

std::size_t framing_of(const Representation& x) {
    auto f = x.quiver->framing();
    if (!f) throw Error(ErrorCode::InvalidFraming, "quiver has no framing vertex");
    return *f;
}

} // namespace

HNType hn_type_algebraic(const Representation& x, const CentralElement& alpha, const Tolerances& tol) {
    std::size_t inf = framing_of(x);
    std::vector<bool> avoid(x.quiver->num_vertices(), false);
    avoid[inf] = true;
    auto w = max_subrep_avoiding(x, avoid, tol);
    HNType out;
    if (w.dims.is_zero() || w.dims == x.dims) {
        out.blocks.push_back(x.dims);
        out.slopes.push_back(slope_data(alpha, x.dims).slope);
        return out;
    }
    DimensionVector quotient = x.dims - w.dims;
    out.blocks = {quotient, w.dims};
    out.slopes = {slope_data(alpha, quotient).slope, slope_data(alpha, w.dims).slope};
    return out;
}

bool is_alpha_stable(const Representation& x, const CentralElement& alpha, const Tolerances& tol) {
    std::size_t inf = framing_of(x);
    if (x.dims[inf] != 1) throw Error(ErrorCode::PreconditionFailed, "stability test needs dims[framing] = 1");
    if (!(alpha == canonical_central(*x.quiver, x.dims)))
        throw Error(ErrorCode::PreconditionFailed, "stability test needs the canonical central element");
    std::vector<bool> avoid(x.quiver->num_vertices(), false);
    avoid[inf] = true;
    return max_subrep_avoiding(x, avoid, tol).dims.is_zero();
}

bool is_framing_stable(const Representation& x, const std::vector<bool>& avoid, const Tolerances& tol) {
    return max_subrep_avoiding(x, avoid, tol).dims.is_zero();
}

} // namespace qm
