#include "quivermorse/linalg.hpp"

#include "quivermorse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RankResult rank_from_singular_values(const Eigen::VectorXd& s, int rows, int cols, const Tolerances& tol) {
    RankResult r;
    r.rows = rows;
    r.cols = cols;
    r.sigma_max = s.size() ? s.maxCoeff() : 0.0;
    r.threshold = tol.rank_rel * std::max(r.sigma_max, tol.rank_floor);
    r.kept_min = kInf;
    r.dropped_max = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > r.threshold) {
            ++r.rank;
            r.kept_min = std::min(r.kept_min, s[i]);
        } else {
            r.dropped_max = std::max(r.dropped_max, s[i]);
        }
    }
    double upper = r.rank ? r.kept_min / r.threshold : kInf;
    double lower = r.dropped_max > 0.0 ? r.threshold / r.dropped_max : kInf;
    r.margin = std::min(upper, lower);
    return r;
}

} // namespace

RankResult numerical_rank(const Mat& m, const Tolerances& tol) {
    if (m.rows() == 0 || m.cols() == 0) {
        RankResult r;
        r.rows = static_cast<int>(m.rows());
        r.cols = static_cast<int>(m.cols());
        r.margin = kInf;
        r.kept_min = kInf;
        return r;
    }
    Eigen::BDCSVD<Mat> svd(m);
    return rank_from_singular_values(svd.singularValues(), static_cast<int>(m.rows()), static_cast<int>(m.cols()), tol);
}

Mat kernel_basis(const Mat& m, const Tolerances& tol, RankResult* rank) {
    const auto n = m.cols();
    if (m.rows() == 0 || n == 0) {
        if (rank) *rank = numerical_rank(m, tol);
        return Mat::Identity(n, n);
    }
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
    auto r = rank_from_singular_values(svd.singularValues(), static_cast<int>(m.rows()), static_cast<int>(n), tol);
    if (rank) *rank = r;
    return svd.matrixV().rightCols(n - r.rank);
}

Mat range_basis(const Mat& m, const Tolerances& tol, RankResult* rank) {
    if (m.rows() == 0 || m.cols() == 0) {
        if (rank) *rank = numerical_rank(m, tol);
        return Mat(m.rows(), 0);
    }
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullU);
    auto r = rank_from_singular_values(svd.singularValues(), static_cast<int>(m.rows()), static_cast<int>(m.cols()), tol);
    if (rank) *rank = r;
    return svd.matrixU().leftCols(r.rank);
}

std::vector<double> principal_angles(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeError, "principal angles of different ambient spaces");
    std::vector<double> out;
    if (a.cols() == 0 || b.cols() == 0) return out;
    if (a.cols() < b.cols()) return principal_angles(b, a);
    // acos loses half the digits near 0, so small angles come from the sines of the residual (I - A A^*) B.
    Eigen::BDCSVD<Mat> cs(a.adjoint() * b);
    Eigen::BDCSVD<Mat> ss(b - a * (a.adjoint() * b));
    const auto& c = cs.singularValues();  // descending
    const auto& sn = ss.singularValues();
    const Eigen::Index q = b.cols();
    for (Eigen::Index i = 0; i < q; ++i) {
        double ci = i < c.size() ? std::clamp(c[i], 0.0, 1.0) : 0.0;
        double si = std::clamp(sn[q - 1 - i], 0.0, 1.0);  // ascending
        out.push_back(ci * ci >= 0.5 ? std::asin(si) : std::acos(ci));
    }
    std::sort(out.begin(), out.end());
    return out;
}

BlockLayout::BlockLayout(std::vector<std::pair<int, int>> shapes) : shapes_(std::move(shapes)) {
    for (const auto& [r, c] : shapes_) {
        offsets_.push_back(size_);
        size_ += static_cast<std::size_t>(r) * static_cast<std::size_t>(c);
    }
}

Vec BlockLayout::flatten(const std::vector<Mat>& blocks) const {
    if (blocks.size() != shapes_.size()) throw Error(ErrorCode::ShapeError, "wrong number of blocks");
    Vec out(size_);
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
        const auto& [r, c] = shapes_[i];
        if (blocks[i].rows() != r || blocks[i].cols() != c)
            throw Error(ErrorCode::ShapeError, "block " + std::to_string(i) + " has shape " +
                                                   std::to_string(blocks[i].rows()) + "x" +
                                                   std::to_string(blocks[i].cols()) + ", expected " +
                                                   std::to_string(r) + "x" + std::to_string(c));
        out.segment(offsets_[i], r * c) = Eigen::Map<const Vec>(blocks[i].data(), r * c);
    }
    return out;
}

std::vector<Mat> BlockLayout::unflatten(const Vec& v) const {
    if (static_cast<std::size_t>(v.size()) != size_) throw Error(ErrorCode::ShapeError, "vector has the wrong length");
    std::vector<Mat> out;
    out.reserve(shapes_.size());
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
        const auto& [r, c] = shapes_[i];
        out.emplace_back(Eigen::Map<const Mat>(v.data() + offsets_[i], r, c));
    }
    return out;
}

std::vector<Mat> BlockLayout::zeros() const {
    std::vector<Mat> out;
    for (const auto& [r, c] : shapes_) out.push_back(Mat::Zero(r, c));
    return out;
}

Mat assemble(std::size_t n, std::size_t m, const std::function<Vec(const Vec&)>& apply) {
    Mat out(m, n);
    Vec e = Vec::Zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        out.col(j) = apply(e);
        e[j] = 0.0;
    }
    return out;
}

Eigen::MatrixXd assemble_real(std::size_t n, std::size_t m, const std::function<Vec(const Vec&)>& apply) {
    Eigen::MatrixXd out(2 * m, 2 * n);
    Vec e = Vec::Zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int part = 0; part < 2; ++part) {
            e[j] = part == 0 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
            Vec y = apply(e);
            out.col(j + part * n) << y.real(), y.imag();
        }
        e[j] = 0.0;
    }
    return out;
}

Eigen::MatrixXd realify(const Mat& m) {
    Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
    out << m.real(), -m.imag(), m.imag(), m.real();
    return out;
}

RankResult numerical_rank_scaled(const Mat& m, double scale, const Tolerances& tol) {
    Tolerances t = tol;
    t.rank_floor = std::max(tol.rank_floor, scale);
    return numerical_rank(m, t);
}

Mat kernel_basis_scaled(const Mat& m, double scale, const Tolerances& tol, RankResult* rank) {
    Tolerances t = tol;
    t.rank_floor = std::max(tol.rank_floor, scale);
    return kernel_basis(m, t, rank);
}

double frob(const std::vector<Mat>& blocks) {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

} // namespace qm
