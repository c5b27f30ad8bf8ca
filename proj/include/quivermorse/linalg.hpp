#pragma once

#include "quivermorse/tolerances.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace qm {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Numerical rank with the separation between kept and dropped singular values.
/// margin is min(kept_min / threshold, threshold / dropped_max); infinite if a side is empty.
struct RankResult {
    int rank = 0;
    int rows = 0;
    int cols = 0;
    double sigma_max = 0.0;
    double threshold = 0.0;
    double kept_min = 0.0;
    double dropped_max = 0.0;
    double margin = 0.0;

    int nullity() const { return cols - rank; }
    int corank() const { return rows - rank; }
};

RankResult numerical_rank(const Mat& m, const Tolerances& tol);

/// Orthonormal basis (columns) of the numerical kernel.
Mat kernel_basis(const Mat& m, const Tolerances& tol, RankResult* rank = nullptr);
/// Orthonormal basis (columns) of the numerical column space.
Mat range_basis(const Mat& m, const Tolerances& tol, RankResult* rank = nullptr);

/// Principal angles (radians, ascending) between the column spans of two orthonormal bases.
std::vector<double> principal_angles(const Mat& a, const Mat& b);

/// Block shapes of a direct sum of matrix spaces, flattened column-major block by block.
class BlockLayout {
public:
    BlockLayout() = default;
    explicit BlockLayout(std::vector<std::pair<int, int>> shapes);

    std::size_t size() const { return size_; }
    std::size_t blocks() const { return shapes_.size(); }
    const std::pair<int, int>& shape(std::size_t i) const { return shapes_.at(i); }

    Vec flatten(const std::vector<Mat>& blocks) const;
    std::vector<Mat> unflatten(const Vec& v) const;
    std::vector<Mat> zeros() const;

private:
    std::vector<std::pair<int, int>> shapes_;
    std::vector<std::size_t> offsets_;
    std::size_t size_ = 0;
};

/// Matrix of a linear map C^n -> C^m obtained by applying it to the standard basis.
Mat assemble(std::size_t n, std::size_t m, const std::function<Vec(const Vec&)>& apply);

/// Real-linear version: the map is sampled on e_j and i*e_j, the result acts on (Re, Im) pairs.
Eigen::MatrixXd assemble_real(std::size_t n, std::size_t m, const std::function<Vec(const Vec&)>& apply);

/// Realification of a complex matrix acting on (Re, Im) stacked vectors.
Eigen::MatrixXd realify(const Mat& m);

double frob(const std::vector<Mat>& blocks);

} // namespace qm

namespace qm {

/// Kernel with threshold rank_rel * max(scale, sigma_max): use when exact zeros of m are
/// expected to appear as round-off relative to an external scale (e.g. the norm of x).
Mat kernel_basis_scaled(const Mat& m, double scale, const Tolerances& tol, RankResult* rank = nullptr);
RankResult numerical_rank_scaled(const Mat& m, double scale, const Tolerances& tol);

} // namespace qm
