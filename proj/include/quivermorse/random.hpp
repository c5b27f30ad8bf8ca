#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace qm {

/// Counter-based generator: output i is a SplitMix64 finalizer applied to key + i, where the key
/// is derived from (seed, stream name, trial index). Streams never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::string_view stream = {}, std::uint64_t trial = 0);

    std::uint64_t next();
    double uniform();                 // [0, 1)
    int uniform_int(int lo, int hi);  // inclusive
    double normal();
    std::complex<double> cnormal();   // E|z|^2 = 1
    bool bernoulli(double p) { return uniform() < p; }

    Eigen::MatrixXcd matrix(int rows, int cols);
    Eigen::MatrixXcd unitary(int n);

    /// Independent child stream, e.g. one per sample within a trial.
    Rng fork(std::uint64_t index) const;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace qm
