#include "quivermorse/random.hpp"

#include <cmath>
#include <numbers>

namespace qm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

Rng::Rng(std::uint64_t seed, std::string_view stream, std::uint64_t trial)
    : key_(splitmix64(splitmix64(seed) ^ hash_name(stream)) ^ splitmix64(trial + 0x632be59bd9b4e019ULL)) {}

std::uint64_t Rng::next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

double Rng::normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::cnormal() { return {normal() * std::numbers::sqrt2 / 2, normal() * std::numbers::sqrt2 / 2}; }

Eigen::MatrixXcd Rng::matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
}

Eigen::MatrixXcd Rng::unitary(int n) {
    if (n == 0) return Eigen::MatrixXcd(0, 0);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(matrix(n, n));
    Eigen::MatrixXcd q = qr.householderQ();
    return q;
}

Rng Rng::fork(std::uint64_t index) const {
    Rng child(*this);
    child.key_ = splitmix64(key_ ^ splitmix64(index + 0x2545f4914f6cdd1dULL));
    child.counter_ = 0;
    return child;
}

} // namespace qm
