#pragma once

#include "quivermorse/errors.hpp"
#include "quivermorse/fixtures.hpp"
#include "quivermorse/representation.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace qmt {

using qm::cplx;

inline qm::DimensionVector dv(std::vector<int> d) { return qm::DimensionVector(std::move(d)); }

/// Representation with 1x1 (or given) blocks set from a map; everything else zero.
inline qm::Representation rep(const qm::QuiverWithRelations& qr, const qm::DimensionVector& v,
                              const std::map<std::string, cplx>& entries) {
    auto x = qm::Representation::zero(qr.quiver, v);
    for (const auto& [edge, val] : entries) x.at(edge)(0, 0) = val;
    return x;
}

inline qm::Representation jordan_xmin() {
    return rep(qm::fixtures::jordan(), dv({1, 1}), {{"abar", std::sqrt(2.0)}});
}

inline std::optional<qm::ErrorCode> error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const qm::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline qm::Rational rat(long p, long q = 1) { return qm::Rational(p, q); }

} // namespace qmt
