#pragma once

#include "quivermorse/flow.hpp"

namespace qm {

struct SubrepResult {
    std::vector<Mat> bases;  // orthonormal columns per vertex
    DimensionVector dims;
    int iterations = 0;
};

/// Largest subrepresentation W with W_k = 0 at every avoided vertex, by the decreasing iteration
/// W_k <- W_k ∩ (∩_{t(a)=k} x_a^{-1}(W_{h(a)})).
SubrepResult max_subrep_avoiding(const Representation& x, const std::vector<bool>& avoid, const Tolerances& tol = {});

/// Two-step type for the canonical element: [v - w, w] with w the maximal subrepresentation
/// avoiding the framing vertex, or [v] when w = 0.
HNType hn_type_algebraic(const Representation& x, const CentralElement& alpha, const Tolerances& tol = {});

bool is_alpha_stable(const Representation& x, const CentralElement& alpha, const Tolerances& tol = {});

/// No nonzero subrepresentation vanishing on the given vertex set.
bool is_framing_stable(const Representation& x, const std::vector<bool>& avoid, const Tolerances& tol = {});

} // namespace qm
