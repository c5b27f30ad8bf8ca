#pragma once

#include "quivermorse/representation.hpp"

#include <map>
#include <string>

namespace qm {

/// f(x) = || mu(x) - i alpha ||^2.
double energy(const Representation& x, const CentralElement& alpha);

/// beta = mu(x) - i alpha, per vertex.
LieAlgebraElement beta_of(const Representation& x, const CentralElement& alpha);

/// Gradient of f for the metric Re <.,.>: grad f = 2i rho_x(beta).
GradedLinearMap grad_energy(const Representation& x, const CentralElement& alpha);

/// Checks on x that f strictly decreases along -grad f and increases along +grad f.
bool descent_direction_certified(const Representation& x, const CentralElement& alpha);

enum class FlowStatus { Converged, MaxSteps, Diverged, NumericalStall };
const char* to_string(FlowStatus s);

struct TrajectorySample {
    double t;
    double f;
    double grad_norm;
};

struct FlowResult {
    std::vector<TrajectorySample> trajectory;
    Representation limit;
    FlowStatus status = FlowStatus::MaxSteps;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double max_f_increase = 0.0;  // largest f(n+1) - f(n) over accepted steps
    double invariant_drift = 0.0;
    std::map<std::string, cplx> traces_start;
    std::map<std::string, cplx> traces_end;
};

/// Downward gradient flow dx/dt = -grad f with an embedded Cash-Karp pair: a step is accepted
/// when the local error estimate is small and f does not increase.
FlowResult integrate_flow(const Representation& x0, const CentralElement& alpha, const Tolerances& tol = {});

/// Traces of x_p over closed paths of length <= max_len, one representative per cyclic rotation.
std::map<std::string, cplx> closed_path_traces(const Representation& x, int max_len);
double max_trace_difference(const std::map<std::string, cplx>& a, const std::map<std::string, cplx>& b);

/// Ordered list of dimension vectors with strictly increasing slopes.
struct HNType {
    std::vector<DimensionVector> blocks;
    std::vector<Rational> slopes;

    /// The lowest-slope block; for the canonical element this is the quotient by the maximal
    /// subrepresentation avoiding the framing vertex.
    const DimensionVector& label() const { return blocks.front(); }
    bool operator==(const HNType& o) const { return blocks == o.blocks && slopes == o.slopes; }
    std::string str() const;
};

struct CriticalClassification {
    HNType hn;
    LieAlgebraElement beta;
    std::vector<double> residuals;       // || mu(x_l) - i alpha_l || per block
    std::vector<double> eigenvalues;     // cluster means of i*beta, ascending
    double off_block = 0.0;              // largest off-block entry in the beta eigenbasis
    double class_tol = 0.0;
    double cluster_margin = 0.0;         // smallest separating gap divided by class_tol
    double grad_norm = 0.0;
};

CriticalClassification classify_critical(const Representation& x, const CentralElement& alpha,
                                         const Tolerances& tol = {});

struct HessianIndex {
    int index = 0;
    int nullity = 0;
    double hess_norm = 0.0;
    double hess_tol = 0.0;
    double eigen_margin = 0.0;  // min over eigenvalues of the distance ratio to +-hess_tol
    std::vector<double> eigenvalues;
};

HessianIndex hessian_index(const Representation& x, const CentralElement& alpha, const Tolerances& tol = {});

} // namespace qm
