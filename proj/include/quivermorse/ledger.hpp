#pragma once

#include "quivermorse/slice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qm {

/// Integer degree record for one adjacent pair. Real degrees throughout.
struct ConvolutionLedger {
    DimensionVector v;
    DimensionVector v_u;
    DimensionVector v_ell;
    std::string k;
    int lambda_u = 0;
    int nu = 0;
    int euler_degree = 0;
    int d = 0;
    int chern_degree = 2;
    int shift = 0;  // d - lambda_u
    int grassmannian_dim = 0;

    // provenance
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<int> lambda_votes;
    std::vector<int> nu_votes;
    std::vector<int> d_numeric;
    bool d_matches = true;  // formula d equals every numerical adjoint rank
    bool loop_condition = false;
    double min_hessian_margin = 0.0;
    double min_rank_margin = 0.0;
};

/// Samples upper critical points (the pair's own x_u first), flow-line points and Hecke points
/// from the seed. Integer fields are majority votes; a vote without a strict majority throws
/// UnstableLedger with every vote and margin in the message.
ConvolutionLedger build_ledger(const AdjacentPair& pair, const RelationSet& r, int samples, std::uint64_t seed,
                               const Tolerances& tol = {});

/// Degree reached from degree p by the convolution step: p + d - lambda_u.
int convolution_target_degree(const ConvolutionLedger& l, int p);
/// Degree reached by cup product with a class of degree m followed by the lambda_u shift: p + m - lambda_u.
int cup_product_target_degree(const ConvolutionLedger& l, int p, int m);

struct FactorBlock {
    DimensionVector dims;
    CentralElement alpha;
};

struct CriticalFactorization {
    std::vector<FactorBlock> blocks;
};

/// One (block, induced central element) pair per block of the classification.
CriticalFactorization critical_factorization(const CriticalClassification& cls, const CentralElement& alpha);

} // namespace qm
