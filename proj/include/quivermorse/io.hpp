#pragma once

#include "quivermorse/ledger.hpp"

#include <json.hpp>

#include <string>

namespace qm::io {

using nlohmann::json;

json load_file(const std::string& path);

QuiverWithRelations quiver_from_json(const json& j);
json quiver_to_json(const QuiverWithRelations& qr);

/// {"vertex": int, ...}; every vertex must appear.
DimensionVector dims_from_json(const Quiver& q, const json& j);
/// Comma list in vertex order, e.g. "1,1".
DimensionVector parse_dims(const Quiver& q, const std::string& text);
json dims_to_json(const Quiver& q, const DimensionVector& v);

/// {"dims": {...}, "blocks": {"edge": [[[re, im], ...], ...]}}; row-major, missing edges are zero.
Representation rep_from_json(QuiverPtr q, const json& j);
json rep_to_json(const Representation& x);
json matrix_to_json(const Mat& m);

/// {"vertex": "p/q" | number, ...}
CentralElement central_from_json(const Quiver& q, const json& j);
json central_to_json(const Quiver& q, const CentralElement& alpha);

json to_json(const Quiver& q, const RelationChecks& c);
json to_json(const FormDims& f);
json to_json(const RankResult& r);
json to_json(const Quiver& q, const HNType& h);
json to_json(const Quiver& q, const CriticalClassification& c);
json to_json(const FlowResult& f);
json to_json(const DeformationReport& d);
json to_json(const HeckeReport& h);
json to_json(const BundleRanks& b);
json to_json(const Quiver& q, const ConvolutionLedger& l);

/// Trajectory as "t,f,grad_norm" lines with a header.
std::string trajectory_csv(const FlowResult& f);

} // namespace qm::io
