#ifndef LIESIG_SERIALIZATION_HPP
#define LIESIG_SERIALIZATION_HPP

// JSON and CSV encodings.
//
//   tensor     {"n": int, "N": int, "levels": [[...], ...]}   levels ascending,
//              coefficients in row-major multi-index order
//   average    tensor fields + {"method", "group", "samples", "seed", "stderr"}
//   model      {"kind": selection string, "dim": n}
//   path       {"group": model, "times": [...], "points": [[coords], ...]}
//   spectrum   {"group", "method", "samples", "seed", "rtr": [r0, r2, ...], "stderr": [...]}
//   recovery   {"diameter", "dimension": {"raw", "rounded"}, "volume",
//               "scalar_curvature", "F_table": [[R, F], ...], "diagnostics": {...}}
//
// Doubles are written with round-trip precision in both formats.

#include <string>

#include "json.hpp"
#include "liesig/average_signature.hpp"
#include "liesig/geometry_recovery.hpp"
#include "liesig/path_signature.hpp"
#include "liesig/recovery_pipeline.hpp"
#include "liesig/tensor_series.hpp"

namespace liesig {

using Json = nlohmann::ordered_json;

Json tensor_to_json(const TensorSeriesd& x);
/// Throws ShapeError on malformed input (level count or lengths inconsistent with n, N).
TensorSeriesd tensor_from_json(const Json& j);

Json model_descriptor(const LieGroupModel& model);
Json average_to_json(const AverageSignatureResult& r);
Json spectrum_to_json(const TraceSpectrum& s);
Json recovery_to_json(const RecoveryReport& r);

Json path_to_json(const SampledPath& p);
SampledPath path_from_json(const Json& j);

/// "%.17g"
std::string format_double(double v);

/// Columns: level,index,coefficient,stderr_level
std::string average_to_csv(const AverageSignatureResult& r);
/// Columns: k,degree,rtr,stderr
std::string spectrum_to_csv(const TraceSpectrum& s);
/// Columns: section,key,value with sections "summary" (key = quantity name),
/// "F_table" (key = R, value = F(R)) and "diameter_raw" (key = k, value =
/// r_{2k}^{1/2k}).
std::string recovery_to_csv(const RecoveryReport& r);

}  // namespace liesig

#endif
