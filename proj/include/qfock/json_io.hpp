#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "qfock/grid.hpp"
#include "qfock/operators.hpp"
#include "qfock/projection_cert.hpp"
#include "qfock/sampling.hpp"

namespace qfock {

using Json = nlohmann::ordered_json;

/// Accessor that reports the missing/ill-typed field by name, so CLI
/// diagnostics can point at the job file.
const Json& require_field(const Json& j, const char* name, const char* ctx);

GridPtr grid_from_json(const Json& j, const char* ctx);
StepFunction function_from_json(const GridPtr& grid, const Json& j,
                                const char* ctx);
Operator operator_from_json(const GridPtr& grid, const Json& j,
                            const char* ctx);
ModelParams params_from_json(const Json& j);  // {"c": ...}, default c = 1
SampleConfig sample_from_json(const Json& j, const ModelParams& params);

Json grid_to_json(const Grid& grid);
Json function_to_json(const StepFunction& f);
Json certificate_to_json(const Certificate& cert);

/// Fixed 17-significant-digit float formatting for CSV cells.
std::string format_float(double v);

}  // namespace qfock
