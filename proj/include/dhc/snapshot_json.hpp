#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dhc/snapshot.hpp"

namespace dhc {

// Parses the snapshot file format (docs/snapshot.schema.json). Positions are
// exact: JSON strings accept "p/q", decimal and integer forms; plain JSON
// integers are taken as-is. Unknown keys are rejected. The result is
// validated; invariant violations raise EvalError-free std::runtime_error
// with the first violation.
TrafficSnapshot load_snapshot(const std::string& text);

nlohmann::json snapshot_to_json(const TrafficSnapshot& s);
std::string save_snapshot(const TrafficSnapshot& s);  // pretty-printed JSON

}  // namespace dhc
