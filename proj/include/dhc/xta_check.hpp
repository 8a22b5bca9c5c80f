#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dhc {

// Validates text against the XTA subset the exporter produces
// (docs/xta-subset.md): global bool/clock/const declarations, parameterless
// processes with states, invariants, init and trans sections, and a system
// line. Checks declarations and references, guard/assign expression shape,
// and per-process init uniqueness. Returns human-readable problems; empty
// means the text passes.
std::vector<std::string> check_xta(std::string_view text);

}  // namespace dhc
