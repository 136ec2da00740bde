#pragma once

namespace lwtune {

inline constexpr const char* library_version = "1.0.0";

// Version of the JSON report layout emitted by report_to_json and
// comparison_to_json. Bumped whenever a key is renamed or removed.
inline constexpr int report_schema_version = 1;

}  // namespace lwtune
