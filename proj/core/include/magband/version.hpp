#pragma once

namespace magband {

inline constexpr const char* kVersion = "0.1.0";

// Schema version for the JSON run summary; bump on any field change.
inline constexpr int kSummarySchemaVersion = 1;

} // namespace magband
