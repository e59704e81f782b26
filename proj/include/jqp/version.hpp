#pragma once

namespace jqp {

inline constexpr const char* kToolName = "jqp";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kScenarioSchema = 1;
inline constexpr int kReportSchema = 1;

} // namespace jqp
