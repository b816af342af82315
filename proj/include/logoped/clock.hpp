#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace logoped {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// The engine never reads the wall clock directly; callers inject one.
using Clock = std::function<Timestamp()>;

Clock system_clock();
/// Always returns `at`.
Clock fixed_clock(Timestamp at);

/// "2026-10-16T08:30:00.000Z"
std::string format_timestamp(Timestamp t);
/// Accepts the format_timestamp form, with or without milliseconds, and a
/// bare date ("2026-10-16", midnight UTC). Throws Error(InvalidArgument).
Timestamp parse_timestamp(std::string_view text);

}  // namespace logoped
