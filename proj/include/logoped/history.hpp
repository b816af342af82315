#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "logoped/clock.hpp"
#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

struct ProgressPoint {
  Timestamp date{};
  std::string session_id;
  Rational accuracy;
  int difficulty = 1;

  bool operator==(const ProgressPoint&) const = default;
};

void to_json(Json& j, const ProgressPoint& v);

/// Pure part of the report: entries for `child_id` and `sound` with
/// from <= finished_at <= to (bounds optional), ordered by
/// (finished_at, session_id).
std::vector<ProgressPoint> progression(const std::vector<ScoreEntry>& entries, std::string_view child_id,
                                       const SoundTag& sound, std::optional<Timestamp> from,
                                       std::optional<Timestamp> to);

/// Errors: NotFound (child).
std::vector<ProgressPoint> progression_report(const Store& store, std::string_view child_id, const SoundTag& sound,
                                              std::optional<Timestamp> from, std::optional<Timestamp> to);

}  // namespace logoped
