#include "logoped/history.hpp"

#include <algorithm>

#include "logoped/repository.hpp"

namespace logoped {

void to_json(Json& j, const ProgressPoint& v) {
  j = Json{{"date", format_timestamp(v.date)},
           {"session_id", v.session_id},
           {"accuracy", format_rational(v.accuracy)},
           {"difficulty", v.difficulty}};
}

std::vector<ProgressPoint> progression(const std::vector<ScoreEntry>& entries, std::string_view child_id,
                                       const SoundTag& sound, std::optional<Timestamp> from,
                                       std::optional<Timestamp> to) {
  std::vector<ProgressPoint> out;
  for (const auto& e : entries) {
    if (e.child_id != child_id || e.target_sound != sound) continue;
    if ((from && e.finished_at < *from) || (to && e.finished_at > *to)) continue;
    out.push_back({e.finished_at, e.session_id, e.accuracy, e.difficulty});
  }
  std::sort(out.begin(), out.end(), [](const ProgressPoint& a, const ProgressPoint& b) {
    return std::tie(a.date, a.session_id) < std::tie(b.date, b.session_id);
  });
  return out;
}

std::vector<ProgressPoint> progression_report(const Store& store, std::string_view child_id, const SoundTag& sound,
                                              std::optional<Timestamp> from, std::optional<Timestamp> to) {
  return store.read([&] {
    load<ChildProfile>(store, child_id);
    return progression(load_all<ScoreEntry>(store, std::string(child_id)), child_id, sound, from, to);
  });
}

}  // namespace logoped
