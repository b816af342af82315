#include "logoped/repository.hpp"

namespace logoped {

std::vector<Ref> EntityTraits<WordEntry>::refs(const WordEntry& v) {
  std::vector<Ref> out{{"media", v.audio}};
  if (v.syllabified_audio) out.push_back({"media", *v.syllabified_audio});
  if (v.image) out.push_back({"media", *v.image});
  return out;
}

std::vector<Ref> EntityTraits<Exercise>::refs(const Exercise& v) {
  std::vector<Ref> out{{"media", v.instruction_audio}};
  for (const auto& item : v.items) {
    out.push_back({item.ref.kind == RefKind::word ? "word" : "production", item.ref.id});
    if (item.pair_word) out.push_back({"word", *item.pair_word});
  }
  return out;
}

std::vector<Ref> EntityTraits<Homework>::refs(const Homework& v) {
  std::vector<Ref> out{{"child", v.child_id}};
  for (const auto& id : v.exercise_ids) out.push_back({"exercise", id});
  return out;
}

}  // namespace logoped
