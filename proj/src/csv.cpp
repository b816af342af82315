#include "logoped/csv.hpp"

#include <map>

#include "logoped/catalog.hpp"
#include "logoped/error.hpp"
#include "logoped/media.hpp"

namespace logoped {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c != '"') {
        field += c;
      } else if (i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CR of a CRLF
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) fail(ErrorCode::InvalidArgument, "CSV has an unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

namespace {

class Table {
 public:
  Table(std::string_view csv, std::vector<std::string> required) : rows_(parse_csv(csv)) {
    if (rows_.empty()) fail(ErrorCode::InvalidArgument, "CSV has no header row");
    for (std::size_t i = 0; i < rows_[0].size(); ++i) columns_[rows_[0][i]] = i;
    for (const auto& name : required) {
      if (!columns_.count(name)) fail(ErrorCode::InvalidArgument, "CSV lacks required column '" + name + "'");
    }
  }

  std::size_t size() const { return rows_.size() - 1; }

  /// Empty string for absent columns or short rows.
  std::string get(std::size_t row, const std::string& column) const {
    const auto it = columns_.find(column);
    const auto& r = rows_[row + 1];
    return it == columns_.end() || it->second >= r.size() ? std::string() : r[it->second];
  }

 private:
  std::vector<std::vector<std::string>> rows_;
  std::map<std::string, std::size_t> columns_;
};

class MediaResolver {
 public:
  MediaResolver(Store& store, std::filesystem::path base) : store_(store), base_(std::move(base)) {}

  std::optional<std::string> operator()(const std::string& value, MediaKind kind) {
    if (value.empty()) return std::nullopt;
    if (store_.exists("media", value)) return value;
    const auto path = base_ / value;
    if (auto it = by_path_.find(path.string()); it != by_path_.end()) return it->second;
    if (!std::filesystem::is_regular_file(path)) {
      fail(ErrorCode::DanglingAssetRef, "media '" + value + "' is neither a registered hash nor a file", {value});
    }
    auto id = register_media(store_, read_file(path), kind, path.filename().string()).id;
    by_path_.emplace(path.string(), id);
    return id;
  }

 private:
  Store& store_;
  std::filesystem::path base_;
  std::map<std::string, std::string> by_path_;
};

bool parse_bool(const std::string& s) {
  if (s.empty() || s == "0" || s == "false" || s == "no") return false;
  if (s == "1" || s == "true" || s == "yes") return true;
  fail(ErrorCode::InvalidArgument, "'" + s + "' is not a boolean");
}

std::vector<std::string> split(const std::string& s, std::string_view separators) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (separators.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

template <class T, class F>
std::vector<T> ingest(Store& store, const Table& table, F&& make) {
  return store.transaction([&] {
    std::vector<T> out;
    out.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      try {
        out.push_back(make(i));
      } catch (const ValidationError&) {
        throw;
      } catch (const Error& e) {
        // rows are numbered as in a spreadsheet: header is row 1
        throw Error(e.code(), "row " + std::to_string(i + 2) + ": " + e.what(), e.details());
      }
    }
    return out;
  });
}

}  // namespace

std::vector<WordEntry> ingest_words_csv(Store& store, std::string_view csv, const std::filesystem::path& base_dir) {
  const Table table(csv, {"text", "first_syllable", "audio"});
  MediaResolver media(store, base_dir);
  return ingest<WordEntry>(store, table, [&](std::size_t i) {
    WordFields f;
    f.text = table.get(i, "text");
    f.first_syllable = table.get(i, "first_syllable");
    const auto pos = table.get(i, "part_of_speech");
    f.part_of_speech = pos.empty() ? PartOfSpeech::noun : parse_part_of_speech(pos);
    const auto gender = table.get(i, "gender");
    f.gender = gender.empty() ? Gender::not_applicable : parse_gender(gender);
    f.articulated = parse_bool(table.get(i, "articulated"));
    f.audio = media(table.get(i, "audio"), MediaKind::audio).value_or("");
    f.syllabified_audio = media(table.get(i, "syllabified_audio"), MediaKind::audio);
    f.image = media(table.get(i, "image"), MediaKind::image);
    for (const auto& s : split(table.get(i, "sounds"), " ;")) f.sound_overrides.push_back(SoundTag::parse(s));
    return create_word(store, f);
  });
}

std::vector<VocalProduction> ingest_productions_csv(Store& store, std::string_view csv,
                                                    const std::filesystem::path& base_dir) {
  const Table table(csv, {"kind", "text", "target_sound", "audio"});
  MediaResolver media(store, base_dir);
  return ingest<VocalProduction>(store, table, [&](std::size_t i) {
    ProductionFields f;
    f.kind = parse_production_kind(table.get(i, "kind"));
    f.text = table.get(i, "text");
    f.parts = split(table.get(i, "parts"), "|");
    f.target_sound = SoundTag::parse(table.get(i, "target_sound"));
    f.audio = media(table.get(i, "audio"), MediaKind::audio).value_or("");
    return create_production(store, f);
  });
}

}  // namespace logoped
