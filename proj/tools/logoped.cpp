#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>

#include "logoped/api.hpp"
#include "logoped/bundle.hpp"
#include "logoped/catalog.hpp"
#include "logoped/csv.hpp"
#include "logoped/exercise.hpp"
#include "logoped/history.hpp"
#include "logoped/homework.hpp"
#include "logoped/media.hpp"
#include "logoped/session.hpp"

using namespace logoped;

namespace {

struct Options {
  std::string store;
  std::string config;
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

std::string sounds_column(const WordEntry& w) {
  std::string out;
  for (const auto& s : w.sounds) {
    if (!out.empty()) out += ',';
    out += s.sound.symbol();
    if (s.override_mark) out += '*';
  }
  return out;
}

void print_word(const WordEntry& w) {
  std::cout << w.id << '\t' << w.text << '\t' << to_string(w.part_of_speech) << '\t' << sounds_column(w) << '\n';
}

void print_production(const VocalProduction& p) {
  std::cout << p.id << '\t' << to_string(p.kind) << '\t' << p.target_sound.symbol() << '\t' << p.text << '\n';
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, path + " is not JSON: " + e.what());
  }
}

/// Opens the store; mutating commands also hold the exclusive lock.
class StoreHandle {
 public:
  StoreHandle(const Options& opt, bool exclusive) {
    if (opt.store.empty()) fail(ErrorCode::UsageError, "no store configured: pass --store or set LOGOPED_STORE");
    std::filesystem::create_directories(opt.store);
    if (exclusive) lock_.emplace(opt.store);
    store_ = std::make_unique<Store>(opt.store);
  }
  Store& operator*() { return *store_; }

 private:
  std::optional<ExclusiveStoreLock> lock_;
  std::unique_ptr<Store> store_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logoped: catalog, exercise, homework and bundle administration"};
  app.require_subcommand(1);
  Options opt;
  opt.store = env_or("LOGOPED_STORE", "");
  opt.config = env_or("LOGOPED_CONFIG", LOGOPED_DEFAULT_CONFIG);
  app.add_option("--store", opt.store, "store root directory (env LOGOPED_STORE)");
  app.add_option("--config", opt.config, "prompt template file (env LOGOPED_CONFIG)");

  std::function<void()> action;
  auto on = [&](CLI::App* cmd, std::function<void()> fn) { cmd->callback([&action, fn] { action = fn; }); };

  // media
  auto* media = app.add_subcommand("media", "media assets")->require_subcommand(1);
  std::string media_file;
  std::string media_kind;
  auto* media_ingest = media->add_subcommand("ingest", "register an audio or image file");
  media_ingest->add_option("file", media_file)->required()->check(CLI::ExistingFile);
  media_ingest->add_option("--kind", media_kind)->required()->check(CLI::IsMember({"audio", "image"}));
  on(media_ingest, [&] {
    StoreHandle store(opt, true);
    const auto asset = register_media(*store, read_file(media_file), parse_media_kind(media_kind),
                                      std::filesystem::path(media_file).filename().string());
    std::cout << asset.id << '\n';
  });

  // words
  auto* word = app.add_subcommand("word", "words")->require_subcommand(1);
  std::string csv_file;
  WordFields wf;
  std::string w_pos;
  std::string w_gender;
  std::string w_syllabified;
  std::string w_image;
  std::vector<std::string> w_sounds;
  auto* word_add = word->add_subcommand("add", "add one word, or a CSV batch with --csv");
  word_add->add_option("--csv", csv_file, "CSV batch file (see docs/ingest.md)")->check(CLI::ExistingFile);
  word_add->add_option("--text", wf.text);
  word_add->add_option("--first-syllable", wf.first_syllable);
  word_add->add_option("--pos", w_pos, "noun|verb|adjective|other");
  word_add->add_option("--gender", w_gender, "masculine|feminine|neuter|not_applicable");
  word_add->add_flag("--articulated", wf.articulated);
  word_add->add_option("--audio", wf.audio, "media hash");
  word_add->add_option("--syllabified-audio", w_syllabified, "media hash");
  word_add->add_option("--image", w_image, "media hash");
  word_add->add_option("--sound", w_sounds, "extra sound tag (repeatable)");
  on(word_add, [&] {
    StoreHandle store(opt, true);
    if (!csv_file.empty()) {
      const auto words =
          ingest_words_csv(*store, read_file(csv_file), std::filesystem::path(csv_file).parent_path());
      std::cout << words.size() << " words added\n";
      return;
    }
    if (wf.text.empty()) fail(ErrorCode::UsageError, "--text or --csv is required");
    if (!w_pos.empty()) wf.part_of_speech = parse_part_of_speech(w_pos);
    if (!w_gender.empty()) wf.gender = parse_gender(w_gender);
    if (!w_syllabified.empty()) wf.syllabified_audio = w_syllabified;
    if (!w_image.empty()) wf.image = w_image;
    for (const auto& s : w_sounds) wf.sound_overrides.push_back(SoundTag::parse(s));
    print_word(create_word(*store, wf));
  });
  auto* word_list = word->add_subcommand("list", "list every word");
  on(word_list, [&] {
    StoreHandle store(opt, false);
    for (const auto& w : search_words(*store, "")) print_word(w);
  });
  std::string query;
  std::string s_sound;
  std::string s_pos;
  auto* word_search = word->add_subcommand("search", "search words by text, sound and part of speech");
  word_search->add_option("query", query);
  word_search->add_option("--sound", s_sound);
  word_search->add_option("--pos", s_pos);
  on(word_search, [&] {
    StoreHandle store(opt, false);
    std::optional<SoundTag> sound;
    std::optional<PartOfSpeech> pos;
    if (!s_sound.empty()) sound = SoundTag::parse(s_sound);
    if (!s_pos.empty()) pos = parse_part_of_speech(s_pos);
    for (const auto& w : search_words(*store, query, sound, pos)) print_word(w);
  });
  std::string word_id;
  std::string template_id = "point_to";
  auto* word_prompt = word->add_subcommand("prompt", "formulate a prompt for a word");
  word_prompt->add_option("id", word_id)->required();
  word_prompt->add_option("--template", template_id);
  on(word_prompt, [&] {
    StoreHandle store(opt, false);
    std::cout << PromptTemplates::load(opt.config).formulate(get_word(*store, word_id), template_id) << '\n';
  });

  // productions
  auto* production = app.add_subcommand("production", "vocal productions")->require_subcommand(1);
  ProductionFields pf;
  std::string p_kind;
  std::string p_sound;
  auto* production_add = production->add_subcommand("add", "add one production, or a CSV batch with --csv");
  production_add->add_option("--csv", csv_file, "CSV batch file (see docs/ingest.md)")->check(CLI::ExistingFile);
  production_add->add_option("--kind", p_kind);
  production_add->add_option("--text", pf.text);
  production_add->add_option("--part", pf.parts, "part (repeatable, in order)");
  production_add->add_option("--sound", p_sound);
  production_add->add_option("--audio", pf.audio, "media hash");
  on(production_add, [&] {
    StoreHandle store(opt, true);
    if (!csv_file.empty()) {
      const auto prods =
          ingest_productions_csv(*store, read_file(csv_file), std::filesystem::path(csv_file).parent_path());
      std::cout << prods.size() << " productions added\n";
      return;
    }
    if (p_kind.empty() || p_sound.empty()) fail(ErrorCode::UsageError, "--kind and --sound are required");
    pf.kind = parse_production_kind(p_kind);
    pf.target_sound = SoundTag::parse(p_sound);
    print_production(create_production(*store, pf));
  });
  on(production->add_subcommand("list", "list every production"), [&] {
    StoreHandle store(opt, false);
    for (const auto& p : list_productions(*store)) print_production(p);
  });

  // exercises
  auto* exercise = app.add_subcommand("exercise", "exercises")->require_subcommand(1);
  std::string exercise_file;
  auto* exercise_create = exercise->add_subcommand("create", "create an exercise from a JSON file");
  exercise_create->add_option("file", exercise_file)->required()->check(CLI::ExistingFile);
  on(exercise_create, [&] {
    StoreHandle store(opt, true);
    const auto ex = create_exercise(*store, parse_json<Exercise>(read_json_file(exercise_file)));
    std::cout << ex.id << '\n';
  });
  auto* exercise_validate = exercise->add_subcommand("validate", "check an exercise JSON file without saving");
  exercise_validate->add_option("file", exercise_file)->required()->check(CLI::ExistingFile);
  on(exercise_validate, [&] {
    StoreHandle store(opt, false);
    const auto draft = parse_json<Exercise>(read_json_file(exercise_file));
    const auto violations = validate_exercise(draft, snapshot_for(*store, draft));
    if (violations.empty()) {
      std::cout << "valid\n";
      return;
    }
    for (const auto& v : violations) {
      std::cout << v.code << '\t' << (v.item >= 0 ? "item " + std::to_string(v.item) : "exercise") << '\t'
                << v.message << '\n';
    }
    throw ValidationError(violations);
  });
  on(exercise->add_subcommand("list", "list exercises"), [&] {
    StoreHandle store(opt, false);
    for (const auto& e : list_exercises(*store)) {
      std::cout << e.id << '\t' << to_string(e.type) << '\t' << e.target_sound.symbol() << '\t' << e.difficulty
                << '\t' << e.items.size() << '\n';
    }
  });

  // children
  auto* child = app.add_subcommand("child", "children")->require_subcommand(1);
  ChildProfile cp;
  std::vector<std::string> c_sounds;
  auto* child_add = child->add_subcommand("add", "add a child profile");
  child_add->add_option("--name", cp.name)->required();
  child_add->add_option("--birth-year", cp.birth_year)->required();
  child_add->add_option("--sound", c_sounds, "impaired sound (repeatable)")->required();
  child_add->add_option("--notes", cp.report_notes, "individual report notes");
  on(child_add, [&] {
    StoreHandle store(opt, true);
    for (const auto& s : c_sounds) cp.impaired_sounds.insert(SoundTag::parse(s));
    const auto created = add_child(*store, cp);
    std::cout << created.id << '\n';
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    if (auto w = age_warning(created, tm.tm_year + 1900)) std::cerr << "warning: " << *w << '\n';
  });

  // homework
  auto* homework = app.add_subcommand("homework", "homework")->require_subcommand(1);
  std::string child_id;
  std::vector<std::string> exercise_ids;
  int k = 3;
  auto print_homework = [](const Homework& h) {
    std::cout << h.id << '\t' << to_string(h.origin) << '\t';
    for (std::size_t i = 0; i < h.exercise_ids.size(); ++i) std::cout << (i ? "," : "") << h.exercise_ids[i];
    std::cout << '\n';
    if (!h.policy_trace.empty()) std::cout << h.policy_trace << '\n';
  };
  auto* homework_assign = homework->add_subcommand("assign", "assign exercises to a child");
  homework_assign->add_option("--child", child_id)->required();
  homework_assign->add_option("--exercise", exercise_ids, "exercise id (repeatable, in order)");
  on(homework_assign, [&] {
    StoreHandle store(opt, true);
    print_homework(assign_homework(*store, child_id, exercise_ids, system_clock()));
  });
  auto* homework_auto = homework->add_subcommand("auto", "generate homework from the score history");
  homework_auto->add_option("--child", child_id)->required();
  homework_auto->add_option("-k,--count", k, "number of exercises")->check(CLI::PositiveNumber);
  on(homework_auto, [&] {
    StoreHandle store(opt, true);
    print_homework(auto_generate_homework(*store, child_id, k, system_clock()));
  });

  // bundles and results
  auto* bundle = app.add_subcommand("bundle", "offline transfer bundles")->require_subcommand(1);
  std::string homework_id;
  std::string path;
  auto* bundle_export = bundle->add_subcommand("export", "write a homework bundle");
  bundle_export->add_option("homework", homework_id)->required();
  bundle_export->add_option("out", path)->required();
  on(bundle_export, [&] {
    StoreHandle store(opt, false);
    export_bundle_file(*store, homework_id, path);
    std::cout << path << '\n';
  });
  auto* bundle_import = bundle->add_subcommand("import", "import a homework bundle");
  bundle_import->add_option("file", path)->required()->check(CLI::ExistingFile);
  on(bundle_import, [&] {
    StoreHandle store(opt, true);
    std::cout << import_bundle_file(*store, path).id << '\n';
  });

  auto* results = app.add_subcommand("results", "session results files")->require_subcommand(1);
  auto* results_export = results->add_subcommand("export", "write finalized results to a results file");
  results_export->add_option("out", path)->required();
  results_export->add_option("--child", child_id);
  on(results_export, [&] {
    StoreHandle store(opt, false);
    const auto list = list_results(*store, child_id.empty() ? std::nullopt : std::optional(child_id));
    write_file_atomic(path, export_results(list));
    std::cout << list.size() << " results exported\n";
  });
  auto* results_import = results->add_subcommand("import", "import a results file");
  results_import->add_option("file", path)->required()->check(CLI::ExistingFile);
  on(results_import, [&] {
    StoreHandle store(opt, true);
    std::cout << import_results(*store, read_file(path)).size() << " results imported\n";
  });

  // reports
  auto* report = app.add_subcommand("report", "reports")->require_subcommand(1);
  std::string r_sound;
  std::string r_from;
  std::string r_to;
  auto* report_progression = report->add_subcommand("progression", "accuracy over time for one sound");
  report_progression->add_option("--child", child_id)->required();
  report_progression->add_option("--sound", r_sound)->required();
  report_progression->add_option("--from", r_from, "YYYY-MM-DD or ISO timestamp");
  report_progression->add_option("--to", r_to, "YYYY-MM-DD or ISO timestamp");
  on(report_progression, [&] {
    StoreHandle store(opt, false);
    std::optional<Timestamp> from;
    std::optional<Timestamp> to;
    if (!r_from.empty()) from = parse_timestamp(r_from);
    if (!r_to.empty()) to = parse_timestamp(r_to);
    for (const auto& p : progression_report(*store, child_id, SoundTag::parse(r_sound), from, to)) {
      std::cout << format_timestamp(p.date) << '\t' << format_rational(p.accuracy) << '\t' << p.difficulty << '\t'
                << p.session_id << '\n';
    }
  });

  auto* store_cmd = app.add_subcommand("store", "store maintenance")->require_subcommand(1);
  on(store_cmd->add_subcommand("check", "full referential scan"), [&] {
    StoreHandle store(opt, false);
    const auto dangling = (*store).check_references();
    for (const auto& d : dangling) std::cout << to_string(d.from) << " -> " << to_string(d.to) << '\n';
    std::cout << dangling.size() << " dangling references\n";
    if (!dangling.empty()) fail(ErrorCode::DanglingRef, "store has dangling references");
  });

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--host", host)->envname("LOGOPED_HOST");
  serve->add_option("--port", port)->envname("LOGOPED_PORT");
  on(serve, [&] {
    StoreHandle store(opt, true);
    ApiServer server(*store, PromptTemplates::load(opt.config));
    const int bound = server.bind(host, port);
    std::cerr << "listening on " << host << ':' << bound << '\n';
    server.run();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "UsageError: " << e.what() << '\n';
    return 2;
  }

  try {
    action();
    return 0;
  } catch (const Error& e) {
    const auto body = error_json(e);
    std::cerr << body["code"].get<std::string>() << ": " << e.what() << '\n';
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << '\n';
    return 1;
  }
}
