#include "logoped/api.hpp"

#include <httplib.h>

#include <ctime>

#include "logoped/bundle.hpp"
#include "logoped/catalog.hpp"
#include "logoped/exercise.hpp"
#include "logoped/history.hpp"
#include "logoped/homework.hpp"
#include "logoped/media.hpp"
#include "logoped/repository.hpp"
#include "logoped/session.hpp"

namespace logoped {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::StaleVersion:
    case ErrorCode::ReferencedElsewhere:
    case ErrorCode::ReferencedByExercise:
    case ErrorCode::SessionFinished:
    case ErrorCode::SessionNotFinished:
    case ErrorCode::SessionBusy:
    case ErrorCode::ImportConflict:
    case ErrorCode::StoreBusy:
      return 409;
    case ErrorCode::InvalidArgument:
    case ErrorCode::UsageError:
      return 400;
    case ErrorCode::StoreUnavailable:
      return 503;
    case ErrorCode::BindFailure:
      return 500;
    default:
      return 422;
  }
}

Json error_json(const Error& error) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&error)) {
    Json details = Json::array();
    for (const auto& violation : v->violations()) {
      Json d{{"code", violation.code}, {"message", violation.message}};
      if (violation.item >= 0) d["item"] = violation.item;
      details.push_back(std::move(d));
    }
    const auto code = v->violations().empty() ? std::string(to_string(error.code())) : v->violations()[0].code;
    return Json{{"code", code}, {"message", error.what()}, {"details", details}};
  }
  return Json{{"code", to_string(error.code())}, {"message", error.what()}, {"details", error.details()}};
}

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(Response& res, const Error& e) { send_json(res, http_status(e.code()), error_json(e)); }

Json body_json(const Request& req) {
  try {
    auto j = Json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!j.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

template <class T>
T body_as(const Request& req) {
  return parse_json<T>(body_json(req));
}

std::optional<std::string> param(const Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  auto v = req.get_param_value(name);
  if (v.empty()) return std::nullopt;
  return v;
}

std::string required_param(const Request& req, const char* name) {
  auto v = param(req, name);
  if (!v) fail(ErrorCode::InvalidArgument, std::string("query parameter '") + name + "' is required");
  return *v;
}

template <class T>
T field(const Json& body, const char* name) {
  if (!body.contains(name)) fail(ErrorCode::InvalidArgument, std::string("field '") + name + "' is required");
  try {
    return body.at(name).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("field '") + name + "' has the wrong type");
  }
}

std::string content_type(const MediaAsset& asset, std::string_view bytes) {
  if (asset.kind == MediaKind::image) return sniff_image(bytes) == ImageFormat::png ? "image/png" : "image/jpeg";
  return bytes.substr(0, 4) == "RIFF" ? "audio/wav" : "audio/mpeg";
}

int current_year(const Clock& clock) {
  const auto t = std::chrono::system_clock::to_time_t(clock());
  std::tm tm{};
  gmtime_r(&t, &tm);
  return tm.tm_year + 1900;
}

}  // namespace

struct ApiServer::Impl {
  Store& store;
  PromptTemplates templates;
  Clock clock;
  httplib::Server server;

  Impl(Store& s, PromptTemplates t, Clock c) : store(s), templates(std::move(t)), clock(std::move(c)) { routes(); }

  /// Wraps a handler so module errors become JSON error responses.
  template <class F>
  httplib::Server::Handler wrap(F fn) {
    return [fn = std::move(fn)](const Request& req, Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_json(res, 500, Json{{"code", "InternalError"}, {"message", e.what()}, {"details", Json::array()}});
      }
    };
  }

  void routes();
  void media_routes();
  void catalog_routes();
  void exercise_routes();
  void homework_routes();
  void session_routes();
  void transfer_routes();
};

void ApiServer::Impl::routes() {
  server.set_post_routing_handler([](const Request&, Response& res) {
    res.set_header("X-Api-Schema-Version", std::to_string(kApiSchemaVersion));
  });
  server.set_error_handler([](const Request& req, Response& res) {
    if (res.status == 404 && res.body.empty()) {
      send_json(res, 404, Json{{"code", "NotFound"}, {"message", "no route for " + req.method + " " + req.path},
                               {"details", Json::array()}});
    }
  });
  media_routes();
  catalog_routes();
  exercise_routes();
  homework_routes();
  session_routes();
  transfer_routes();

  server.Get("/api/store/check", wrap([this](const Request&, Response& res) {
               Json dangling = Json::array();
               for (const auto& d : store.check_references()) {
                 dangling.push_back({{"from", to_string(d.from)}, {"to", to_string(d.to)}});
               }
               send_json(res, 200, Json{{"dangling", dangling}});
             }));
}

void ApiServer::Impl::media_routes() {
  // multipart with a "file" part (and optional "kind" field), or a raw body
  // with ?kind=&filename=
  server.Post("/api/media", wrap([this](const Request& req, Response& res) {
                std::string bytes;
                std::string filename;
                std::string kind;
                if (req.is_multipart_form_data()) {
                  if (!req.has_file("file")) fail(ErrorCode::InvalidArgument, "multipart part 'file' is required");
                  const auto file = req.get_file_value("file");
                  bytes = file.content;
                  filename = file.filename;
                  if (req.has_file("kind")) kind = req.get_file_value("kind").content;
                } else {
                  bytes = req.body;
                  filename = param(req, "filename").value_or("");
                }
                if (kind.empty()) kind = required_param(req, "kind");
                send_json(res, 201, register_media(store, bytes, parse_media_kind(kind), filename));
              }));
  server.Get(R"(/api/media/([0-9a-f]{64}))", wrap([this](const Request& req, Response& res) {
               const auto hash = req.matches[1].str();
               const auto asset = load<MediaAsset>(store, hash);
               const auto bytes = read_media(store, hash);
               res.set_header("Cache-Control", "public, max-age=31536000, immutable");
               res.set_header("ETag", "\"" + hash + "\"");
               res.set_content(bytes, content_type(asset, bytes));
             }));
}

void ApiServer::Impl::catalog_routes() {
  server.Get("/api/words", wrap([this](const Request& req, Response& res) {
               std::optional<SoundTag> sound;
               std::optional<PartOfSpeech> pos;
               if (auto s = param(req, "sound")) sound = SoundTag::parse(*s);
               if (auto p = param(req, "part_of_speech")) pos = parse_part_of_speech(*p);
               send_json(res, 200, search_words(store, param(req, "query").value_or(""), sound, pos));
             }));
  server.Post("/api/words", wrap([this](const Request& req, Response& res) {
                send_json(res, 201, create_word(store, body_as<WordFields>(req)));
              }));
  server.Get(R"(/api/words/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, get_word(store, req.matches[1].str()));
             }));
  server.Put(R"(/api/words/([^/]+))", wrap([this](const Request& req, Response& res) {
               const auto body = body_json(req);
               const auto version = field<std::int64_t>(body, "version");
               send_json(res, 200, update_word(store, req.matches[1].str(), parse_json<WordFields>(body), version));
             }));
  server.Delete(R"(/api/words/([^/]+))", wrap([this](const Request& req, Response& res) {
                  delete_word(store, req.matches[1].str());
                  res.status = 204;
                }));
  server.Get(R"(/api/words/([^/]+)/prompt)", wrap([this](const Request& req, Response& res) {
               const auto word = get_word(store, req.matches[1].str());
               const auto id = param(req, "template").value_or("point_to");
               send_json(res, 200, Json{{"template", id}, {"text", templates.formulate(word, id)}});
             }));

  server.Get("/api/productions", wrap([this](const Request&, Response& res) {
               send_json(res, 200, list_productions(store));
             }));
  server.Post("/api/productions", wrap([this](const Request& req, Response& res) {
                send_json(res, 201, create_production(store, body_as<ProductionFields>(req)));
              }));
  server.Get(R"(/api/productions/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, get_production(store, req.matches[1].str()));
             }));
  server.Delete(R"(/api/productions/([^/]+))", wrap([this](const Request& req, Response& res) {
                  delete_production(store, req.matches[1].str());
                  res.status = 204;
                }));
}

void ApiServer::Impl::exercise_routes() {
  server.Get("/api/exercises", wrap([this](const Request&, Response& res) {
               send_json(res, 200, list_exercises(store));
             }));
  server.Post("/api/exercises", wrap([this](const Request& req, Response& res) {
                send_json(res, 201, create_exercise(store, body_as<Exercise>(req)));
              }));
  server.Post("/api/exercises/validate", wrap([this](const Request& req, Response& res) {
                const auto draft = body_as<Exercise>(req);
                const auto violations = validate_exercise(draft, snapshot_for(store, draft));
                Json out = Json::array();
                for (const auto& v : violations) {
                  Json d{{"code", v.code}, {"message", v.message}};
                  if (v.item >= 0) d["item"] = v.item;
                  out.push_back(std::move(d));
                }
                send_json(res, 200, Json{{"valid", violations.empty()}, {"violations", out}});
              }));
  server.Get(R"(/api/exercises/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, get_exercise(store, req.matches[1].str()));
             }));
  server.Delete(R"(/api/exercises/([^/]+))", wrap([this](const Request& req, Response& res) {
                  delete_exercise(store, req.matches[1].str());
                  res.status = 204;
                }));
  server.Post(R"(/api/exercises/([^/]+)/clone)", wrap([this](const Request& req, Response& res) {
                const auto body = body_json(req);
                send_json(res, 201,
                          clone_exercise_with_difficulty(store, req.matches[1].str(), field<int>(body, "difficulty")));
              }));
}

void ApiServer::Impl::homework_routes() {
  server.Get("/api/children", wrap([this](const Request&, Response& res) {
               send_json(res, 200, list_children(store));
             }));
  server.Post("/api/children", wrap([this](const Request& req, Response& res) {
                const auto child = add_child(store, body_as<ChildProfile>(req));
                Json out{{"child", child}, {"warnings", Json::array()}};
                if (auto w = age_warning(child, current_year(clock))) out["warnings"].push_back(*w);
                send_json(res, 201, out);
              }));
  server.Get(R"(/api/children/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, get_child(store, req.matches[1].str()));
             }));

  server.Get("/api/homework", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, list_homework(store, param(req, "child_id")));
             }));
  server.Post("/api/homework", wrap([this](const Request& req, Response& res) {
                const auto body = body_json(req);
                send_json(res, 201,
                          assign_homework(store, field<std::string>(body, "child_id"),
                                          field<std::vector<std::string>>(body, "exercise_ids"), clock));
              }));
  server.Post("/api/homework/auto", wrap([this](const Request& req, Response& res) {
                const auto body = body_json(req);
                const int k = body.contains("k") ? field<int>(body, "k") : 3;
                send_json(res, 201, auto_generate_homework(store, field<std::string>(body, "child_id"), k, clock));
              }));
  server.Get(R"(/api/homework/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, get_homework(store, req.matches[1].str()));
             }));

  server.Get("/api/reports/progression", wrap([this](const Request& req, Response& res) {
               std::optional<Timestamp> from;
               std::optional<Timestamp> to;
               if (auto f = param(req, "from")) from = parse_timestamp(*f);
               if (auto t = param(req, "to")) to = parse_timestamp(*t);
               send_json(res, 200,
                         progression_report(store, required_param(req, "child_id"),
                                            SoundTag::parse(required_param(req, "sound")), from, to));
             }));
}

void ApiServer::Impl::session_routes() {
  server.Post("/api/sessions", wrap([this](const Request& req, Response& res) {
                const auto body = body_json(req);
                const auto s = start_session(store, field<std::string>(body, "exercise_id"),
                                             field<std::string>(body, "child_id"), clock);
                send_json(res, 201, session_view(s));
              }));
  server.Get(R"(/api/sessions/([^/]+))", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, session_view(get_session(store, req.matches[1].str())));
             }));
  server.Get(R"(/api/sessions/([^/]+)/next)", wrap([this](const Request& req, Response& res) {
               send_json(res, 200, present_next(store, req.matches[1].str()));
             }));
  auto outcome_response = [this](Response& res, const std::string& id, const ItemOutcome& o) {
    send_json(res, 200, Json{{"outcome", o}, {"session", session_view(get_session(store, id))}});
  };
  server.Post(R"(/api/sessions/([^/]+)/answer)", wrap([this, outcome_response](const Request& req, Response& res) {
                const auto id = req.matches[1].str();
                const auto body = body_json(req);
                outcome_response(res, id,
                                 submit_answer(store, id, field<int>(body, "choice"),
                                               field<std::int64_t>(body, "elapsed_ms")));
              }));
  server.Post(R"(/api/sessions/([^/]+)/expire)", wrap([this, outcome_response](const Request& req, Response& res) {
                const auto id = req.matches[1].str();
                outcome_response(res, id, expire_item(store, id));
              }));
  server.Post(R"(/api/sessions/([^/]+)/finalize)", wrap([this](const Request& req, Response& res) {
                send_json(res, 200, finalize_session(store, req.matches[1].str(), clock));
              }));
}

void ApiServer::Impl::transfer_routes() {
  server.Post("/api/bundles/export", wrap([this](const Request& req, Response& res) {
                const auto body = body_json(req);
                const auto id = field<std::string>(body, "homework_id");
                res.set_header("Content-Disposition", "attachment; filename=\"" + id + ".zip\"");
                res.set_content(export_bundle(store, id), "application/zip");
              }));
  server.Post("/api/bundles/import", wrap([this](const Request& req, Response& res) {
                send_json(res, 201, import_bundle(store, req.body));
              }));
  server.Get("/api/results", wrap([this](const Request& req, Response& res) {
               res.set_content(export_results(list_results(store, param(req, "child_id"))), "application/json");
             }));
  server.Post("/api/results/import", wrap([this](const Request& req, Response& res) {
                send_json(res, 201, import_results(store, req.body));
              }));
}

ApiServer::ApiServer(Store& store, PromptTemplates templates, Clock clock)
    : impl_(std::make_unique<Impl>(store, std::move(templates), std::move(clock))) {}

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) fail(ErrorCode::BindFailure, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    fail(ErrorCode::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }
void ApiServer::stop() { impl_->server.stop(); }
void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace logoped
