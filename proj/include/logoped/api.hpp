#pragma once

#include <memory>
#include <string>

#include "logoped/clock.hpp"
#include "logoped/error.hpp"
#include "logoped/model.hpp"
#include "logoped/prompts.hpp"
#include "logoped/store.hpp"

namespace logoped {

inline constexpr int kApiSchemaVersion = 1;

/// HTTP status for a module error: 404 NotFound; 409 version, session and
/// reference conflicts; 400 malformed requests; 503 store unavailable;
/// 422 every other validation or domain failure.
int http_status(ErrorCode code);

/// {"code", "message", "details"}. For a ValidationError the code is the
/// first violation's and details lists every violation.
Json error_json(const Error& error);

/// JSON facade over the modules, on cpp-httplib. Every response carries
/// the X-Api-Schema-Version header.
class ApiServer {
 public:
  ApiServer(Store& store, PromptTemplates templates, Clock clock = system_clock());
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound port.
  /// Throws Error(BindFailure).
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace logoped
