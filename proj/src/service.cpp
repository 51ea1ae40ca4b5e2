#include "ppimine/service.hpp"

#include <httplib.h>
#include <json.hpp>

namespace ppimine::service {

using nlohmann::json;

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json response_json(const pipeline::ClassifyResponse& r) {
  return json{{"label", to_string(r.label)},
              {"confidence", r.confidence},
              {"band", vtt::to_string(r.band)},
              {"np", r.np},
              {"p_sum", r.p_sum},
              {"n_sum", r.n_sum},
              {"threshold", r.threshold},
              {"model_version", r.model_version}};
}

void error_reply(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

}  // namespace

std::unique_ptr<httplib::Server> make_server(const vtt::VttModel& model,
                                             const StopwordPolicy& policy,
                                             const MentionRecognizer& recognizer,
                                             const ServiceOptions& options) {
  auto server = std::make_unique<httplib::Server>();

  server->Get("/health", [&model](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"status", "ok"}, {"model_version", model.model_version}}.dump(),
                    "application/json");
  });

  server->Post("/classify", [&model, &policy, &recognizer, options](
                                const httplib::Request& req, httplib::Response& res) {
    if (req.body.size() > options.max_text_bytes) {
      error_reply(res, 413, "request body exceeds " + std::to_string(options.max_text_bytes) +
                                " bytes");
      return;
    }
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("text") ||
        !body["text"].is_string()) {
      error_reply(res, 400, "expected JSON object with a \"text\" string");
      return;
    }
    std::string text = body["text"].get<std::string>();
    if (trimmed(text).empty()) {
      error_reply(res, 400, "text must be nonempty");
      return;
    }
    pipeline::ClassifyResponse r =
        pipeline::classify_text(text, model, policy, recognizer, options.cutoffs);
    res.set_content(response_json(r).dump(), "application/json");
  });

  return server;
}

int run_service(const vtt::VttModel& model, const StopwordPolicy& policy,
                const MentionRecognizer& recognizer, const std::string& host, int port,
                const ServiceOptions& options) {
  auto server = make_server(model, policy, recognizer, options);
  return server->listen(host, port) ? 0 : 1;
}

}  // namespace ppimine::service
