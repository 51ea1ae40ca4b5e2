#pragma once

#include <memory>
#include <string>

#include "ppimine/pipeline.hpp"

namespace httplib {
class Server;
}

namespace ppimine::service {

struct ServiceOptions {
  std::size_t max_text_bytes = 100 * 1024;
  vtt::BandCutoffs cutoffs;
};

/// JSON-over-HTTP classification service:
///   GET  /health    -> {"status": "ok", "model_version": ...}
///   POST /classify  {"text": str} -> label, confidence, band, np, p_sum,
///                                    n_sum, threshold, model_version
/// The model, policy and recognizer must outlive the server. Stateless per
/// request; handlers only read shared immutable state.
std::unique_ptr<httplib::Server> make_server(const vtt::VttModel& model,
                                             const StopwordPolicy& policy,
                                             const MentionRecognizer& recognizer,
                                             const ServiceOptions& options = {});

/// Blocking listen on host:port.
int run_service(const vtt::VttModel& model, const StopwordPolicy& policy,
                const MentionRecognizer& recognizer, const std::string& host, int port,
                const ServiceOptions& options = {});

}  // namespace ppimine::service
