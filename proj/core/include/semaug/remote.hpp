#pragma once

#include <memory>
#include <string>

#include "semaug/backends.hpp"

namespace semaug {

// JSON-over-HTTP backend adapters. Wire format lives in docs/protocol.md:
// POST <base-url>/v1/run with {"task": "caption"|"score"|"generate",
// "payload": {...}}; images travel as base64 PNG. Capabilities are fetched
// once from GET /v1/capabilities.

std::shared_ptr<CaptionerBackend> make_remote_captioner(const std::string& base_url,
                                                        const RemoteOptions& options);
std::shared_ptr<ScorerBackend> make_remote_scorer(const std::string& base_url,
                                                  const RemoteOptions& options);
std::shared_ptr<DiffusionBackend> make_remote_diffusion(const std::string& base_url,
                                                        const RemoteOptions& options);

/// Serves a backend triple over the wire protocol. Used by tests to exercise
/// the remote adapters end to end and by `semaug-serve` to bridge in-process
/// backends to other tools.
class BackendHttpServer {
  public:
    BackendHttpServer(std::shared_ptr<CaptionerBackend> captioner,
                      std::shared_ptr<ScorerBackend> scorer,
                      std::shared_ptr<DiffusionBackend> diffusion);
    ~BackendHttpServer();

    BackendHttpServer(const BackendHttpServer&) = delete;
    BackendHttpServer& operator=(const BackendHttpServer&) = delete;

    /// Binds and starts serving on a background thread; returns the bound
    /// port (useful with port 0). Throws IoError on bind failure.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace semaug
