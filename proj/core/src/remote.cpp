#include "semaug/remote.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

#include "semaug/common.hpp"

namespace semaug {

using nlohmann::json;

// --- base64 -----------------------------------------------------------------

static const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= bytes.size()) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
        i += 3;
    }
    const size_t rest = bytes.size() - i;
    if (rest == 1) {
        std::uint32_t v = bytes[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rest == 2) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        int v = value_of(c);
        if (v < 0) throw Error(ErrorCode::SchemaMismatch, "invalid base64");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

// --- client plumbing ----------------------------------------------------------

namespace {

struct Endpoint {
    std::string base_url;
    RemoteOptions options;

    json post_run(const json& body) const {
        httplib::Client client(base_url);
        client.set_connection_timeout(static_cast<time_t>(options.timeout_s), 0);
        client.set_read_timeout(static_cast<time_t>(options.timeout_s), 0);
        client.set_write_timeout(static_cast<time_t>(options.timeout_s), 0);
        std::string payload = body.dump();
        std::string last_error = "no attempt";
        for (int attempt = 0; attempt <= options.retries; ++attempt) {
            auto res = client.Post("/v1/run", payload, "application/json");
            if (!res) {
                last_error = "transport error " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            json reply = json::parse(res->body, nullptr, false);
            if (reply.is_discarded()) {
                last_error = "unparseable reply";
                continue;
            }
            if (reply.contains("error")) {
                throw Error(ErrorCode::BackendFailure,
                            reply["error"].get<std::string>());
            }
            return reply;
        }
        throw Error(ErrorCode::BackendFailure, base_url + ": " + last_error);
    }

    json get_capabilities() const {
        httplib::Client client(base_url);
        client.set_connection_timeout(static_cast<time_t>(options.timeout_s), 0);
        client.set_read_timeout(static_cast<time_t>(options.timeout_s), 0);
        for (int attempt = 0; attempt <= options.retries; ++attempt) {
            auto res = client.Get("/v1/capabilities");
            if (res && res->status == 200) {
                json reply = json::parse(res->body, nullptr, false);
                if (!reply.is_discarded()) return reply;
            }
        }
        throw Error(ErrorCode::BackendFailure, base_url + ": capabilities unavailable");
    }
};

std::string encode_image_field(const Image& image) {
    return base64_encode(encode_png(image));
}

Image decode_image_field(const std::string& b64) {
    return decode_image(base64_decode(b64));
}

class RemoteCaptioner final : public CaptionerBackend {
  public:
    RemoteCaptioner(std::string base_url, RemoteOptions options)
        : endpoint_{std::move(base_url), options} {}

    std::string id() const override { return "remote:" + endpoint_.base_url; }

    CaptionerCapability capability() const override {
        json caps = endpoint_.get_capabilities();
        CaptionerCapability out;
        for (const auto& m : caps.at("caption").at("modes")) {
            out.modes.push_back(sampling_mode_from_name(m.get<std::string>()));
        }
        out.max_count = caps.at("caption").at("max_count").get<int>();
        out.min_len = caps.at("caption").at("min_len").get<int>();
        out.max_len = caps.at("caption").at("max_len").get<int>();
        return out;
    }

    std::vector<std::string> generate(const Image& image, const SamplingConfig& config,
                                      std::uint64_t seed) override {
        config.validate();
        json body = {
            {"task", "caption"},
            {"payload",
             {{"image", encode_image_field(image)},
              {"mode", sampling_mode_name(config.mode)},
              {"count", config.count},
              {"nucleus_p", config.nucleus_p},
              {"beam_width", config.beam_width},
              {"min_len", config.min_len},
              {"max_len", config.max_len},
              {"seed", seed}}},
        };
        json reply = endpoint_.post_run(body);
        return reply.at("captions").get<std::vector<std::string>>();
    }

    int max_concurrency() const override { return 1; }

  private:
    Endpoint endpoint_;
};

class RemoteScorer final : public ScorerBackend {
  public:
    RemoteScorer(std::string base_url, RemoteOptions options)
        : endpoint_{std::move(base_url), options} {
        json caps = endpoint_.get_capabilities();
        dim_ = caps.at("score").at("dim").get<int>();
        range_ = {caps.at("score").at("range")[0].get<double>(),
                  caps.at("score").at("range")[1].get<double>()};
    }

    std::string id() const override { return "remote:" + endpoint_.base_url; }
    int embedding_dim() const override { return dim_; }
    std::pair<double, double> similarity_range() const override { return range_; }

    std::vector<double> embed_image(const Image& image) override {
        json body = {{"task", "score"},
                     {"payload", {{"embed", "image"}, {"image", encode_image_field(image)}}}};
        return endpoint_.post_run(body).at("embedding").get<std::vector<double>>();
    }

    std::vector<double> embed_text(const std::string& text) override {
        json body = {{"task", "score"}, {"payload", {{"embed", "text"}, {"text", text}}}};
        return endpoint_.post_run(body).at("embedding").get<std::vector<double>>();
    }

    int max_concurrency() const override { return 1; }

  private:
    Endpoint endpoint_;
    int dim_ = 0;
    std::pair<double, double> range_{0.0, 1.0};
};

class RemoteDiffusion final : public DiffusionBackend {
  public:
    RemoteDiffusion(std::string base_url, RemoteOptions options)
        : endpoint_{std::move(base_url), options} {}

    std::string id() const override { return "remote:" + endpoint_.base_url; }
    bool supports_img2img() const override { return true; }
    bool supports_text2img() const override { return true; }

    Image generate(const Image* source, const DiffusionParams& params) override {
        json payload = {
            {"mode", params.text2img ? "text2img" : "img2img"},
            {"prompt", params.prompt},
            {"label_span", {params.label_span.first, params.label_span.second}},
            {"caption_span", {params.caption_span.first, params.caption_span.second}},
            {"w_l", params.w_l},
            {"w_c", params.w_c},
            {"guidance", params.guidance},
            {"noise_rate", params.noise_rate},
            {"steps", params.steps},
            {"seed", params.seed},
            {"width", params.out_width},
            {"height", params.out_height},
        };
        if (!params.text2img) {
            if (source == nullptr) {
                throw Error(ErrorCode::MissingImage, "img2img requires a source image");
            }
            payload["image"] = encode_image_field(*source);
        }
        json body = {{"task", "generate"}, {"payload", payload}};
        json reply = endpoint_.post_run(body);
        Image out = decode_image_field(reply.at("image").get<std::string>());
        if (!params.text2img && source != nullptr &&
            (out.width != source->width || out.height != source->height)) {
            throw Error(ErrorCode::DimensionMismatch, "remote img2img changed dimensions");
        }
        return out;
    }

    int max_concurrency() const override { return 1; }

  private:
    Endpoint endpoint_;
};

}  // namespace

std::shared_ptr<CaptionerBackend> make_remote_captioner(const std::string& base_url,
                                                        const RemoteOptions& options) {
    return std::make_shared<RemoteCaptioner>(base_url, options);
}

std::shared_ptr<ScorerBackend> make_remote_scorer(const std::string& base_url,
                                                  const RemoteOptions& options) {
    return std::make_shared<RemoteScorer>(base_url, options);
}

std::shared_ptr<DiffusionBackend> make_remote_diffusion(const std::string& base_url,
                                                        const RemoteOptions& options) {
    return std::make_shared<RemoteDiffusion>(base_url, options);
}

// --- server ---------------------------------------------------------------------

struct BackendHttpServer::Impl {
    std::shared_ptr<CaptionerBackend> captioner;
    std::shared_ptr<ScorerBackend> scorer;
    std::shared_ptr<DiffusionBackend> diffusion;
    httplib::Server server;
    std::thread worker;

    json handle_run(const json& body) {
        const std::string task = body.at("task").get<std::string>();
        const json& payload = body.at("payload");
        if (task == "caption") {
            SamplingConfig config;
            config.mode = sampling_mode_from_name(payload.at("mode").get<std::string>());
            config.count = payload.at("count").get<int>();
            config.nucleus_p = payload.value("nucleus_p", 0.9);
            config.beam_width = payload.value("beam_width", 3);
            config.min_len = payload.value("min_len", 5);
            config.max_len = payload.value("max_len", 20);
            Image image = decode_image_field(payload.at("image").get<std::string>());
            auto captions =
                captioner->generate(image, config, payload.at("seed").get<std::uint64_t>());
            return json{{"captions", captions}};
        }
        if (task == "score") {
            const std::string embed = payload.at("embed").get<std::string>();
            std::vector<double> embedding;
            if (embed == "image") {
                embedding = scorer->embed_image(
                    decode_image_field(payload.at("image").get<std::string>()));
            } else if (embed == "text") {
                embedding = scorer->embed_text(payload.at("text").get<std::string>());
            } else {
                throw Error(ErrorCode::UnsupportedMode, "embed '" + embed + "'");
            }
            return json{{"embedding", embedding}, {"dim", embedding.size()}};
        }
        if (task == "generate") {
            DiffusionParams params;
            params.text2img = payload.at("mode").get<std::string>() == "text2img";
            params.prompt = payload.value("prompt", "");
            if (payload.contains("label_span")) {
                params.label_span = {payload["label_span"][0].get<size_t>(),
                                     payload["label_span"][1].get<size_t>()};
            }
            if (payload.contains("caption_span")) {
                params.caption_span = {payload["caption_span"][0].get<size_t>(),
                                       payload["caption_span"][1].get<size_t>()};
            }
            params.w_l = payload.value("w_l", 1.0);
            params.w_c = payload.value("w_c", 1.0);
            params.guidance = payload.value("guidance", 1.0);
            params.noise_rate = payload.value("noise_rate", 0.5);
            params.steps = payload.value("steps", 100);
            params.seed = payload.at("seed").get<std::uint64_t>();
            params.out_width = payload.value("width", 512);
            params.out_height = payload.value("height", 512);
            Image source;
            const Image* source_ptr = nullptr;
            if (payload.contains("image")) {
                source = decode_image_field(payload["image"].get<std::string>());
                source_ptr = &source;
            }
            Image out = diffusion->generate(source_ptr, params);
            return json{{"image", base64_encode(encode_png(out))}};
        }
        throw Error(ErrorCode::UnsupportedMode, "task '" + task + "'");
    }
};

BackendHttpServer::BackendHttpServer(std::shared_ptr<CaptionerBackend> captioner,
                                     std::shared_ptr<ScorerBackend> scorer,
                                     std::shared_ptr<DiffusionBackend> diffusion)
    : impl_(std::make_unique<Impl>()) {
    impl_->captioner = std::move(captioner);
    impl_->scorer = std::move(scorer);
    impl_->diffusion = std::move(diffusion);

    impl_->server.Get("/v1/capabilities", [this](const httplib::Request&, httplib::Response& res) {
        json caps;
        if (impl_->captioner) {
            auto c = impl_->captioner->capability();
            json modes = json::array();
            for (auto m : c.modes) modes.push_back(sampling_mode_name(m));
            caps["caption"] = {{"modes", modes},
                               {"max_count", c.max_count},
                               {"min_len", c.min_len},
                               {"max_len", c.max_len}};
        }
        if (impl_->scorer) {
            auto range = impl_->scorer->similarity_range();
            caps["score"] = {{"dim", impl_->scorer->embedding_dim()},
                             {"range", {range.first, range.second}}};
        }
        if (impl_->diffusion) {
            caps["generate"] = {{"img2img", impl_->diffusion->supports_img2img()},
                                {"text2img", impl_->diffusion->supports_text2img()}};
        }
        res.set_content(caps.dump(), "application/json");
    });

    impl_->server.Post("/v1/run", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            json body = json::parse(req.body);
            res.set_content(impl_->handle_run(body).dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 200;  // protocol-level errors ride in the body
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    });
}

BackendHttpServer::~BackendHttpServer() {
    stop();
}

int BackendHttpServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw Error(ErrorCode::IoError, "bind failed");
    } else if (!impl_->server.bind_to_port(host, port)) {
        throw Error(ErrorCode::IoError, "bind failed on port " + std::to_string(port));
    }
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void BackendHttpServer::stop() {
    if (impl_ && impl_->worker.joinable()) {
        impl_->server.stop();
        impl_->worker.join();
    }
}

}  // namespace semaug
