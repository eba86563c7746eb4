#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semaug/image.hpp"

namespace semaug {

// ---------------------------------------------------------------------------
// Sampling configuration for caption generation
// ---------------------------------------------------------------------------

enum class SamplingMode { Beam, Nucleus };

const char* sampling_mode_name(SamplingMode mode);
SamplingMode sampling_mode_from_name(const std::string& name);

struct SamplingConfig {
    SamplingMode mode = SamplingMode::Nucleus;
    int count = 10;
    double nucleus_p = 0.9;
    int beam_width = 3;
    int min_len = 5;   // whitespace tokens
    int max_len = 20;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Backend contracts
// ---------------------------------------------------------------------------

struct CaptionerCapability {
    std::vector<SamplingMode> modes;
    int max_count = 0;
    int min_len = 0;
    int max_len = 0;
};

class CaptionerBackend {
  public:
    virtual ~CaptionerBackend() = default;
    virtual std::string id() const = 0;
    virtual CaptionerCapability capability() const = 0;
    /// Deterministic for identical (image bytes, config, seed); contractual
    /// for fakes, best-effort for real backends.
    virtual std::vector<std::string> generate(const Image& image, const SamplingConfig& config,
                                              std::uint64_t seed) = 0;
    /// 0 means safe for unlimited concurrent calls.
    virtual int max_concurrency() const { return 0; }
};

class ScorerBackend {
  public:
    virtual ~ScorerBackend() = default;
    virtual std::string id() const = 0;
    virtual int embedding_dim() const = 0;
    /// Declared similarity range [lo, hi] within [-1, 1].
    virtual std::pair<double, double> similarity_range() const = 0;
    /// Unit-norm embeddings; similarity is their dot product.
    virtual std::vector<double> embed_image(const Image& image) = 0;
    virtual std::vector<double> embed_text(const std::string& text) = 0;
    virtual int max_concurrency() const { return 0; }
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

struct DiffusionParams {
    std::string prompt;  // rendered text
    std::pair<size_t, size_t> label_span{0, 0};
    std::pair<size_t, size_t> caption_span{0, 0};
    double w_l = 1.0;
    double w_c = 1.0;
    double guidance = 1.0;
    double noise_rate = 0.5;
    int steps = 100;
    std::uint64_t seed = 0;
    bool text2img = false;
    int out_width = 512;   // text2img only; img2img preserves source dims
    int out_height = 512;
};

class DiffusionBackend {
  public:
    virtual ~DiffusionBackend() = default;
    virtual std::string id() const = 0;
    virtual bool supports_img2img() const = 0;
    virtual bool supports_text2img() const = 0;
    /// `source` must be non-null unless params.text2img.
    virtual Image generate(const Image* source, const DiffusionParams& params) = 0;
    virtual int max_concurrency() const { return 0; }
};

// ---------------------------------------------------------------------------
// Fake feature space (test oracle substrate)
// ---------------------------------------------------------------------------

/// 64-component nonnegative unit vector shared by the fake captioner hint,
/// the fake scorer, and every desk-scale similarity computation.
struct FakeFeature {
    static constexpr int kDim = 64;
    std::vector<double> values;

    void validate() const;  // unit norm within 1e-9, all components >= 0
};

/// Mean-pool the Rec.601 luma onto an 8x8 grid, flatten, L2-normalize.
/// An all-zero pool (black image) falls back to the uniform unit vector.
FakeFeature fake_image_feature(const Image& image);

/// Case-fold, hash byte-level 3-grams into 64 bins, count, L2-normalize.
/// Strings shorter than 3 bytes hash as a single whole-string gram.
/// Throws EmptyText.
FakeFeature fake_text_feature(const std::string& text);

// ---------------------------------------------------------------------------
// Fake backends
// ---------------------------------------------------------------------------

class FakeCaptioner final : public CaptionerBackend {
  public:
    std::string id() const override { return "fake"; }
    CaptionerCapability capability() const override;
    std::vector<std::string> generate(const Image& image, const SamplingConfig& config,
                                      std::uint64_t seed) override;
};

class FakeScorer final : public ScorerBackend {
  public:
    std::string id() const override { return "fake"; }
    int embedding_dim() const override { return FakeFeature::kDim; }
    std::pair<double, double> similarity_range() const override { return {0.0, 1.0}; }
    std::vector<double> embed_image(const Image& image) override;
    std::vector<double> embed_text(const std::string& text) override;
};

/// img2img: out = round((1-n)*x + n*N) with N a noise image whose byte
/// stream is the little-endian expansion of successive mt19937_64 draws
/// seeded by mix_seed(seed, fnv1a64(prompt)). text2img: out = N alone.
class FakeDiffusion final : public DiffusionBackend {
  public:
    std::string id() const override { return "fake"; }
    bool supports_img2img() const override { return true; }
    bool supports_text2img() const override { return true; }
    Image generate(const Image* source, const DiffusionParams& params) override;
};

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

struct RemoteOptions {
    double timeout_s = 120.0;
    int retries = 2;
};

/// Process-level mapping from backend_id strings to live backends. The
/// pipeline never names concrete model families; config strings do.
/// Built-ins: "fake". Ids of the form "remote:<base-url>" construct
/// JSON-over-HTTP clients (see docs/protocol.md).
class BackendRegistry {
  public:
    BackendRegistry();

    void register_captioner(const std::string& id, std::shared_ptr<CaptionerBackend> backend);
    void register_scorer(const std::string& id, std::shared_ptr<ScorerBackend> backend);
    void register_diffusion(const std::string& id, std::shared_ptr<DiffusionBackend> backend);

    std::shared_ptr<CaptionerBackend> captioner(const std::string& id) const;
    std::shared_ptr<ScorerBackend> scorer(const std::string& id) const;
    std::shared_ptr<DiffusionBackend> diffusion(const std::string& id) const;

    RemoteOptions remote_options;

  private:
    std::map<std::string, std::shared_ptr<CaptionerBackend>> captioners_;
    std::map<std::string, std::shared_ptr<ScorerBackend>> scorers_;
    std::map<std::string, std::shared_ptr<DiffusionBackend>> diffusions_;
};

}  // namespace semaug
