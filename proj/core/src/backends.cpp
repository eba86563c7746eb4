#include "semaug/backends.hpp"

#include <algorithm>
#include <cmath>

#include "semaug/common.hpp"
#include "semaug/remote.hpp"

namespace semaug {

const char* sampling_mode_name(SamplingMode mode) {
    return mode == SamplingMode::Beam ? "beam" : "nucleus";
}

SamplingMode sampling_mode_from_name(const std::string& name) {
    if (name == "beam") return SamplingMode::Beam;
    if (name == "nucleus") return SamplingMode::Nucleus;
    throw Error(ErrorCode::UnsupportedMode, "sampling mode '" + name + "'");
}

void SamplingConfig::validate() const {
    if (count < 1) throw Error(ErrorCode::OutOfRange, "caption count must be >= 1");
    if (!(nucleus_p > 0.0 && nucleus_p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "nucleus_p must be in (0, 1]");
    }
    if (beam_width < 1) throw Error(ErrorCode::OutOfRange, "beam_width must be >= 1");
    if (min_len < 1 || min_len > max_len) {
        throw Error(ErrorCode::OutOfRange, "need 1 <= min_len <= max_len");
    }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "embedding dims differ");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// --- fake feature space ------------------------------------------------------

void FakeFeature::validate() const {
    if (values.size() != kDim) {
        throw Error(ErrorCode::DimensionMismatch, "fake feature dim");
    }
    double norm2 = 0.0;
    for (double v : values) {
        if (v < 0.0) throw Error(ErrorCode::OutOfRange, "negative fake feature component");
        norm2 += v * v;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
        throw Error(ErrorCode::OutOfRange, "fake feature not unit norm");
    }
}

static FakeFeature normalize_or_uniform(std::vector<double> values) {
    double norm2 = 0.0;
    for (double v : values) norm2 += v * v;
    FakeFeature feature;
    if (norm2 <= 0.0) {
        feature.values.assign(FakeFeature::kDim, 1.0 / 8.0);  // 1/sqrt(64)
        return feature;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : values) v *= inv;
    feature.values = std::move(values);
    return feature;
}

FakeFeature fake_image_feature(const Image& image) {
    if (image.empty()) {
        throw Error(ErrorCode::DegenerateImage, "empty image");
    }
    std::vector<double> sums(FakeFeature::kDim, 0.0);
    std::vector<std::uint64_t> counts(FakeFeature::kDim, 0);
    for (int y = 0; y < image.height; ++y) {
        const int row = static_cast<int>(static_cast<std::int64_t>(y) * 8 / image.height);
        for (int x = 0; x < image.width; ++x) {
            const int col = static_cast<int>(static_cast<std::int64_t>(x) * 8 / image.width);
            const int bin = row * 8 + col;
            sums[bin] += luma(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2));
            counts[bin] += 1;
        }
    }
    for (int i = 0; i < FakeFeature::kDim; ++i) {
        sums[i] = counts[i] ? sums[i] / static_cast<double>(counts[i]) : 0.0;
    }
    return normalize_or_uniform(std::move(sums));
}

FakeFeature fake_text_feature(const std::string& text) {
    if (text.empty()) {
        throw Error(ErrorCode::EmptyText, "fake_text_feature");
    }
    const std::string folded = to_lower_ascii(text);
    std::vector<double> counts(FakeFeature::kDim, 0.0);
    if (folded.size() < 3) {
        counts[fnv1a64(folded) % FakeFeature::kDim] += 1.0;
    } else {
        for (size_t i = 0; i + 3 <= folded.size(); ++i) {
            counts[fnv1a64(std::string_view(folded).substr(i, 3)) % FakeFeature::kDim] += 1.0;
        }
    }
    return normalize_or_uniform(std::move(counts));
}

// --- fake captioner ----------------------------------------------------------

CaptionerCapability FakeCaptioner::capability() const {
    return {{SamplingMode::Beam, SamplingMode::Nucleus}, 1000, 5, 20};
}

static std::string hex16(std::uint64_t v) {
    static const char* kHex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = kHex[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::vector<std::string> FakeCaptioner::generate(const Image& image, const SamplingConfig& config,
                                                 std::uint64_t seed) {
    config.validate();
    if (config.max_len < 7) {
        throw Error(ErrorCode::UnsupportedMode, "fake captions are at least 7 tokens");
    }

    // Content hint: digest of the quantized pooled feature, so visually
    // similar images caption alike.
    FakeFeature feature = fake_image_feature(image);
    std::string quantized(FakeFeature::kDim, '\0');
    for (int i = 0; i < FakeFeature::kDim; ++i) {
        quantized[i] = static_cast<char>(std::lround(feature.values[i] * 255.0));
    }
    const std::string hint = hex16(fnv1a64(quantized)).substr(8);

    const std::uint64_t mode_seed =
        mix_seed(seed, config.mode == SamplingMode::Beam ? 0xBEA3ull : 0x9C1Eull);
    std::vector<std::string> captions;
    captions.reserve(config.count);
    for (int i = 0; i < config.count; ++i) {
        // splitmix64 over distinct inputs is collision-free, so tags (and
        // therefore captions) are pairwise distinct.
        const std::uint64_t tag =
            splitmix64(mode_seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i));
        std::vector<std::string> tokens = {"a",    "synthetic", "photo",        "of",
                                           hint,   "variant",   hex16(tag).substr(8)};
        while (static_cast<int>(tokens.size()) < config.min_len) {
            tokens.push_back("detail" + std::to_string(tokens.size()));
        }
        captions.push_back(join(tokens, " "));
    }
    return captions;
}

// --- fake scorer ---------------------------------------------------------------

std::vector<double> FakeScorer::embed_image(const Image& image) {
    return fake_image_feature(image).values;
}

std::vector<double> FakeScorer::embed_text(const std::string& text) {
    return fake_text_feature(text).values;
}

// --- fake diffusion ------------------------------------------------------------

Image FakeDiffusion::generate(const Image* source, const DiffusionParams& params) {
    if (params.noise_rate < 0.0 || params.noise_rate > 1.0) {
        throw Error(ErrorCode::BadNoiseRate, "noise_rate must be in [0, 1]");
    }
    Rng rng(mix_seed(params.seed, fnv1a64(params.prompt)));

    if (params.text2img) {
        if (params.out_width < 1 || params.out_height < 1) {
            throw Error(ErrorCode::DegenerateImage, "text2img output size");
        }
        Image out(params.out_width, params.out_height);
        for (auto& px : out.pixels) px = rng.next_byte();
        return out;
    }

    if (source == nullptr || source->empty()) {
        throw Error(ErrorCode::MissingImage, "img2img requires a source image");
    }
    const double n = params.noise_rate;
    Image out(source->width, source->height);
    for (size_t i = 0; i < out.pixels.size(); ++i) {
        const double noise = static_cast<double>(rng.next_byte());
        const double blended = (1.0 - n) * static_cast<double>(source->pixels[i]) + n * noise;
        out.pixels[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(blended), 0, 255));
    }
    return out;
}

// --- registry ------------------------------------------------------------------

BackendRegistry::BackendRegistry() {
    register_captioner("fake", std::make_shared<FakeCaptioner>());
    register_scorer("fake", std::make_shared<FakeScorer>());
    register_diffusion("fake", std::make_shared<FakeDiffusion>());
}

void BackendRegistry::register_captioner(const std::string& id,
                                         std::shared_ptr<CaptionerBackend> backend) {
    captioners_[id] = std::move(backend);
}

void BackendRegistry::register_scorer(const std::string& id,
                                      std::shared_ptr<ScorerBackend> backend) {
    scorers_[id] = std::move(backend);
}

void BackendRegistry::register_diffusion(const std::string& id,
                                         std::shared_ptr<DiffusionBackend> backend) {
    diffusions_[id] = std::move(backend);
}

static bool is_remote_id(const std::string& id) {
    return id.rfind("remote:", 0) == 0;
}

static std::string remote_url(const std::string& id) {
    return id.substr(7);
}

std::shared_ptr<CaptionerBackend> BackendRegistry::captioner(const std::string& id) const {
    auto it = captioners_.find(id);
    if (it != captioners_.end()) return it->second;
    if (is_remote_id(id)) return make_remote_captioner(remote_url(id), remote_options);
    throw Error(ErrorCode::UnknownBackend, "captioner '" + id + "'");
}

std::shared_ptr<ScorerBackend> BackendRegistry::scorer(const std::string& id) const {
    auto it = scorers_.find(id);
    if (it != scorers_.end()) return it->second;
    if (is_remote_id(id)) return make_remote_scorer(remote_url(id), remote_options);
    throw Error(ErrorCode::UnknownBackend, "scorer '" + id + "'");
}

std::shared_ptr<DiffusionBackend> BackendRegistry::diffusion(const std::string& id) const {
    auto it = diffusions_.find(id);
    if (it != diffusions_.end()) return it->second;
    if (is_remote_id(id)) return make_remote_diffusion(remote_url(id), remote_options);
    throw Error(ErrorCode::UnknownBackend, "diffusion '" + id + "'");
}

}  // namespace semaug
