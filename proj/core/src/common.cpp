#include "semaug/common.hpp"

#include <openssl/sha.h>

#include <array>
#include <cmath>
#include <cstring>
#include <sstream>

namespace semaug {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingRoot: return "MissingRoot";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UnreadableImage: return "UnreadableImage";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::EmptyLabel: return "EmptyLabel";
        case ErrorCode::EmptyPrompt: return "EmptyPrompt";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::EmptySplit: return "EmptySplit";
        case ErrorCode::MissingCaption: return "MissingCaption";
        case ErrorCode::MissingImage: return "MissingImage";
        case ErrorCode::MissingOriginal: return "MissingOriginal";
        case ErrorCode::BadNoiseRate: return "BadNoiseRate";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SpanMismatch: return "SpanMismatch";
        case ErrorCode::UnsupportedMode: return "UnsupportedMode";
        case ErrorCode::BackendFailure: return "BackendFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateImage: return "DegenerateImage";
        case ErrorCode::IncompleteGroup: return "IncompleteGroup";
        case ErrorCode::NoCommonRecords: return "NoCommonRecords";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::UnknownBackend: return "UnknownBackend";
        case ErrorCode::ConfigParse: return "ConfigParse";
    }
    return "UnknownError";
}

static std::string to_hex(const unsigned char* digest, size_t n) {
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (size_t i = 0; i < n; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_hex(const void* data, size_t size) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(static_cast<const unsigned char*>(data), size, digest);
    return to_hex(digest, SHA256_DIGEST_LENGTH);
}

std::string sha256_hex(std::string_view text) {
    return sha256_hex(text.data(), text.size());
}

std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
    return sha256_hex(bytes.data(), bytes.size());
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ b);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id) {
    return mix_seed(global_seed, fnv1a64(record_id));
}

Rng::Rng(std::uint64_t seed) : gen_(seed) {}

std::uint64_t Rng::next_u64() {
    return gen_();
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; every n used here is tiny.
    return next_u64() % n;
}

std::uint8_t Rng::next_byte() {
    if (byte_count_ == 0) {
        byte_buf_ = next_u64();
        byte_count_ = 8;
    }
    std::uint8_t b = static_cast<std::uint8_t>(byte_buf_ & 0xFF);
    byte_buf_ >>= 8;
    --byte_count_;
    return b;
}

double Rng::next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::next_gamma(double shape) {
    if (shape < 1.0) {
        double u = next_double();
        while (u <= 0.0) u = next_double();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = next_gaussian();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::next_beta(double a, double b) {
    double ga = next_gamma(a);
    double gb = next_gamma(b);
    double sum = ga + gb;
    if (sum <= 0.0) return 0.5;
    return ga / sum;
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string short_hash(std::string_view a, std::string_view b) {
    std::string key;
    key.reserve(a.size() + b.size() + 1);
    key += a;
    key += '\x1f';  // unit separator keeps ("ab","c") != ("a","bc")
    key += b;
    return sha256_hex(key).substr(0, 16);
}

}  // namespace semaug
