#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semaug {

enum class ErrorCode {
    MissingRoot,
    EmptyDataset,
    UnreadableImage,
    SchemaMismatch,
    IoError,
    EmptyText,
    EmptyLabel,
    EmptyPrompt,
    EmptySet,
    EmptySplit,
    MissingCaption,
    MissingImage,
    MissingOriginal,
    BadNoiseRate,
    OutOfRange,
    SpanMismatch,
    UnsupportedMode,
    BackendFailure,
    DimensionMismatch,
    DegenerateImage,
    IncompleteGroup,
    NoCommonRecords,
    SingleClass,
    UnknownBackend,
    ConfigParse,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-checkable error code plus context.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

// --- hashing ---------------------------------------------------------------

std::string sha256_hex(const void* data, size_t size);
std::string sha256_hex(std::string_view text);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

std::uint64_t fnv1a64(std::string_view text);

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Combine two 64-bit values into one well-mixed seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Per-record seed: stable across machines and worker schedules.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id);

// --- deterministic RNG -----------------------------------------------------

/// Seeded generator with fully pinned derived draws. std::mt19937_64 output
/// is specified by the standard; the helper distributions below avoid
/// std::*_distribution, whose streams are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1): top 53 bits of one draw.
    double next_double();
    /// Uniform in [lo, hi].
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t next_below(std::uint64_t n);
    /// One byte, little-endian consumption of buffered draws.
    std::uint8_t next_byte();
    /// Standard normal via Box-Muller.
    double next_gaussian();
    /// Gamma(shape) with unit scale, Marsaglia-Tsang.
    double next_gamma(double shape);
    /// Beta(a, b) via two gamma draws.
    double next_beta(double a, double b);

  private:
    std::mt19937_64 gen_;
    std::uint64_t byte_buf_ = 0;
    int byte_count_ = 0;
};

// --- small text helpers ----------------------------------------------------

std::string to_lower_ascii(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// 16-hex-char digest used for record identities.
std::string short_hash(std::string_view a, std::string_view b);

}  // namespace semaug
