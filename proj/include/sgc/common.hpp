#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgc {

enum class ErrorKind {
    invalid_argument,
    empty_region,
    insufficient_points,
    no_consensus,
    degenerate,
    insufficient_corpus,
    degenerate_variance,
    non_finite,
    schema,
    io,
    generation,
    unevaluable,
};

std::string_view to_string(ErrorKind kind);

/// Library error carrying a machine-readable kind plus optional file/field context.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string file = {}, std::string field = {})
        : std::runtime_error(message), kind_(kind), file_(std::move(file)), field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& file() const noexcept { return file_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string file_;
    std::string field_;
};

// splitmix64 finalizer, used to derive independent per-task seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) noexcept {
    return mix_seed(seed ^ mix_seed(value));
}

// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace sgc
