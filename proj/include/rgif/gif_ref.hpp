#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

namespace rgif {

/// Digests are SHA-256 of the GIF file bytes unless configured otherwise.
inline constexpr std::size_t kDefaultDigestBytes = 32;

using Digest = std::vector<std::uint8_t>;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

inline Digest from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) {
        throw FormatError("hex string has odd length");
    }
    Digest out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw FormatError("invalid hex character");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

inline Digest sha256(std::span<const std::uint8_t> bytes) {
    Digest out(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    out.resize(len);
    return out;
}

inline Digest sha256(std::string_view text) {
    return sha256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Digest sha256_file(const std::string& path) {
    return sha256(read_file(path));
}

/// Reference to a posted or catalogued GIF. At least one identity key is set.
struct GifRef {
    std::optional<std::string> asset_id;
    std::optional<Digest> content_digest;
    std::optional<std::string> media_url;

    bool operator==(const GifRef&) const = default;
};

/// Two refs denote the same GIF when both carry an asset id and the ids match;
/// otherwise both must carry a digest and the digests must match.
inline bool same_gif(const GifRef& a, const GifRef& b) {
    if (a.asset_id && b.asset_id) {
        return *a.asset_id == *b.asset_id;
    }
    return a.content_digest && b.content_digest && *a.content_digest == *b.content_digest;
}

inline void validate(const GifRef& gif, std::size_t digest_bytes = kDefaultDigestBytes) {
    if (!gif.asset_id && !gif.content_digest) {
        throw FormatError("gif reference needs asset_id or content_digest");
    }
    if (gif.asset_id && gif.asset_id->empty()) {
        throw FormatError("gif asset_id is empty");
    }
    if (gif.content_digest && gif.content_digest->size() != digest_bytes) {
        throw FormatError("content_digest must be " + std::to_string(digest_bytes) +
                          " bytes, got " + std::to_string(gif.content_digest->size()));
    }
}

}  // namespace rgif
