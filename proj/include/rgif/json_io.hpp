#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gif_ref.hpp"

namespace rgif {

using ordered_json = nlohmann::ordered_json;

inline nlohmann::json read_json_file(const std::string& path) {
    auto text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Splits into lines, keeping the 1-based line number of each.
inline std::vector<std::pair<std::size_t, std::string>> numbered_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.emplace_back(n, std::move(line));
    }
    return out;
}

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

inline ordered_json gif_to_json(const GifRef& gif) {
    ordered_json j = ordered_json::object();
    if (gif.asset_id) j["asset_id"] = *gif.asset_id;
    if (gif.content_digest) j["content_digest"] = to_hex(*gif.content_digest);
    if (gif.media_url) j["media_url"] = *gif.media_url;
    return j;
}

inline GifRef gif_from_json(const nlohmann::json& j, std::size_t digest_bytes = kDefaultDigestBytes) {
    if (!j.is_object()) {
        throw FormatError("gif reference must be an object");
    }
    GifRef gif;
    auto opt_string = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        if (!j[key].is_string()) throw FormatError(std::string(key) + " must be a string");
        return j[key].get<std::string>();
    };
    gif.asset_id = opt_string("asset_id");
    if (auto hex = opt_string("content_digest")) {
        gif.content_digest = from_hex(*hex);
    }
    gif.media_url = opt_string("media_url");
    validate(gif, digest_bytes);
    return gif;
}

}  // namespace rgif
