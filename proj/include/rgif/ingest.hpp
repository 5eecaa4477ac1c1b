#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gif_ref.hpp"
#include "json_io.hpp"

namespace rgif {

/// One 2-turn interaction: a text-only root post answered by a GIF reply.
struct ConversationPair {
    std::string root_id;
    std::string root_text;
    std::optional<std::string> root_lang;
    bool root_has_media = false;
    bool root_has_links = false;
    std::string reply_id;
    GifRef reply_gif;
    bool reply_extra_content = false;

    bool operator==(const ConversationPair&) const = default;
};

struct FilterRules {
    std::optional<std::string> require_language = "en";
    bool require_text_only_root = true;
    bool require_gif_only_reply = true;
};

enum class RejectReason { language, root_media, root_links, reply_extra, empty_text };

inline constexpr std::string_view reason_code(RejectReason r) {
    switch (r) {
        case RejectReason::language: return "language";
        case RejectReason::root_media: return "root-media";
        case RejectReason::root_links: return "root-links";
        case RejectReason::reply_extra: return "reply-extra";
        case RejectReason::empty_text: return "empty-text";
    }
    return "unknown";
}

inline constexpr RejectReason kAllReasons[] = {RejectReason::language, RejectReason::root_media,
                                               RejectReason::root_links, RejectReason::reply_extra,
                                               RejectReason::empty_text};

struct FilterDecision {
    std::optional<RejectReason> reject;  // empty means accepted

    bool accepted() const { return !reject.has_value(); }
    bool operator==(const FilterDecision&) const = default;

    static FilterDecision accept() { return {}; }
    static FilterDecision rejected(RejectReason r) { return {r}; }
};

namespace detail {

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Primary subtag of a BCP-47 tag: "en-GB" -> "en".
inline std::string primary_subtag(std::string_view tag) {
    auto cut = tag.find_first_of("-_");
    return ascii_lower(tag.substr(0, cut));
}

inline bool blank_after_trim(std::string_view s) {
    return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

}  // namespace detail

/// Checks rules in the fixed order language, root-media, root-links,
/// reply-extra, and reports the first one that fails. A root whose text is
/// blank after trimming is rejected last as empty-text.
inline FilterDecision filter_pair(const ConversationPair& pair, const FilterRules& rules) {
    if (rules.require_language) {
        if (!pair.root_lang ||
            detail::primary_subtag(*pair.root_lang) != detail::primary_subtag(*rules.require_language)) {
            return FilterDecision::rejected(RejectReason::language);
        }
    }
    if (rules.require_text_only_root) {
        if (pair.root_has_media) return FilterDecision::rejected(RejectReason::root_media);
        if (pair.root_has_links) return FilterDecision::rejected(RejectReason::root_links);
    }
    if (rules.require_gif_only_reply && pair.reply_extra_content) {
        return FilterDecision::rejected(RejectReason::reply_extra);
    }
    if (detail::blank_after_trim(pair.root_text)) {
        return FilterDecision::rejected(RejectReason::empty_text);
    }
    return FilterDecision::accept();
}

inline ordered_json pair_to_json(const ConversationPair& p) {
    ordered_json j;
    j["root_id"] = p.root_id;
    j["root_text"] = p.root_text;
    j["root_lang"] = p.root_lang ? ordered_json(*p.root_lang) : ordered_json(nullptr);
    j["root_has_media"] = p.root_has_media;
    j["root_has_links"] = p.root_has_links;
    j["reply_id"] = p.reply_id;
    j["reply_gif"] = gif_to_json(p.reply_gif);
    j["reply_extra_content"] = p.reply_extra_content;
    return j;
}

/// Canonical one-line form used by pair record files.
inline std::string serialize_pair(const ConversationPair& p) { return pair_to_json(p).dump(); }

inline ConversationPair pair_from_json(const nlohmann::json& j, std::size_t digest_bytes = kDefaultDigestBytes) {
    if (!j.is_object()) {
        throw FormatError("record is not a JSON object");
    }
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
        return j[key];
    };
    auto req_string = [&](const char* key) {
        const auto& v = require(key);
        if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
        return v.get<std::string>();
    };
    auto req_bool = [&](const char* key) {
        const auto& v = require(key);
        if (!v.is_boolean()) throw FormatError(std::string("field '") + key + "' must be a boolean");
        return v.get<bool>();
    };

    ConversationPair p;
    p.root_id = req_string("root_id");
    p.root_text = req_string("root_text");
    if (j.contains("root_lang") && !j["root_lang"].is_null()) {
        if (!j["root_lang"].is_string()) throw FormatError("field 'root_lang' must be a string");
        p.root_lang = j["root_lang"].get<std::string>();
    }
    p.root_has_media = req_bool("root_has_media");
    p.root_has_links = req_bool("root_has_links");
    p.reply_id = req_string("reply_id");
    p.reply_gif = gif_from_json(require("reply_gif"), digest_bytes);
    p.reply_extra_content = req_bool("reply_extra_content");

    if (p.root_id.empty() || p.reply_id.empty()) {
        throw FormatError("root_id and reply_id must be non-empty");
    }
    if (p.root_id == p.reply_id) {
        throw FormatError("root_id and reply_id must differ");
    }
    return p;
}

struct LineError {
    std::size_t line = 0;
    std::string message;
};

struct LoadResult {
    std::vector<ConversationPair> pairs;
    std::vector<LineError> errors;
};

/// Parses a pair record file (one JSON object per line). Blank lines are
/// skipped; malformed lines are collected with their line numbers.
inline LoadResult parse_pairs(const std::string& text, std::size_t digest_bytes = kDefaultDigestBytes) {
    LoadResult result;
    for (auto& [n, line] : numbered_lines(text)) {
        if (is_blank(line)) continue;
        try {
            result.pairs.push_back(pair_from_json(nlohmann::json::parse(line), digest_bytes));
        } catch (const nlohmann::json::exception& e) {
            result.errors.push_back({n, e.what()});
        } catch (const FormatError& e) {
            result.errors.push_back({n, e.what()});
        }
    }
    return result;
}

inline LoadResult load_pairs(const std::string& path, std::size_t digest_bytes = kDefaultDigestBytes) {
    return parse_pairs(read_file(path), digest_bytes);
}

inline std::string serialize_pairs(const std::vector<ConversationPair>& pairs) {
    std::string out;
    for (const auto& p : pairs) {
        out += serialize_pair(p);
        out += '\n';
    }
    return out;
}

inline FilterRules rules_from_json(const nlohmann::json& j) {
    FilterRules rules;
    if (!j.is_object()) throw FormatError("rules file must be a JSON object");
    if (j.contains("require_language")) {
        const auto& v = j["require_language"];
        if (v.is_null()) {
            rules.require_language.reset();
        } else if (v.is_string()) {
            rules.require_language = v.get<std::string>();
        } else {
            throw FormatError("require_language must be a string or null");
        }
    }
    auto opt_bool = [&](const char* key, bool& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_boolean()) throw FormatError(std::string(key) + " must be a boolean");
        field = j[key].get<bool>();
    };
    opt_bool("require_text_only_root", rules.require_text_only_root);
    opt_bool("require_gif_only_reply", rules.require_gif_only_reply);
    return rules;
}

inline ordered_json rules_to_json(const FilterRules& rules) {
    ordered_json j;
    j["require_language"] = rules.require_language ? ordered_json(*rules.require_language) : ordered_json(nullptr);
    j["require_text_only_root"] = rules.require_text_only_root;
    j["require_gif_only_reply"] = rules.require_gif_only_reply;
    return j;
}

}  // namespace rgif
