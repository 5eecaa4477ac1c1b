#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dictionary.hpp"
#include "ingest.hpp"
#include "json_io.hpp"
#include "registry.hpp"

namespace rgif {

enum class Sentiment { positive, negative };

inline constexpr std::string_view sentiment_name(Sentiment s) {
    return s == Sentiment::positive ? "positive" : "negative";
}

inline Sentiment sentiment_from_name(std::string_view s) {
    if (s == "positive") return Sentiment::positive;
    if (s == "negative") return Sentiment::negative;
    throw FormatError("unknown sentiment: " + std::string(s));
}

struct LabeledSample {
    std::string root_id;
    std::optional<std::string> root_text;
    std::string reaction;
    std::optional<Sentiment> sentiment;
    EmotionSet emotions;

    bool operator==(const LabeledSample&) const = default;
};

struct LabelReport {
    std::size_t accepted = 0;
    std::size_t labeled = 0;
    std::size_t discarded_not_found = 0;
    std::map<std::string, std::size_t> rejected;  // reason code -> count

    std::size_t rejected_total() const {
        std::size_t n = 0;
        for (auto& [_, c] : rejected) n += c;
        return n;
    }

    bool operator==(const LabelReport&) const = default;
};

class LabelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Picks the most prominent placement (smallest position); equal positions go
/// to the lexicographically smaller category name.
inline std::string resolve_category(const std::vector<Placement>& placements) {
    if (placements.empty()) {
        throw LabelError("resolve_category: no placements");
    }
    auto best = std::min_element(placements.begin(), placements.end(), [](const Placement& a, const Placement& b) {
        return a.position != b.position ? a.position < b.position : a.category < b.category;
    });
    return best->category;
}

/// Empty result means the reply GIF is not in the dictionary.
inline std::optional<LabeledSample> label_pair(const GifDictionary& dict, const ConversationPair& pair) {
    auto placements = dict.lookup(pair.reply_gif);
    if (placements.empty()) return std::nullopt;
    LabeledSample s;
    s.root_id = pair.root_id;
    s.root_text = pair.root_text;
    s.reaction = resolve_category(placements);
    return s;
}

struct LabeledCorpus {
    std::vector<LabeledSample> samples;
    LabelReport report;
};

inline LabeledCorpus label_corpus(const GifDictionary& dict, const std::vector<ConversationPair>& pairs,
                                  const FilterRules& rules) {
    LabeledCorpus out;
    for (auto reason : kAllReasons) out.report.rejected[std::string(reason_code(reason))] = 0;
    for (const auto& pair : pairs) {
        auto decision = filter_pair(pair, rules);
        if (!decision.accepted()) {
            ++out.report.rejected[std::string(reason_code(*decision.reject))];
            continue;
        }
        ++out.report.accepted;
        if (auto sample = label_pair(dict, pair)) {
            ++out.report.labeled;
            out.samples.push_back(std::move(*sample));
        } else {
            ++out.report.discarded_not_found;
        }
    }
    return out;
}

struct CategoryShare {
    std::string category;
    std::size_t count = 0;
    double proportion = 0.0;
};

struct Distribution {
    std::vector<CategoryShare> shares;  // by count descending, then name
    std::size_t total = 0;

    double top_k_share(std::size_t k) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < std::min(k, shares.size()); ++i) sum += shares[i].proportion;
        return sum;
    }

    double proportion_of(std::string_view category) const {
        for (const auto& s : shares) {
            if (s.category == category) return s.proportion;
        }
        return 0.0;
    }
};

inline Distribution distribution(const std::vector<LabeledSample>& samples) {
    if (samples.empty()) {
        throw LabelError("distribution of an empty dataset");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.reaction];
    Distribution d;
    d.total = samples.size();
    for (auto& [cat, n] : counts) {
        d.shares.push_back({cat, n, static_cast<double>(n) / static_cast<double>(d.total)});
    }
    std::stable_sort(d.shares.begin(), d.shares.end(),
                     [](const CategoryShare& a, const CategoryShare& b) { return a.count > b.count; });
    return d;
}

enum class ExportMode { private_with_text, public_ids_only };

inline ordered_json sample_to_json(const LabeledSample& s, ExportMode mode = ExportMode::private_with_text) {
    ordered_json j;
    j["root_id"] = s.root_id;
    if (mode == ExportMode::private_with_text && s.root_text) j["root_text"] = *s.root_text;
    j["reaction"] = s.reaction;
    j["sentiment"] = s.sentiment ? ordered_json(std::string(sentiment_name(*s.sentiment))) : ordered_json(nullptr);
    j["emotions"] = emotion_names(s.emotions);
    return j;
}

inline LabeledSample sample_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("sample is not a JSON object");
    try {
        LabeledSample s;
        s.root_id = j.at("root_id").get<std::string>();
        if (j.contains("root_text") && !j["root_text"].is_null()) s.root_text = j["root_text"].get<std::string>();
        s.reaction = j.at("reaction").get<std::string>();
        if (j.contains("sentiment") && !j["sentiment"].is_null()) {
            s.sentiment = sentiment_from_name(j["sentiment"].get<std::string>());
        }
        if (j.contains("emotions")) s.emotions = emotions_from_names(j["emotions"].get<std::vector<std::string>>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(e.what());
    } catch (const RegistryError& e) {
        throw FormatError(e.what());
    }
}

inline std::string serialize_samples(const std::vector<LabeledSample>& samples,
                                     ExportMode mode = ExportMode::private_with_text) {
    std::string out;
    for (const auto& s : samples) {
        out += sample_to_json(s, mode).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<LabeledSample> parse_samples(const std::string& text) {
    std::vector<LabeledSample> out;
    for (auto& [n, line] : numbered_lines(text)) {
        if (is_blank(line)) continue;
        try {
            out.push_back(sample_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("line " + std::to_string(n) + ": " + e.what());
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<LabeledSample> load_samples(const std::string& path) { return parse_samples(read_file(path)); }

inline ordered_json report_to_json(const LabelReport& r) {
    ordered_json j;
    j["accepted"] = r.accepted;
    j["labeled"] = r.labeled;
    j["discarded_not_found"] = r.discarded_not_found;
    ordered_json rej;
    for (auto reason : kAllReasons) {
        auto code = std::string(reason_code(reason));
        auto it = r.rejected.find(code);
        rej[code] = it == r.rejected.end() ? 0 : it->second;
    }
    j["rejected_by_filter"] = rej;
    return j;
}

}  // namespace rgif
