#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "affinity.hpp"
#include "json_io.hpp"
#include "labeler.hpp"
#include "registry.hpp"

namespace rgif {

class AugmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when chance agreement is 1 and kappa is undefined.
class DegenerateAgreement : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// One annotator's category -> emotions judgments.
struct AnnotationSheet {
    std::string annotator_id;
    std::map<std::string, EmotionSet> mapping;
};

struct EmotionMap {
    std::map<std::string, EmotionSet> mapping;

    bool operator==(const EmotionMap&) const = default;
};

inline std::vector<LabeledSample> apply_sentiment(std::vector<LabeledSample> samples, const SentimentMap& map) {
    for (auto& s : samples) {
        auto pol = map.find(s.reaction);
        if (!pol) {
            throw AugmentError("sentiment map has no entry for category: " + s.reaction);
        }
        switch (*pol) {
            case Polarity::positive: s.sentiment = Sentiment::positive; break;
            case Polarity::negative: s.sentiment = Sentiment::negative; break;
            case Polarity::excluded: s.sentiment.reset(); break;
        }
    }
    return samples;
}

namespace detail {

inline void require_same_categories(const std::vector<AnnotationSheet>& sheets) {
    for (std::size_t i = 1; i < sheets.size(); ++i) {
        if (sheets[i].mapping.size() != sheets[0].mapping.size() ||
            !std::equal(sheets[i].mapping.begin(), sheets[i].mapping.end(), sheets[0].mapping.begin(),
                        [](const auto& a, const auto& b) { return a.first == b.first; })) {
            throw AugmentError("annotation sheets '" + sheets[0].annotator_id + "' and '" + sheets[i].annotator_id +
                               "' cover different categories");
        }
    }
}

}  // namespace detail

/// An emotion joins a category's subset when strictly more than half of the
/// sheets chose it.
inline EmotionMap majority_mapping(const std::vector<AnnotationSheet>& sheets) {
    if (sheets.size() < 2) {
        throw AugmentError("majority mapping needs at least 2 sheets");
    }
    detail::require_same_categories(sheets);
    EmotionMap out;
    for (const auto& [category, _] : sheets[0].mapping) {
        EmotionSet chosen;
        for (std::size_t e = 0; e < kEmotionCount; ++e) {
            std::size_t votes = 0;
            for (const auto& sheet : sheets) votes += sheet.mapping.at(category).test(e) ? 1 : 0;
            if (2 * votes > sheets.size()) chosen.set(e);
        }
        out.mapping[category] = chosen;
    }
    return out;
}

/// Overwrites each sample's emotions with its category's subset. Categories
/// without a mapping get the empty set.
inline std::vector<LabeledSample> apply_emotions(std::vector<LabeledSample> samples, const EmotionMap& emap) {
    for (auto& s : samples) {
        auto it = emap.mapping.find(s.reaction);
        s.emotions = it == emap.mapping.end() ? EmotionSet{} : it->second;
    }
    return samples;
}

/// Binary ratings over every (category, emotion) item, category-major.
inline std::vector<std::uint8_t> binary_items(const AnnotationSheet& sheet) {
    std::vector<std::uint8_t> items;
    items.reserve(sheet.mapping.size() * kEmotionCount);
    for (const auto& [_, set] : sheet.mapping) {
        for (std::size_t e = 0; e < kEmotionCount; ++e) items.push_back(set.test(e) ? 1 : 0);
    }
    return items;
}

inline double cohen_kappa(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size() || a.empty()) {
        throw AugmentError("cohen_kappa needs two equal-length non-empty rating vectors");
    }
    const auto n = static_cast<std::int64_t>(a.size());
    std::int64_t agree = 0, a1 = 0, b1 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        agree += a[i] == b[i];
        a1 += a[i] != 0;
        b1 += b[i] != 0;
    }
    // chance agreement, scaled by n^2
    const std::int64_t chance = a1 * b1 + (n - a1) * (n - b1);
    if (chance == n * n) {
        throw DegenerateAgreement("cohen_kappa undefined: chance agreement is 1");
    }
    const double nn = static_cast<double>(n);
    const double po = static_cast<double>(agree) / nn;
    const double pe = static_cast<double>(chance) / (nn * nn);
    return (po - pe) / (1.0 - pe);
}

inline double cohen_kappa(const AnnotationSheet& a, const AnnotationSheet& b) {
    detail::require_same_categories({a, b});
    auto ia = binary_items(a);
    auto ib = binary_items(b);
    return cohen_kappa(ia, ib);
}

/// Fleiss' kappa for binary ratings; ratings[r][i] is rater r's label for item i.
inline double fleiss_kappa(const std::vector<std::vector<std::uint8_t>>& ratings) {
    if (ratings.size() < 2) {
        throw AugmentError("fleiss_kappa needs at least 2 raters");
    }
    const auto items = ratings[0].size();
    if (items == 0) throw AugmentError("fleiss_kappa needs at least one item");
    for (const auto& r : ratings) {
        if (r.size() != items) throw AugmentError("fleiss_kappa raters cover different item counts");
    }
    const auto raters = static_cast<std::int64_t>(ratings.size());
    std::int64_t total_ones = 0;
    std::int64_t agreement_pairs = 0;  // sum over items of sum_j n_ij (n_ij - 1)
    for (std::size_t i = 0; i < items; ++i) {
        std::int64_t ones = 0;
        for (const auto& r : ratings) ones += r[i] != 0;
        const auto zeros = raters - ones;
        total_ones += ones;
        agreement_pairs += ones * (ones - 1) + zeros * (zeros - 1);
    }
    const auto total = static_cast<std::int64_t>(items) * raters;
    const auto total_zeros = total - total_ones;
    if (total_ones == 0 || total_zeros == 0) {
        throw DegenerateAgreement("fleiss_kappa undefined: all ratings share one label");
    }
    const double p_bar = static_cast<double>(agreement_pairs) /
                         (static_cast<double>(items) * static_cast<double>(raters * (raters - 1)));
    const double p1 = static_cast<double>(total_ones) / static_cast<double>(total);
    const double p0 = static_cast<double>(total_zeros) / static_cast<double>(total);
    const double pe = p1 * p1 + p0 * p0;
    return (p_bar - pe) / (1.0 - pe);
}

inline double fleiss_kappa(const std::vector<AnnotationSheet>& sheets) {
    detail::require_same_categories(sheets);
    std::vector<std::vector<std::uint8_t>> ratings;
    for (const auto& s : sheets) ratings.push_back(binary_items(s));
    return fleiss_kappa(ratings);
}

/// Sheets must name every registry category; unknown categories are errors.
inline AnnotationSheet sheet_from_json(const nlohmann::json& j, const CategoryRegistry& registry) {
    if (!j.is_object() || !j.contains("annotator_id") || !j.contains("mapping") || !j["mapping"].is_object()) {
        throw FormatError("annotation sheet needs 'annotator_id' and a 'mapping' object");
    }
    AnnotationSheet sheet;
    sheet.annotator_id = j["annotator_id"].get<std::string>();
    for (const auto& [cat, emotions] : j["mapping"].items()) {
        if (!registry.contains(cat)) {
            throw FormatError("sheet '" + sheet.annotator_id + "' names unknown category: " + cat);
        }
        sheet.mapping[cat] = emotions_from_names(emotions.get<std::vector<std::string>>());
    }
    for (const auto& name : registry.names()) {
        if (!sheet.mapping.count(name)) {
            throw FormatError("sheet '" + sheet.annotator_id + "' is missing category: " + name);
        }
    }
    return sheet;
}

inline ordered_json sheet_to_json(const AnnotationSheet& sheet, const CategoryRegistry& registry) {
    ordered_json j;
    j["annotator_id"] = sheet.annotator_id;
    ordered_json m = ordered_json::object();
    for (const auto& name : registry.names()) m[name] = emotion_names(sheet.mapping.at(name));
    j["mapping"] = std::move(m);
    return j;
}

inline ordered_json emotion_map_to_json(const EmotionMap& emap, const CategoryRegistry& registry) {
    ordered_json j = ordered_json::object();
    for (const auto& name : registry.names()) {
        auto it = emap.mapping.find(name);
        j[name] = emotion_names(it == emap.mapping.end() ? EmotionSet{} : it->second);
    }
    return j;
}

/// Reads every *.json sheet in file-name order.
inline std::vector<AnnotationSheet> load_sheets(const std::string& dir, const CategoryRegistry& registry) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(dir)) {
        if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<AnnotationSheet> sheets;
    for (const auto& f : files) {
        try {
            sheets.push_back(sheet_from_json(read_json_file(f.string()), registry));
        } catch (const RegistryError& e) {
            throw FormatError(f.string() + ": " + e.what());
        } catch (const FormatError& e) {
            throw FormatError(f.string() + ": " + e.what());
        }
    }
    return sheets;
}

}  // namespace rgif
