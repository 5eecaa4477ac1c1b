#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace rgif {

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered set of reaction category names. Order is significant: it fixes the
/// row order of similarity matrices and the class order of reports.
class CategoryRegistry {
public:
    CategoryRegistry() = default;

    explicit CategoryRegistry(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& name = names_[i];
            if (name.empty()) {
                throw RegistryError("empty category name");
            }
            if (std::any_of(name.begin(), name.end(),
                            [](unsigned char c) { return std::isupper(c); })) {
                throw RegistryError("category name must be lowercase: " + name);
            }
            if (!index_.emplace(name, i).second) {
                throw RegistryError("duplicate category name: " + name);
            }
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const {
        auto idx = find(name);
        if (!idx) {
            throw RegistryError("unknown category: " + std::string(name));
        }
        return *idx;
    }

    bool operator==(const CategoryRegistry& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Well-known category names, followed by numbered
/// placeholders up to the platform's 43 categories. Replace via a registry file
/// when the full list is known.
inline CategoryRegistry default_category_registry() {
    std::vector<std::string> names = {
        "applause", "eyeroll",  "facepalm", "high five", "hug",       "idk",       "kiss",      "mic drop",
        "ok",       "popcorn",  "shrug",    "slow clap", "smh",       "thank you", "thumbs up",
    };
    for (std::size_t i = names.size() + 1; i <= 43; ++i) {
        names.push_back("category_" + std::to_string(i));
    }
    return CategoryRegistry(std::move(names));
}

inline nlohmann::json registry_to_json(const CategoryRegistry& reg) {
    return nlohmann::json{{"categories", reg.names()}};
}

inline CategoryRegistry registry_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("categories") || !j["categories"].is_array()) {
        throw RegistryError("registry file needs a 'categories' array");
    }
    return CategoryRegistry(j["categories"].get<std::vector<std::string>>());
}

inline constexpr std::size_t kEmotionCount = 27;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "admiration",  "amusement", "anger",          "annoyance", "approval",    "caring",
    "confusion",   "curiosity", "desire",         "disappointment", "disapproval", "disgust",
    "embarrassment", "excitement", "fear",        "gratitude", "grief",       "joy",
    "love",        "nervousness", "optimism",     "pride",     "realization", "relief",
    "remorse",     "sadness",   "surprise",
};

using EmotionSet = std::bitset<kEmotionCount>;

inline std::optional<std::size_t> emotion_index(std::string_view name) {
    auto it = std::find(kEmotionNames.begin(), kEmotionNames.end(), name);
    if (it == kEmotionNames.end()) return std::nullopt;
    return static_cast<std::size_t>(it - kEmotionNames.begin());
}

inline EmotionSet emotions_from_names(const std::vector<std::string>& names) {
    EmotionSet set;
    for (const auto& n : names) {
        auto idx = emotion_index(n);
        if (!idx) {
            throw RegistryError("unknown emotion: " + n);
        }
        set.set(*idx);
    }
    return set;
}

/// Names in registry order.
inline std::vector<std::string> emotion_names(const EmotionSet& set) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        if (set.test(i)) out.emplace_back(kEmotionNames[i]);
    }
    return out;
}

}  // namespace rgif
