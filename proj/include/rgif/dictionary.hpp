#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gif_ref.hpp"
#include "json_io.hpp"
#include "registry.hpp"

namespace rgif {

inline constexpr int kDictionarySchemaVersion = 1;
inline constexpr std::size_t kDefaultMaxPerCategory = 100;

class DictionaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DictionaryEntry {
    GifRef gif;
    std::string category;
    std::size_t position = 0;  // 1 = first offered in the category listing

    bool operator==(const DictionaryEntry&) const = default;
};

struct Placement {
    std::string category;
    std::size_t position = 0;

    bool operator==(const Placement&) const = default;
};

/// Ordered GIF listing of one category, as offered by the platform menu.
struct CategoryListing {
    std::string category;
    std::vector<GifRef> gifs;
};

/// Immutable catalog of GIF placements. Entries are kept in registry order,
/// then by position. GIF identity groups are the connected components of the
/// pairwise same_gif relation over all entries.
class GifDictionary {
public:
    GifDictionary() = default;

    GifDictionary(CategoryRegistry registry, std::vector<DictionaryEntry> entries,
                  std::size_t max_per_category = kDefaultMaxPerCategory,
                  std::size_t digest_bytes = kDefaultDigestBytes)
        : registry_(std::move(registry)),
          entries_(std::move(entries)),
          max_per_category_(max_per_category),
          digest_bytes_(digest_bytes) {
        validate_and_index();
    }

    const CategoryRegistry& registry() const { return registry_; }
    const std::vector<DictionaryEntry>& entries() const { return entries_; }
    std::size_t max_per_category() const { return max_per_category_; }
    std::size_t digest_bytes() const { return digest_bytes_; }
    std::size_t size() const { return entries_.size(); }

    /// Identity group of each entry, parallel to entries().
    const std::vector<std::size_t>& groups() const { return group_; }
    std::size_t group_count() const { return group_count_; }

    /// Entry indices per registry category, ordered by position.
    const std::vector<std::vector<std::size_t>>& by_category() const { return by_category_; }

    /// Every placement whose GIF matches `gif` under same_gif, at most one per
    /// category, sorted by position then category name.
    std::vector<Placement> lookup(const GifRef& gif) const {
        std::map<std::string, std::size_t> best;
        auto consider = [&](std::size_t idx) {
            const auto& e = entries_[idx];
            if (!same_gif(gif, e.gif)) return;
            auto [it, inserted] = best.emplace(e.category, e.position);
            if (!inserted) it->second = std::min(it->second, e.position);
        };
        if (gif.asset_id) {
            if (auto it = by_asset_.find(*gif.asset_id); it != by_asset_.end()) {
                for (auto idx : it->second) consider(idx);
            }
        }
        if (gif.content_digest) {
            if (auto it = by_digest_.find(to_hex(*gif.content_digest)); it != by_digest_.end()) {
                for (auto idx : it->second) consider(idx);
            }
        }
        std::vector<Placement> out;
        for (auto& [cat, pos] : best) out.push_back({cat, pos});
        std::sort(out.begin(), out.end(), [](const Placement& a, const Placement& b) {
            return a.position != b.position ? a.position < b.position : a.category < b.category;
        });
        return out;
    }

    /// Number of GIF identities placed in two or more categories.
    std::size_t multi_category_count() const {
        std::vector<std::set<std::size_t>> cats(group_count_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            cats[group_[i]].insert(registry_.index_of(entries_[i].category));
        }
        return static_cast<std::size_t>(
            std::count_if(cats.begin(), cats.end(), [](const auto& s) { return s.size() >= 2; }));
    }

    bool operator==(const GifDictionary& other) const {
        return registry_ == other.registry_ && entries_ == other.entries_ &&
               max_per_category_ == other.max_per_category_ && digest_bytes_ == other.digest_bytes_;
    }

private:
    void validate_and_index() {
        by_category_.assign(registry_.size(), {});
        for (auto& e : entries_) {
            validate(e.gif, digest_bytes_);
            if (!registry_.contains(e.category)) {
                throw DictionaryError("entry category not in registry: " + e.category);
            }
        }
        std::stable_sort(entries_.begin(), entries_.end(), [&](const auto& a, const auto& b) {
            auto ia = registry_.index_of(a.category), ib = registry_.index_of(b.category);
            return ia != ib ? ia < ib : a.position < b.position;
        });
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            by_category_[registry_.index_of(entries_[i].category)].push_back(i);
        }
        for (std::size_t c = 0; c < by_category_.size(); ++c) {
            const auto& idx = by_category_[c];
            if (idx.size() > max_per_category_) {
                throw DictionaryError("category '" + registry_.name(c) + "' exceeds max_per_category");
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (entries_[idx[k]].position != k + 1) {
                    throw DictionaryError("positions in category '" + registry_.name(c) +
                                          "' are not contiguous from 1");
                }
                for (std::size_t m = 0; m < k; ++m) {
                    if (same_gif(entries_[idx[k]].gif, entries_[idx[m]].gif)) {
                        throw DictionaryError("gif listed twice in category '" + registry_.name(c) + "'");
                    }
                }
            }
        }

        by_asset_.clear();
        by_digest_.clear();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& g = entries_[i].gif;
            if (g.asset_id) by_asset_[*g.asset_id].push_back(i);
            if (g.content_digest) by_digest_[to_hex(*g.content_digest)].push_back(i);
        }

        // Union-find over same_gif: equal asset ids join; a digest joins every
        // holder of it whenever one side lacks an asset id.
        std::vector<std::size_t> parent(entries_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t a, std::size_t b) {
            a = find(a);
            b = find(b);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        };
        for (auto& [id, idx] : by_asset_) {
            for (std::size_t k = 1; k < idx.size(); ++k) unite(idx[0], idx[k]);
        }
        for (auto& [hex, idx] : by_digest_) {
            auto anon = std::find_if(idx.begin(), idx.end(),
                                     [&](std::size_t i) { return !entries_[i].gif.asset_id; });
            if (anon == idx.end()) continue;
            for (auto i : idx) unite(*anon, i);
        }
        group_.assign(entries_.size(), 0);
        std::unordered_map<std::size_t, std::size_t> dense;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            auto root = find(i);
            auto [it, inserted] = dense.emplace(root, dense.size());
            group_[i] = it->second;
        }
        group_count_ = dense.size();
    }

    CategoryRegistry registry_;
    std::vector<DictionaryEntry> entries_;
    std::size_t max_per_category_ = kDefaultMaxPerCategory;
    std::size_t digest_bytes_ = kDefaultDigestBytes;
    std::vector<std::vector<std::size_t>> by_category_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_asset_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_digest_;
    std::vector<std::size_t> group_;
    std::size_t group_count_ = 0;
};

/// Keeps the first max_per_category GIFs of each listing, positioned in
/// listing order. A GIF may be listed under several categories.
inline GifDictionary build_dictionary(const CategoryRegistry& registry, const std::vector<CategoryListing>& listings,
                                      std::size_t max_per_category = kDefaultMaxPerCategory,
                                      std::size_t digest_bytes = kDefaultDigestBytes) {
    std::set<std::string> seen;
    std::vector<DictionaryEntry> entries;
    for (const auto& listing : listings) {
        if (!registry.contains(listing.category)) {
            throw DictionaryError("unknown category: " + listing.category);
        }
        if (!seen.insert(listing.category).second) {
            throw DictionaryError("category listed twice: " + listing.category);
        }
        for (std::size_t k = 0; k < listing.gifs.size(); ++k) {
            for (std::size_t m = 0; m < k; ++m) {
                if (same_gif(listing.gifs[k], listing.gifs[m])) {
                    throw DictionaryError("duplicate gif in listing '" + listing.category + "' at positions " +
                                          std::to_string(m + 1) + " and " + std::to_string(k + 1));
                }
            }
        }
        auto keep = std::min(listing.gifs.size(), max_per_category);
        for (std::size_t k = 0; k < keep; ++k) {
            entries.push_back({listing.gifs[k], listing.category, k + 1});
        }
    }
    return GifDictionary(registry, std::move(entries), max_per_category, digest_bytes);
}

inline ordered_json dictionary_to_json(const GifDictionary& dict) {
    ordered_json j;
    j["schema_version"] = kDictionarySchemaVersion;
    j["registry"] = dict.registry().names();
    j["max_per_category"] = dict.max_per_category();
    j["digest_bytes"] = dict.digest_bytes();
    auto entries = ordered_json::array();
    for (const auto& e : dict.entries()) {
        ordered_json je;
        je["category"] = e.category;
        je["position"] = e.position;
        je["gif"] = gif_to_json(e.gif);
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline GifDictionary dictionary_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version")) {
        throw DictionaryError("dictionary file lacks schema_version");
    }
    if (j["schema_version"] != kDictionarySchemaVersion) {
        throw DictionaryError("unsupported dictionary schema_version " + j["schema_version"].dump());
    }
    try {
        CategoryRegistry registry(j.at("registry").get<std::vector<std::string>>());
        auto max_per = j.at("max_per_category").get<std::size_t>();
        auto digest_bytes = j.value("digest_bytes", kDefaultDigestBytes);
        std::vector<DictionaryEntry> entries;
        for (const auto& je : j.at("entries")) {
            entries.push_back({gif_from_json(je.at("gif"), digest_bytes), je.at("category").get<std::string>(),
                               je.at("position").get<std::size_t>()});
        }
        return GifDictionary(std::move(registry), std::move(entries), max_per, digest_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw DictionaryError(std::string("malformed dictionary: ") + e.what());
    }
}

inline void save_dictionary(const GifDictionary& dict, const std::string& path) {
    write_json_file(path, dictionary_to_json(dict));
}

inline GifDictionary load_dictionary(const std::string& path) { return dictionary_from_json(read_json_file(path)); }

/// Listing file: {"category": name, "gifs": [gif reference, ...]} in menu order.
inline CategoryListing listing_from_json(const nlohmann::json& j, std::size_t digest_bytes = kDefaultDigestBytes) {
    if (!j.is_object() || !j.contains("category") || !j.contains("gifs") || !j["gifs"].is_array()) {
        throw FormatError("listing needs 'category' and 'gifs'");
    }
    CategoryListing listing;
    listing.category = j["category"].get<std::string>();
    for (const auto& g : j["gifs"]) listing.gifs.push_back(gif_from_json(g, digest_bytes));
    return listing;
}

inline ordered_json listing_to_json(const CategoryListing& listing) {
    ordered_json j;
    j["category"] = listing.category;
    auto gifs = ordered_json::array();
    for (const auto& g : listing.gifs) gifs.push_back(gif_to_json(g));
    j["gifs"] = std::move(gifs);
    return j;
}

/// Reads every *.json file of a directory in file-name order.
inline std::vector<CategoryListing> load_listings(const std::string& dir,
                                                  std::size_t digest_bytes = kDefaultDigestBytes) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(dir)) {
        if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<CategoryListing> out;
    for (const auto& f : files) {
        try {
            out.push_back(listing_from_json(read_json_file(f.string()), digest_bytes));
        } catch (const FormatError& e) {
            throw FormatError(f.string() + ": " + e.what());
        }
    }
    return out;
}

}  // namespace rgif
