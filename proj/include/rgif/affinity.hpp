#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dictionary.hpp"
#include "json_io.hpp"

namespace rgif {

class ClusterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pairwise reaction similarity: off-diagonal cells count GIFs shared by two
/// categories, the diagonal holds each category's GIF count.
struct SimilarityMatrix {
    std::vector<std::string> categories;
    std::vector<std::vector<std::int64_t>> s;

    std::size_t size() const { return categories.size(); }
    std::int64_t at(std::size_t i, std::size_t j) const { return s[i][j]; }

    /// Drops the named categories, keeping the order of the rest.
    SimilarityMatrix without(const std::vector<std::string>& drop) const {
        std::set<std::string> gone(drop.begin(), drop.end());
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < categories.size(); ++i) {
            if (!gone.count(categories[i])) keep.push_back(i);
        }
        SimilarityMatrix out;
        out.s.assign(keep.size(), std::vector<std::int64_t>(keep.size(), 0));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            out.categories.push_back(categories[keep[a]]);
            for (std::size_t b = 0; b < keep.size(); ++b) out.s[a][b] = s[keep[a]][keep[b]];
        }
        return out;
    }

    bool operator==(const SimilarityMatrix&) const = default;
};

/// Rows follow registry order. Shared GIFs are counted per identity group, so
/// the off-diagonal sum equals the sum over GIFs of C(m, 2).
inline SimilarityMatrix similarity_matrix(const GifDictionary& dict) {
    const auto& reg = dict.registry();
    const auto n = reg.size();
    SimilarityMatrix m;
    m.categories = reg.names();
    m.s.assign(n, std::vector<std::int64_t>(n, 0));

    std::vector<std::set<std::size_t>> cats_of_group(dict.group_count());
    const auto& groups = dict.groups();
    for (std::size_t i = 0; i < dict.entries().size(); ++i) {
        cats_of_group[groups[i]].insert(reg.index_of(dict.entries()[i].category));
    }
    for (const auto& cats : cats_of_group) {
        for (auto a = cats.begin(); a != cats.end(); ++a) {
            for (auto b = std::next(a); b != cats.end(); ++b) {
                ++m.s[*a][*b];
                ++m.s[*b][*a];
            }
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        m.s[c][c] = static_cast<std::int64_t>(dict.by_category()[c].size());
    }
    return m;
}

struct ClusterNode {
    std::optional<std::string> leaf;  // set on leaves only
    std::size_t left = 0;
    std::size_t right = 0;
    double score = 0.0;  // average inter-cluster similarity at the merge
    std::size_t size = 1;

    bool is_leaf() const { return leaf.has_value(); }
    bool operator==(const ClusterNode&) const = default;
};

/// Full binary merge tree. Nodes [0, n) are leaves in matrix order; node n + k
/// is the k-th merge. The last node is the root.
struct ClusterTree {
    std::vector<ClusterNode> nodes;

    std::size_t leaf_count() const { return (nodes.size() + 1) / 2; }
    std::size_t merge_count() const { return nodes.empty() ? 0 : leaf_count() - 1; }
    std::size_t root() const { return nodes.size() - 1; }
    const ClusterNode& merge(std::size_t k) const { return nodes[leaf_count() + k]; }

    std::vector<std::string> leaf_names(std::size_t node) const {
        std::vector<std::string> out;
        collect(node, out);
        return out;
    }

    std::string min_leaf(std::size_t node) const {
        auto names = leaf_names(node);
        return *std::min_element(names.begin(), names.end());
    }

    bool operator==(const ClusterTree&) const = default;

private:
    void collect(std::size_t node, std::vector<std::string>& out) const {
        const auto& n = nodes[node];
        if (n.is_leaf()) {
            out.push_back(*n.leaf);
            return;
        }
        collect(n.left, out);
        collect(n.right, out);
    }
};

/// Average-linkage agglomeration on similarity. Each step merges the pair of
/// clusters with the highest mean cross similarity; ties go to the pair whose
/// (smaller, larger) minimum leaf names sort first. Scores are compared as exact
/// rationals over integer similarity sums.
inline ClusterTree cluster(const SimilarityMatrix& sim) {
    const auto n = sim.size();
    if (n < 2) {
        throw ClusterError("clustering needs at least 2 categories");
    }
    ClusterTree tree;
    for (std::size_t i = 0; i < n; ++i) tree.nodes.push_back({sim.categories[i], 0, 0, 0.0, 1});

    struct Slot {
        std::size_t node;
        std::size_t size;
        std::string min_leaf;
    };
    std::vector<std::optional<Slot>> slots(n);
    std::vector<std::vector<std::int64_t>> sums(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        slots[i] = Slot{i, 1, sim.categories[i]};
        for (std::size_t j = 0; j < n; ++j) sums[i][j] = sim.s[i][j];
    }

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        std::int64_t best_num = 0, best_den = 1;
        std::pair<std::string_view, std::string_view> best_key;
        for (std::size_t a = 0; a < n; ++a) {
            if (!slots[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!slots[b]) continue;
                auto num = sums[a][b];
                auto den = static_cast<std::int64_t>(slots[a]->size * slots[b]->size);
                std::string_view ka = slots[a]->min_leaf, kb = slots[b]->min_leaf;
                auto key = ka < kb ? std::make_pair(ka, kb) : std::make_pair(kb, ka);
                bool take = false;
                if (!best) {
                    take = true;
                } else {
                    auto lhs = num * best_den, rhs = best_num * den;
                    take = lhs > rhs || (lhs == rhs && key < best_key);
                }
                if (take) {
                    best = {a, b};
                    best_num = num;
                    best_den = den;
                    best_key = key;
                }
            }
        }
        auto [a, b] = *best;
        auto& sa = *slots[a];
        auto& sb = *slots[b];
        bool a_first = sa.min_leaf < sb.min_leaf;
        ClusterNode node;
        node.left = a_first ? sa.node : sb.node;
        node.right = a_first ? sb.node : sa.node;
        node.score = static_cast<double>(best_num) / static_cast<double>(best_den);
        node.size = sa.size + sb.size;
        tree.nodes.push_back(node);

        Slot merged{tree.nodes.size() - 1, node.size, a_first ? sa.min_leaf : sb.min_leaf};
        for (std::size_t c = 0; c < n; ++c) {
            if (c == a || c == b || !slots[c]) continue;
            sums[a][c] += sums[b][c];
            sums[c][a] = sums[a][c];
        }
        slots[a] = merged;
        slots[b].reset();
    }
    return tree;
}

/// Undoes the last k-1 merges. Each cluster is sorted; clusters are ordered by
/// their smallest member.
inline std::vector<std::vector<std::string>> cut_clusters(const ClusterTree& tree, std::size_t k) {
    const auto n = tree.leaf_count();
    if (k < 1 || k > n) {
        throw ClusterError("cut size " + std::to_string(k) + " outside 1.." + std::to_string(n));
    }
    const auto kept_merges = n - k;
    std::vector<bool> consumed(tree.nodes.size(), false);
    for (std::size_t m = 0; m < kept_merges; ++m) {
        const auto& node = tree.merge(m);
        consumed[node.left] = consumed[node.right] = true;
    }
    std::vector<std::vector<std::string>> parts;
    for (std::size_t id = 0; id < n + kept_merges; ++id) {
        if (consumed[id]) continue;
        auto names = tree.leaf_names(id);
        std::sort(names.begin(), names.end());
        parts.push_back(std::move(names));
    }
    std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return parts;
}

namespace detail {

inline std::string newick_label(const std::string& name) {
    bool plain = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
    if (plain) return name;
    std::string out = "'";
    for (char c : name) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

inline void write_newick(const ClusterTree& tree, std::size_t id, std::ostream& os) {
    const auto& node = tree.nodes[id];
    if (node.is_leaf()) {
        os << newick_label(*node.leaf);
        return;
    }
    os << '(';
    write_newick(tree, node.left, os);
    os << ',';
    write_newick(tree, node.right, os);
    os << ")[score=" << nlohmann::json(node.score).dump() << ",size=" << node.size << ']';
}

inline ordered_json node_to_json(const ClusterTree& tree, std::size_t id) {
    const auto& node = tree.nodes[id];
    ordered_json j;
    if (node.is_leaf()) {
        j["leaf"] = *node.leaf;
        return j;
    }
    j["left"] = node_to_json(tree, node.left);
    j["right"] = node_to_json(tree, node.right);
    j["score"] = node.score;
    j["size"] = node.size;
    j["merge"] = id - tree.leaf_count();
    return j;
}

}  // namespace detail

enum class DendrogramFormat { json, newick };

/// Newick with merge scores as bracket comments, e.g. "((a,b)[score=5,size=2],c)[score=1,size=3];".
inline std::string to_newick(const ClusterTree& tree) {
    std::ostringstream os;
    detail::write_newick(tree, tree.root(), os);
    os << ';';
    return os.str();
}

inline ordered_json dendrogram_to_json(const ClusterTree& tree) {
    ordered_json j;
    auto leaves = ordered_json::array();
    for (std::size_t i = 0; i < tree.leaf_count(); ++i) leaves.push_back(*tree.nodes[i].leaf);
    j["leaves"] = std::move(leaves);
    j["root"] = detail::node_to_json(tree, tree.root());
    return j;
}

inline std::string export_dendrogram(const ClusterTree& tree, DendrogramFormat format) {
    if (format == DendrogramFormat::newick) return to_newick(tree) + "\n";
    return dendrogram_to_json(tree).dump(2) + "\n";
}

inline ClusterTree dendrogram_from_json(const nlohmann::json& j) {
    try {
        ClusterTree tree;
        const auto names = j.at("leaves").get<std::vector<std::string>>();
        const auto n = names.size();
        if (n < 2) throw ClusterError("dendrogram needs at least 2 leaves");
        std::map<std::string, std::size_t> leaf_id;
        for (std::size_t i = 0; i < n; ++i) {
            tree.nodes.push_back({names[i], 0, 0, 0.0, 1});
            leaf_id[names[i]] = i;
        }
        tree.nodes.resize(2 * n - 1);
        std::vector<bool> filled(2 * n - 1, false);
        std::fill(filled.begin(), filled.begin() + static_cast<std::ptrdiff_t>(n), true);

        auto walk = [&](auto&& self, const nlohmann::json& node) -> std::size_t {
            if (node.contains("leaf")) {
                auto it = leaf_id.find(node["leaf"].get<std::string>());
                if (it == leaf_id.end()) throw ClusterError("unknown leaf in dendrogram");
                return it->second;
            }
            auto merge = node.at("merge").get<std::size_t>();
            if (merge >= n - 1 || filled[n + merge]) throw ClusterError("bad merge index in dendrogram");
            ClusterNode cn;
            cn.left = self(self, node.at("left"));
            cn.right = self(self, node.at("right"));
            cn.score = node.at("score").get<double>();
            cn.size = node.at("size").get<std::size_t>();
            tree.nodes[n + merge] = cn;
            filled[n + merge] = true;
            return n + merge;
        };
        auto root = walk(walk, j.at("root"));
        if (root != tree.root() || std::find(filled.begin(), filled.end(), false) != filled.end()) {
            throw ClusterError("dendrogram is not a complete merge tree");
        }
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw ClusterError(std::string("malformed dendrogram: ") + e.what());
    }
}

enum class Polarity { positive, negative, excluded };

inline constexpr std::string_view polarity_name(Polarity p) {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::negative: return "negative";
        case Polarity::excluded: return "excluded";
    }
    return "excluded";
}

struct SentimentMap {
    std::map<std::string, Polarity> assignment;

    std::optional<Polarity> find(const std::string& category) const {
        auto it = assignment.find(category);
        if (it == assignment.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const SentimentMap&) const = default;
};

/// Categories the default configuration leaves without a sentiment.
inline std::vector<std::string> default_sentiment_exclusions() { return {"popcorn", "thank you"}; }

/// Excluded names are removed from the clusters first; the cluster at
/// `negative_cluster` becomes negative, the other positive.
inline SentimentMap derive_sentiment_map(const std::vector<std::vector<std::string>>& clusters,
                                         std::size_t negative_cluster, const std::vector<std::string>& excluded) {
    if (clusters.size() != 2) {
        throw ClusterError("sentiment map needs exactly 2 clusters, got " + std::to_string(clusters.size()));
    }
    if (negative_cluster > 1) {
        throw ClusterError("polarity hint names cluster " + std::to_string(negative_cluster) + " of 2");
    }
    SentimentMap map;
    std::set<std::string> ex(excluded.begin(), excluded.end());
    for (const auto& name : ex) map.assignment[name] = Polarity::excluded;
    for (std::size_t c = 0; c < 2; ++c) {
        auto polarity = c == negative_cluster ? Polarity::negative : Polarity::positive;
        std::size_t kept = 0;
        for (const auto& name : clusters[c]) {
            if (ex.count(name)) continue;
            if (!map.assignment.emplace(name, polarity).second) {
                throw ClusterError("category in both clusters: " + name);
            }
            ++kept;
        }
        if (kept == 0) {
            throw ClusterError("a sentiment cluster is empty after exclusions");
        }
    }
    return map;
}

inline ordered_json sentiment_map_to_json(const SentimentMap& map) {
    ordered_json j;
    for (auto p : {Polarity::negative, Polarity::positive, Polarity::excluded}) {
        auto arr = ordered_json::array();
        for (const auto& [cat, pol] : map.assignment) {
            if (pol == p) arr.push_back(cat);
        }
        j[std::string(polarity_name(p))] = std::move(arr);
    }
    return j;
}

inline SentimentMap sentiment_map_from_json(const nlohmann::json& j) {
    SentimentMap map;
    for (auto p : {Polarity::negative, Polarity::positive, Polarity::excluded}) {
        auto key = std::string(polarity_name(p));
        if (!j.contains(key)) continue;
        for (const auto& cat : j[key].get<std::vector<std::string>>()) {
            if (!map.assignment.emplace(cat, p).second) {
                throw ClusterError("category listed under two polarities: " + cat);
            }
        }
    }
    return map;
}

}  // namespace rgif
