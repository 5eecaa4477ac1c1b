#pragma once

// Deterministic synthetic inputs for unit, CLI and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rgif/augment.hpp"
#include "rgif/dictionary.hpp"
#include "rgif/ingest.hpp"
#include "rgif/json_io.hpp"
#include "rgif/registry.hpp"

namespace rgif::testkit {

inline GifRef gif(const std::string& asset) {
    GifRef g;
    g.asset_id = asset;
    g.content_digest = sha256(asset);
    return g;
}

inline GifRef digest_only(const std::string& seed_text) {
    GifRef g;
    g.content_digest = sha256(seed_text);
    return g;
}

inline ConversationPair conversation(const std::string& id, const std::string& text, const GifRef& reply) {
    ConversationPair p;
    p.root_id = id;
    p.root_text = text;
    p.root_lang = "en";
    p.reply_id = id + "-r";
    p.reply_gif = reply;
    return p;
}

/// Uniform integer in [0, n) from a 64-bit draw; test-only.
inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// A small catalog with a positive family, a negative family and two
/// categories that share nothing.
struct FixtureSpec {
    std::vector<std::string> positive = {"applause", "hug", "kiss", "thumbs up"};
    std::vector<std::string> negative = {"eyeroll", "facepalm", "smh"};
    std::vector<std::string> loners = {"popcorn", "thank you"};
    std::size_t own_per_category = 12;
    std::size_t pairs = 320;
    std::uint64_t seed = 7;

    std::vector<std::string> all() const {
        std::vector<std::string> out = positive;
        out.insert(out.end(), negative.begin(), negative.end());
        out.insert(out.end(), loners.begin(), loners.end());
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline std::string slug(const std::string& s) {
    std::string out = s;
    for (auto& c : out) {
        if (c == ' ') c = '_';
    }
    return out;
}

inline std::vector<CategoryListing> fixture_listings(const FixtureSpec& spec) {
    std::map<std::string, std::vector<GifRef>> lists;
    auto share_within = [&](const std::vector<std::string>& family, const std::string& tag) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                std::size_t shared = 1 + (i + j) % 3;
                for (std::size_t k = 0; k < shared; ++k) {
                    auto g = gif("shared-" + tag + "-" + slug(family[i]) + "-" + slug(family[j]) + "-" +
                                 std::to_string(k));
                    lists[family[i]].push_back(g);
                    lists[family[j]].push_back(g);
                }
            }
        }
    };
    share_within(spec.positive, "pos");
    share_within(spec.negative, "neg");
    // one cross-family GIF so the two families are not disconnected
    auto bridge = gif("shared-bridge");
    lists[spec.positive.back()].push_back(bridge);
    lists[spec.negative.back()].push_back(bridge);

    std::vector<CategoryListing> out;
    for (const auto& cat : spec.all()) {
        CategoryListing l;
        l.category = cat;
        for (std::size_t k = 0; k < spec.own_per_category; ++k) {
            l.gifs.push_back(gif("own-" + slug(cat) + "-" + std::to_string(k)));
        }
        // shared GIFs sit behind the category's own ones
        for (auto& g : lists[cat]) l.gifs.push_back(g);
        out.push_back(std::move(l));
    }
    return out;
}

inline CategoryRegistry fixture_registry(const FixtureSpec& spec) { return CategoryRegistry(spec.all()); }

inline std::vector<std::string> cue_words(const std::string& category) {
    static const std::map<std::string, std::vector<std::string>> cues = {
        {"applause", {"won", "award", "finally", "graduated", "champion", "promoted"}},
        {"hug", {"miss", "lonely", "lost", "grief", "tired", "hurts"}},
        {"kiss", {"love", "darling", "beautiful", "crush", "sweetheart", "date"}},
        {"thumbs up", {"plan", "agreed", "deal", "tomorrow", "confirmed", "ready"}},
        {"eyeroll", {"obviously", "whatever", "again", "sure", "typical", "boring"}},
        {"facepalm", {"forgot", "broke", "locked", "wrong", "mistake", "oops"}},
        {"smh", {"politicians", "ridiculous", "unbelievable", "nonsense", "people", "shameful"}},
        {"popcorn", {"drama", "thread", "fight", "tea", "spill", "watching"}},
        {"thank you", {"help", "grateful", "support", "kind", "appreciate", "gift"}},
    };
    auto it = cues.find(category);
    if (it != cues.end()) return it->second;
    return {"word" + slug(category)};
}

/// Pair records: mostly labelable pairs, plus filter rejects, unseen GIFs, the
/// worked "I can't take this any more!" hug example, and (optionally) one
/// malformed line.
inline std::vector<ConversationPair> fixture_pairs(const FixtureSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const auto cats = spec.all();
    const std::vector<std::string> filler = {"today", "just", "really", "my", "the", "this", "honestly", "so",
                                             "week", "morning", "night", "friend"};
    // skewed category weights give the majority baseline something to find
    std::vector<std::size_t> weight;
    for (std::size_t c = 0; c < cats.size(); ++c) weight.push_back(cats.size() - c + (cats[c] == "hug" ? 6 : 0));
    std::size_t weight_sum = 0;
    for (auto w : weight) weight_sum += w;

    std::vector<ConversationPair> out;
    out.push_back(conversation("hug-example", "I can't take this any more!", gif("own-hug-0")));
    for (std::size_t i = 0; out.size() < spec.pairs; ++i) {
        std::size_t r = pick(rng, weight_sum), c = 0;
        while (r >= weight[c]) r -= weight[c++];
        const auto& cat = cats[c];
        auto cues = cue_words(cat);
        std::string text = filler[pick(rng, filler.size())] + " " + cues[pick(rng, cues.size())] + " " +
                           filler[pick(rng, filler.size())] + " " + cues[pick(rng, cues.size())];
        if (pick(rng, 4) == 0) text += " " + cues[pick(rng, cues.size())] + "!";
        auto p = conversation("t" + std::to_string(1000 + i), text,
                           gif("own-" + slug(cat) + "-" + std::to_string(pick(rng, spec.own_per_category))));
        switch (i % 23) {
            case 3: p.root_lang = "fr"; break;
            case 7: p.root_has_links = true; break;
            case 11: p.root_has_media = true; break;
            case 15: p.reply_extra_content = true; break;
            case 19: p.reply_gif = gif("unseen-" + std::to_string(i)); break;
            default: break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Three annotators who agree on the core emotions and disagree on extras.
inline std::vector<AnnotationSheet> fixture_sheets(const FixtureSpec& spec) {
    const std::map<std::string, std::vector<std::vector<std::string>>> judgments = {
        {"applause", {{"admiration", "joy", "pride"}, {"admiration", "joy"}, {"admiration", "excitement", "pride"}}},
        {"hug", {{"caring", "love"}, {"caring", "sadness"}, {"caring", "love", "grief"}}},
        {"kiss", {{"love", "desire"}, {"love"}, {"love", "joy"}}},
        {"thumbs up", {{"approval"}, {"approval", "optimism"}, {"approval", "optimism"}}},
        {"eyeroll", {{"annoyance"}, {"annoyance", "disapproval"}, {"disapproval"}}},
        {"facepalm", {{"embarrassment", "disappointment"}, {"embarrassment"}, {"disappointment", "annoyance"}}},
        {"smh", {{"disapproval", "disappointment"}, {"disapproval"}, {"disapproval", "anger"}}},
        {"popcorn", {{"amusement", "curiosity"}, {"curiosity"}, {"amusement", "excitement"}}},
        {"thank you", {{"gratitude"}, {"gratitude", "joy"}, {"gratitude"}}},
    };
    std::vector<AnnotationSheet> sheets(3);
    for (std::size_t a = 0; a < 3; ++a) sheets[a].annotator_id = "annotator-" + std::to_string(a + 1);
    for (const auto& cat : spec.all()) {
        for (std::size_t a = 0; a < 3; ++a) {
            auto it = judgments.find(cat);
            sheets[a].mapping[cat] = it == judgments.end() ? EmotionSet{} : emotions_from_names(it->second[a]);
        }
    }
    return sheets;
}

/// Writes listings/, pairs.jsonl, rules.json, sheets/ and registry.json.
inline void write_fixture(const std::filesystem::path& dir, const FixtureSpec& spec = {},
                          bool with_malformed_line = true) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "listings");
    fs::create_directories(dir / "sheets");
    auto registry = fixture_registry(spec);
    write_text_file((dir / "registry.json").string(), registry_to_json(registry).dump(2) + "\n");
    for (const auto& l : fixture_listings(spec)) {
        write_json_file((dir / "listings" / (slug(l.category) + ".json")).string(), listing_to_json(l));
    }
    auto text = serialize_pairs(fixture_pairs(spec));
    if (with_malformed_line) text += "{\"root_id\": \"broken\", \"root_text\": \"no reply fields\"}\n";
    write_text_file((dir / "pairs.jsonl").string(), text);
    write_json_file((dir / "rules.json").string(), rules_to_json(FilterRules{}));
    auto sheets = fixture_sheets(spec);
    for (std::size_t a = 0; a < sheets.size(); ++a) {
        write_json_file((dir / "sheets" / ("sheet" + std::to_string(a + 1) + ".json")).string(),
                        sheet_to_json(sheets[a], registry));
    }
}

}  // namespace rgif::testkit
