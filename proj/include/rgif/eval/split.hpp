#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgif::eval {

class SplitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fisher-Yates over mt19937_64 with rejection sampling. Same permutation on
/// every standard library.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw;
        do {
            draw = rng();
        } while (draw >= limit);
        std::swap(v[i - 1], v[draw % bound]);
    }
}

struct HoldoutSplit {
    std::vector<std::size_t> train;  // ascending sample indices
    std::vector<std::size_t> test;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::map<std::string, std::vector<std::size_t>> members_by_class(const std::vector<std::string>& labels) {
    std::map<std::string, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
    return out;
}

}  // namespace detail

/// Per-class test quota frac * n_c, floored, with the leftover seats handed to
/// the largest fractional remainders (ties by class name) until the test set
/// holds round(frac * N) samples. Members are drawn after a seeded shuffle.
inline HoldoutSplit holdout_split(const std::vector<std::string>& labels, double frac, std::uint64_t seed) {
    if (!(frac > 0.0 && frac < 1.0)) {
        throw SplitError("holdout fraction must be in (0, 1)");
    }
    if (labels.empty()) {
        throw SplitError("cannot split an empty dataset");
    }
    auto classes = detail::members_by_class(labels);
    const auto target = static_cast<std::size_t>(std::llround(frac * static_cast<double>(labels.size())));

    struct Quota {
        std::string label;
        std::size_t take;
        double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [label, members] : classes) {
        double exact = frac * static_cast<double>(members.size());
        auto base = static_cast<std::size_t>(std::floor(exact));
        base = std::min(base, members.size());
        quotas.push_back({label, base, exact - static_cast<double>(base)});
        assigned += base;
    }
    std::vector<std::size_t> order(quotas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t k = 0; assigned < target && k < order.size(); ++k) {
        auto& q = quotas[order[k]];
        if (q.take < classes[q.label].size()) {
            ++q.take;
            ++assigned;
        }
    }

    HoldoutSplit split;
    std::mt19937_64 rng(seed);
    for (const auto& q : quotas) {
        auto members = classes[q.label];
        seeded_shuffle(members, rng);
        split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(q.take));
        split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(q.take), members.end());
        if (q.take == members.size()) {
            split.warnings.push_back("class '" + q.label + "' has no training samples after the split");
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

/// Stratified K folds: each class is shuffled and dealt round-robin, starting
/// where the previous class stopped so fold sizes stay within one of each other.
inline std::vector<std::vector<std::size_t>> kfold_stratified(const std::vector<std::string>& labels, std::size_t k,
                                                              std::uint64_t seed) {
    if (k < 2) throw SplitError("k-fold needs k >= 2");
    if (k > labels.size()) throw SplitError("k-fold with k larger than the dataset");
    std::vector<std::vector<std::size_t>> folds(k);
    std::mt19937_64 rng(seed);
    std::size_t next = 0;
    for (auto& [label, members] : detail::members_by_class(labels)) {
        seeded_shuffle(members, rng);
        for (auto idx : members) {
            folds[next].push_back(idx);
            next = (next + 1) % k;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

}  // namespace rgif::eval
