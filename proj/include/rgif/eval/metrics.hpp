#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgif::eval {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ClassScores {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct EvalReport {
    std::string task;
    std::string model;
    std::size_t samples = 0;
    double accuracy = 0.0;
    double precision = 0.0;  // support-weighted
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> lrap;
    std::vector<ClassScores> per_class;
};

/// Accuracy plus per-class and support-weighted precision, recall and F1.
/// Empty denominators score 0. Classes are the sorted union of gold and
/// predicted labels.
inline EvalReport metrics_multiclass(const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
    if (gold.size() != predicted.size()) throw MetricError("gold and predicted differ in length");
    if (gold.empty()) throw MetricError("metrics over an empty set");
    std::set<std::string> labels(gold.begin(), gold.end());
    labels.insert(predicted.begin(), predicted.end());
    std::map<std::string, std::size_t> tp, fp, fn;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == predicted[i]) {
            ++correct;
            ++tp[gold[i]];
        } else {
            ++fp[predicted[i]];
            ++fn[gold[i]];
        }
    }
    EvalReport r;
    r.samples = gold.size();
    const double n = static_cast<double>(gold.size());
    r.accuracy = static_cast<double>(correct) / n;
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    for (const auto& label : labels) {
        ClassScores c;
        c.label = label;
        c.support = tp[label] + fn[label];
        c.precision = ratio(tp[label], tp[label] + fp[label]);
        c.recall = ratio(tp[label], c.support);
        c.f1 = c.precision + c.recall == 0.0 ? 0.0 : 2.0 * c.precision * c.recall / (c.precision + c.recall);
        const double w = static_cast<double>(c.support) / n;
        r.precision += w * c.precision;
        r.recall += w * c.recall;
        r.f1 += w * c.f1;
        r.per_class.push_back(c);
    }
    return r;
}

/// Label ranking average precision. For each true label j of a row, the
/// fraction of labels scored at least as high as j that are true; averaged
/// over true labels, then over rows.
inline double lrap(const std::vector<std::vector<double>>& scores, const std::vector<std::vector<bool>>& truth) {
    if (scores.size() != truth.size()) throw MetricError("score and truth rows differ in count");
    if (scores.empty()) throw MetricError("lrap over an empty set");
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = scores[i];
        const auto& t = truth[i];
        if (s.size() != t.size()) throw MetricError("score and truth rows differ in width");
        std::size_t true_count = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (!std::isfinite(s[k])) throw MetricError("non-finite score");
            true_count += t[k];
        }
        if (true_count == 0) throw MetricError("row " + std::to_string(i) + " has no true label");
        // The row mean is kept as an exact fraction num / den while it fits,
        // so each row costs a single rounding.
        std::int64_t num = 0, den = 1;
        bool exact = true;
        double row = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (!t[j]) continue;
            std::size_t above = 0, true_above = 0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] >= s[j]) {
                    ++above;
                    true_above += t[k];
                }
            }
            row += static_cast<double>(true_above) / static_cast<double>(above);
            if (exact) {
                auto a = static_cast<std::int64_t>(true_above), b = static_cast<std::int64_t>(above);
                std::int64_t l = std::lcm(den, b), x = 0, y = 0;
                exact = l > 0 && !__builtin_mul_overflow(num, l / den, &x) &&
                        !__builtin_mul_overflow(a, l / b, &y) && !__builtin_add_overflow(x, y, &num);
                den = l;
                if (exact) {
                    auto g = std::gcd(num, den);
                    num /= g;
                    den /= g;
                }
            }
        }
        std::int64_t scaled = 0;
        if (exact && !__builtin_mul_overflow(den, static_cast<std::int64_t>(true_count), &scaled)) {
            total += static_cast<double>(num) / static_cast<double>(scaled);
        } else {
            total += row / static_cast<double>(true_count);
        }
    }
    return total / static_cast<double>(scores.size());
}

}  // namespace rgif::eval
