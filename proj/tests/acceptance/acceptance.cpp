// Runs the eight acceptance checks and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rgif/affinity.hpp"
#include "rgif/augment.hpp"
#include "rgif/eval/baselines.hpp"
#include "rgif/eval/logreg.hpp"
#include "rgif/eval/metrics.hpp"
#include "rgif/labeler.hpp"
#include "support/agreement_oracle.hpp"
#include "support/cluster_oracle.hpp"
#include "support/fixture.hpp"
#include "support/identity_oracle.hpp"
#include "support/lrap_oracle.hpp"
#include "support/pipeline.hpp"
#include "support/reference_shape.hpp"
#include "support/temp_dir.hpp"

using namespace rgif;

namespace {

/// Collects the first few failure messages of one check.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        std::string s = std::to_string(failures_) + " failure(s)";
        for (auto& n : notes_) s += "; " + n;
        return s;
    }

private:
    std::size_t failures_ = 0;
    std::vector<std::string> notes_;
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---- 1 ----
void majority_baseline(Check& c) {
    testkit::FixtureSpec spec;
    auto dict = build_dictionary(testkit::fixture_registry(spec), testkit::fixture_listings(spec));
    auto corpus = label_corpus(dict, testkit::fixture_pairs(spec), {});
    SentimentMap map;
    for (auto& cat : spec.positive) map.assignment[cat] = Polarity::positive;
    for (auto& cat : spec.negative) map.assignment[cat] = Polarity::negative;
    for (auto& cat : spec.loners) map.assignment[cat] = Polarity::excluded;
    auto samples = apply_sentiment(corpus.samples, map);
    for (auto task : {eval::Task::reaction, eval::Task::sentiment}) {
        auto data = eval::task_data(samples, task);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto run = eval::run_baseline(data, eval::ModelKind::majority, {0.1, seed, 5, {}});
            auto test = data.subset(run.split.test);
            auto hits = std::count(test.labels.begin(), test.labels.end(), run.model.majority_label);
            double share = static_cast<double>(hits) / static_cast<double>(test.labels.size());
            c.expect(run.report.accuracy == share, "fixture accuracy " + num(run.report.accuracy) + " vs share " +
                                                       num(share));
        }
    }

    auto shape = testkit::reference_shape();
    auto reference = testkit::reference_samples(shape);
    auto reaction = eval::run_baseline(eval::task_data(reference, eval::Task::reaction), eval::ModelKind::majority,
                                       {0.1, 0, 5, {}});
    c.expect(std::abs(100 * reaction.report.accuracy - 10.4) <= 0.1,
             "reaction majority " + num(100 * reaction.report.accuracy) + "%");
    auto sentiment = eval::run_baseline(eval::task_data(reference, eval::Task::sentiment), eval::ModelKind::majority,
                                        {0.1, 0, 5, {}});
    c.expect(std::abs(100 * sentiment.report.accuracy - 58.0) <= 0.1,
             "sentiment majority " + num(100 * sentiment.report.accuracy) + "%");
}

// ---- 2 ----
void clustering_oracle(Check& c) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 500; ++round) {
        std::size_t n = 3 + rng() % 6;
        auto m = testkit::random_similarity(rng, n, 1 + static_cast<std::int64_t>(rng() % 8));
        auto t = cluster(m);
        auto diff = testkit::compare_with_oracle(m, t);
        c.expect(diff.empty(), "round " + std::to_string(round) + ": " + diff);
        bool monotone = true;
        for (std::size_t k = 1; k < t.merge_count(); ++k) monotone = monotone && t.merge(k).score <= t.merge(k - 1).score;
        c.expect(monotone, "round " + std::to_string(round) + ": merge scores increase");
    }
}

// ---- 3 ----
void similarity_sum_rule(Check& c) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 200; ++round) {
        std::size_t k = 3 + rng() % 6;
        std::vector<std::string> cats;
        for (std::size_t i = 0; i < k; ++i) cats.push_back("c" + std::to_string(i));
        auto d = build_dictionary(CategoryRegistry(cats), testkit::random_listings(rng, cats, 4 + rng() % 12, 30));
        auto m = similarity_matrix(d);
        std::int64_t off = 0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) off += m.at(i, j);
        }
        std::int64_t pairs = 0;
        for (const auto& comp : testkit::identity_components(d.entries())) {
            std::set<std::string> holding;
            for (auto e : comp) holding.insert(d.entries()[e].category);
            auto mg = static_cast<std::int64_t>(holding.size());
            pairs += mg * (mg - 1) / 2;
        }
        c.expect(off == pairs, "round " + std::to_string(round) + ": " + std::to_string(off) + " vs " +
                                   std::to_string(pairs));
        auto scan = testkit::multi_category_scan(d.entries());
        c.expect(d.multi_category_count() == scan, "round " + std::to_string(round) + ": multi count " +
                                                       std::to_string(d.multi_category_count()) + " vs " +
                                                       std::to_string(scan));
    }
}

// ---- 4 ----
void agreement(Check& c) {
    std::vector<std::uint8_t> a = {1, 1, 0, 0, 1}, b = {1, 0, 0, 0, 1};
    double k = cohen_kappa(a, b);
    c.expect(std::abs(k - 0.6154) <= 1e-4, "worked kappa " + num(k));
    c.expect(cohen_kappa(a, a) == 1.0, "kappa(A, A) " + num(cohen_kappa(a, a)));

    auto grid = testkit::crafted_grid();
    double f = fleiss_kappa(testkit::by_rater(grid));
    double longhand = testkit::fleiss_longhand(grid);
    c.expect(std::abs(f - longhand) <= 1e-9, "fleiss " + num(f) + " vs " + num(longhand));

    auto throws_degenerate = [](auto&& fn) {
        try {
            fn();
        } catch (const DegenerateAgreement&) {
            return true;
        } catch (...) {
            return false;
        }
        return false;
    };
    std::vector<std::uint8_t> ones(5, 1);
    c.expect(throws_degenerate([&] { return cohen_kappa(ones, ones); }), "cohen on constant marginals");
    std::vector<std::vector<std::uint8_t>> same(3, std::vector<std::uint8_t>(6, 0));
    c.expect(throws_degenerate([&] { return fleiss_kappa(same); }), "fleiss on constant marginals");
}

// ---- 5 ----
void lrap_oracle(Check& c) {
    std::mt19937_64 rng(1000);
    for (int round = 0; round < 1000; ++round) {
        std::vector<std::vector<double>> s;
        std::vector<std::vector<bool>> t;
        testkit::random_lrap_instance(rng, s, t);
        double got = eval::lrap(s, t), want = testkit::lrap_bruteforce(s, t);
        c.expect(std::abs(got - want) <= 1e-12, "round " + std::to_string(round) + ": " + num(got) + " vs " + num(want));
    }
    double one = eval::lrap({{0.1, 0.9, 0.2, 0.8}}, {{false, true, false, true}});
    double five_twelfths = eval::lrap({{0.9, 0.1, 0.8, 0.2}}, {{false, true, false, true}});
    c.expect(one == 1.0, "first worked example " + num(one));
    c.expect(five_twelfths == 5.0 / 12.0, "second worked example " + num(five_twelfths));
}

// ---- 6 ----
std::vector<eval::SparseVector> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t features) {
    std::normal_distribution<double> gauss;
    std::vector<eval::SparseVector> x(n);
    for (auto& row : x) {
        for (std::uint32_t f = 0; f < features; ++f) {
            if (rng() % 2) row.emplace_back(f, gauss(rng));
        }
    }
    return x;
}

void logistic_regression(Check& c) {
    std::mt19937_64 rng(606);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int round = 0; round < 20; ++round) {
        std::size_t n = 6 + rng() % 12, features = 2 + rng() % 5, classes = 2 + rng() % 3;
        auto x = random_rows(rng, n, features);
        std::vector<std::size_t> y(n);
        for (auto& v : y) v = rng() % classes;
        eval::SoftmaxObjective f(x, y, classes, features, 0.5 + static_cast<double>(rng() % 4));
        std::vector<double> w(f.dimension()), grad, scratch;
        for (auto& v : w) v = gauss(rng);
        f(w, grad);
        const double h = 1e-5;
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto plus = w, minus = w;
            plus[j] += h;
            minus[j] -= h;
            double numeric = (f(plus, scratch) - f(minus, scratch)) / (2 * h);
            worst = std::max(worst, std::abs(numeric - grad[j]) / std::max(1.0, std::abs(numeric)));
        }
    }
    c.expect(worst < 1e-4, "max relative gradient error " + num(worst));

    auto x = random_rows(rng, 120, 8);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back("c" + std::to_string(rng() % 3));
    auto m = eval::train_logreg(x, labels, 8);
    for (std::size_t k = 1; k < m.objective_trace.size(); ++k) {
        c.expect(m.objective_trace[k] <= m.objective_trace[k - 1], "objective rose at iteration " + std::to_string(k));
    }

    std::vector<eval::SparseVector> sx;
    std::vector<std::string> sy;
    for (int i = 0; i < 60; ++i) {
        const char* cls[] = {"low", "mid", "high"};
        std::size_t k = static_cast<std::size_t>(i % 3);
        sx.push_back({{static_cast<std::uint32_t>(k), 1.0 + 0.01 * i}, {3, gauss(rng) * 0.1}});
        sy.push_back(cls[k]);
    }
    auto sep = eval::train_logreg(sx, sy, 4);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) correct += sep.predict(sx[i]) == sy[i];
    c.expect(correct == sx.size(), "separable training accuracy " + std::to_string(correct) + "/" +
                                       std::to_string(sx.size()));
}

// ---- 7 ----
void pipeline_determinism(Check& c) {
    testkit::TempDir dir;
    testkit::FixtureSpec spec;
    c.expect(spec.pairs >= 200 && spec.all().size() >= 6 && testkit::fixture_sheets(spec).size() == 3,
             "fixture too small");
    testkit::write_fixture(dir.path() / "in", spec);
    auto first = testkit::run_pipeline(dir.path() / "in", dir.path() / "out");
    c.expect(first.failed_step == -1, "first run failed: " + first.stderr_text);
    if (first.failed_step != -1) return;
    auto a = testkit::snapshot(dir.path() / "out");
    auto second = testkit::run_pipeline(dir.path() / "in", dir.path() / "out");
    c.expect(second.failed_step == -1, "second run failed: " + second.stderr_text);
    auto b = testkit::snapshot(dir.path() / "out");
    for (const char* name : {"labeled.jsonl", "augmented.jsonl", "dendrogram.json", "eval_report.json",
                             "eval_report.json.txt", "train_report.json", "model.json"}) {
        c.expect(a.count(name) == 1, std::string(name) + " missing");
    }
    c.expect(a == b, "outputs differ between runs");

    std::istringstream lines(a["public.jsonl"]);
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line); ++rows) {
        auto j = nlohmann::json::parse(line);
        c.expect(!j.contains("root_text"), "public row carries text");
    }
    c.expect(rows > 0, "public export is empty");
}

// ---- 8 ----
void label_resolution(Check& c) {
    testkit::FixtureSpec spec;
    auto dict = build_dictionary(testkit::fixture_registry(spec), testkit::fixture_listings(spec));
    auto s = label_pair(dict, testkit::conversation("hug-example", "I can't take this any more!", testkit::gif("own-hug-0")));
    c.expect(s.has_value() && s->reaction == "hug", "worked example not labeled hug");

    // a GIF that is 1st in "thumbs up" and 1st in "ok" goes to "ok"; 3rd vs 2nd goes to the 2nd
    auto shared = testkit::gif("shared");
    auto tie = build_dictionary(CategoryRegistry({"ok", "thumbs up"}), {{"ok", {shared}}, {"thumbs up", {shared}}});
    auto t = label_pair(tie, testkit::conversation("t", "x", shared));
    c.expect(t && t->reaction == "ok", "equal positions");
    auto skew = build_dictionary(CategoryRegistry({"hug", "kiss"}), {{"hug", {testkit::gif("a"), testkit::gif("b"), shared}},
                                                                    {"kiss", {testkit::gif("c"), shared}}});
    auto k = label_pair(skew, testkit::conversation("k", "x", shared));
    c.expect(k && k->reaction == "kiss", "smaller position");

    std::mt19937_64 rng(8);
    for (int round = 0; round < 300; ++round) {
        std::vector<Placement> ps;
        std::size_t n = 1 + rng() % 6;
        for (std::size_t i = 0; i < n; ++i) ps.push_back({"c" + std::to_string(rng() % 8), 1 + rng() % 3});
        std::string expect;
        std::size_t best = ps[0].position;
        for (auto& p : ps) best = std::min(best, p.position);
        for (auto& p : ps) {
            if (p.position == best && (expect.empty() || p.category < expect)) expect = p.category;
        }
        auto first = resolve_category(ps);
        std::shuffle(ps.begin(), ps.end(), rng);
        c.expect(first == expect && resolve_category(ps) == expect, "round " + std::to_string(round));
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "majority baseline identity and reference rates", 1.0, majority_baseline},
        {2, "clustering matches exhaustive oracle", 10.0, clustering_oracle},
        {3, "similarity sum rule and multi-category count", 5.0, similarity_sum_rule},
        {4, "agreement statistics", 1.0, agreement},
        {5, "LRAP matches brute force", 1.0, lrap_oracle},
        {6, "logistic regression gradient and training", 30.0, logistic_regression},
        {7, "end-to-end determinism and public export", 10.0, pipeline_determinism},
        {8, "label resolution", 1.0, label_resolution},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(secs < cr.budget_seconds, "took " + num(secs) + " s");
        bool ok = check.ok();
        failed += !ok;
        std::printf("%s %d %s (%.3f s)%s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                    ok ? "" : (": " + check.summary()).c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
