#include <random>

#include <gtest/gtest.h>

#include "rgif/eval/metrics.hpp"
#include "support/lrap_oracle.hpp"

using namespace rgif::eval;

TEST(Metrics, PerfectPrediction) {
    std::vector<std::string> g = {"a", "b", "b", "c"};
    auto r = metrics_multiclass(g, g);
    EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(Metrics, HandComputed) {
    auto r = metrics_multiclass({"a", "a", "b"}, {"a", "b", "b"});
    EXPECT_DOUBLE_EQ(r.accuracy, 2.0 / 3);
    ASSERT_EQ(r.per_class.size(), 2u);
    EXPECT_DOUBLE_EQ(r.per_class[0].precision, 1.0);
    EXPECT_DOUBLE_EQ(r.per_class[0].recall, 0.5);
    EXPECT_DOUBLE_EQ(r.per_class[0].f1, 2.0 / 3);
    EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.5);
    EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
    EXPECT_DOUBLE_EQ(r.per_class[1].f1, 2.0 / 3);
    EXPECT_NEAR(r.f1, 2.0 / 3, 1e-15);
}

TEST(Metrics, ZeroDenominators) {
    auto r = metrics_multiclass({"a", "a"}, {"b", "b"});
    EXPECT_DOUBLE_EQ(r.accuracy, 0.0);
    for (auto& c : r.per_class) {
        EXPECT_EQ(c.precision, 0.0);
        EXPECT_EQ(c.f1, 0.0);
    }
    EXPECT_EQ(r.per_class[1].support, 0u);
}

TEST(Metrics, WeightedRecallIsAccuracyAndRelabelInvariant) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 1 + rng() % 40, k = 1 + rng() % 5;
        std::vector<std::string> g, p, g2, p2;
        for (std::size_t i = 0; i < n; ++i) {
            auto gi = rng() % k, pi = rng() % 2 ? gi : rng() % k;
            g.push_back("l" + std::to_string(gi));
            p.push_back("l" + std::to_string(pi));
            g2.push_back("z" + std::to_string(k - gi));
            p2.push_back("z" + std::to_string(k - pi));
        }
        auto r = metrics_multiclass(g, p);
        EXPECT_NEAR(r.recall, r.accuracy, 1e-12);
        for (double v : {r.accuracy, r.precision, r.recall, r.f1}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
        auto r2 = metrics_multiclass(g2, p2);
        EXPECT_DOUBLE_EQ(r2.accuracy, r.accuracy);
        EXPECT_NEAR(r2.f1, r.f1, 1e-12);
    }
}

TEST(Metrics, LengthMismatch) {
    EXPECT_THROW(metrics_multiclass({"a"}, {"a", "b"}), MetricError);
    EXPECT_THROW(metrics_multiclass({}, {}), MetricError);
}

TEST(Lrap, WorkedExamples) {
    EXPECT_EQ(lrap({{0.1, 0.9, 0.2, 0.8}}, {{false, true, false, true}}), 1.0);
    EXPECT_EQ(lrap({{0.9, 0.1, 0.8, 0.2}}, {{false, true, false, true}}), 5.0 / 12.0);
}

TEST(Lrap, AllTrueIsOne) {
    EXPECT_EQ(lrap({{0.3, -1.0, 0.3}}, {{true, true, true}}), 1.0);
}

TEST(Lrap, TiesCountAsAbove) {
    // the true label ties with two false ones: 1 of 3 at or above it
    EXPECT_DOUBLE_EQ(lrap({{0.5, 0.5, 0.5}}, {{true, false, false}}), 1.0 / 3);
}

TEST(Lrap, MatchesBruteForce) {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 500; ++round) {
        std::vector<std::vector<double>> s;
        std::vector<std::vector<bool>> t;
        rgif::testkit::random_lrap_instance(rng, s, t);
        EXPECT_NEAR(lrap(s, t), rgif::testkit::lrap_bruteforce(s, t), 1e-12);
    }
}

TEST(Lrap, Errors) {
    EXPECT_THROW(lrap({{0.1, 0.2}}, {{false, false}}), MetricError);
    EXPECT_THROW(lrap({{0.1, NAN}}, {{true, false}}), MetricError);
    EXPECT_THROW(lrap({{0.1}}, {{true}, {true}}), MetricError);
}
