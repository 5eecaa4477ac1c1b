#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rgif/eval/logreg.hpp"

using namespace rgif::eval;

namespace {

std::vector<SparseVector> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t features) {
    std::normal_distribution<double> gauss;
    std::vector<SparseVector> x(n);
    for (auto& row : x) {
        for (std::uint32_t f = 0; f < features; ++f) {
            if (rng() % 2) row.emplace_back(f, gauss(rng));
        }
    }
    return x;
}

}  // namespace

TEST(SoftmaxObjective, GradientMatchesCentralDifferences) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss;
    for (int round = 0; round < 10; ++round) {
        std::size_t n = 6 + rng() % 10, features = 2 + rng() % 4, classes = 2 + rng() % 3;
        auto x = random_rows(rng, n, features);
        std::vector<std::size_t> y(n);
        for (auto& v : y) v = rng() % classes;
        SoftmaxObjective f(x, y, classes, features, 3.0);
        std::vector<double> w(f.dimension()), grad, scratch;
        for (auto& v : w) v = gauss(rng);
        f(w, grad);
        const double h = 1e-5;
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto plus = w, minus = w;
            plus[j] += h;
            minus[j] -= h;
            double numeric = (f(plus, scratch) - f(minus, scratch)) / (2 * h);
            double scale = std::max(1.0, std::abs(numeric));
            EXPECT_LT(std::abs(numeric - grad[j]) / scale, 1e-4) << "coordinate " << j;
        }
    }
}

TEST(SoftmaxObjective, InterceptsAreNotPenalized) {
    std::vector<SparseVector> x = {{}};
    std::vector<std::size_t> y = {0};
    SoftmaxObjective f(x, y, 2, 1, 0.5);
    std::vector<double> g;
    // weights zero, intercepts large: loss only, no penalty term
    double v = f({0.0, 0.0, 5.0, 0.0}, g);
    EXPECT_NEAR(v, std::log(1.0 + std::exp(-5.0)), 1e-12);
    double w = f({1.0, 0.0, 5.0, 0.0}, g);
    EXPECT_NEAR(w - v, 1.0 / (2 * 0.5), 1e-12);
}

TEST(Logreg, SeparableOneFeature) {
    std::vector<SparseVector> x;
    std::vector<std::string> labels;
    for (int i = 0; i < 20; ++i) {
        x.push_back({{0, i < 10 ? -1.0 - i * 0.1 : 1.0 + i * 0.1}});
        labels.push_back(i < 10 ? "neg" : "pos");
    }
    auto m = train_logreg(x, labels, 1);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) correct += m.predict(x[i]) == labels[i];
    EXPECT_EQ(correct, x.size());
    EXPECT_EQ(m.classes, (std::vector<std::string>{"neg", "pos"}));
}

TEST(Logreg, ObjectiveNeverIncreases) {
    std::mt19937_64 rng(5);
    auto x = random_rows(rng, 80, 6);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back("c" + std::to_string(rng() % 3));
    auto m = train_logreg(x, labels, 6);
    ASSERT_GE(m.objective_trace.size(), 2u);
    for (std::size_t k = 1; k < m.objective_trace.size(); ++k) {
        EXPECT_LE(m.objective_trace[k], m.objective_trace[k - 1]);
    }
    EXPECT_TRUE(m.converged);
    EXPECT_LE(m.iterations, 1000u);
}

TEST(Logreg, DeterministicFromZeroStart) {
    std::mt19937_64 rng(6);
    auto x = random_rows(rng, 40, 5);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back(rng() % 2 ? "p" : "q");
    auto a = train_logreg(x, labels, 5), b = train_logreg(x, labels, 5);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.intercepts, b.intercepts);
}

TEST(Logreg, IterationCapIsHonored) {
    std::mt19937_64 rng(7);
    auto x = random_rows(rng, 60, 8);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back("c" + std::to_string(rng() % 4));
    LogregOptions opt;
    opt.max_iter = 3;
    auto m = train_logreg(x, labels, 8, opt);
    EXPECT_EQ(m.iterations, 3u);
    EXPECT_FALSE(m.converged);
}

TEST(Logreg, Guards) {
    std::vector<SparseVector> x = {{}, {}};
    EXPECT_THROW(train_logreg(x, {"a", "b"}, 0), TrainingError);
    EXPECT_THROW(train_logreg(x, {"a", "a"}, 1), TrainingError);
    EXPECT_THROW(train_logreg(x, {"a"}, 1), TrainingError);
    LogregOptions bad;
    bad.C = 0;
    EXPECT_THROW(train_logreg(x, {"a", "b"}, 1, bad), TrainingError);
    EXPECT_THROW(train_logreg({{{3, 1.0}}, {}}, {"a", "b"}, 2), TrainingError);
}

TEST(Logreg, ScoresAreProbabilities) {
    std::mt19937_64 rng(8);
    auto x = random_rows(rng, 30, 4);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < x.size(); ++i) labels.push_back("c" + std::to_string(i % 3));
    auto m = train_logreg(x, labels, 4);
    for (const auto& row : x) {
        auto p = m.predict_scores(row);
        double sum = 0;
        for (auto v : p) {
            EXPECT_GE(v, 0.0);
            sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}
