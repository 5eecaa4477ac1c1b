#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfidf.hpp"

namespace rgif::eval {

class TrainingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LogregOptions {
    double C = 3.0;
    std::size_t max_iter = 1000;
    double tolerance = 1e-6;  // on the gradient's L2 norm
    std::size_t history = 10;
};

/// Multinomial cross-entropy summed over samples plus (1/(2C)) * ||W||^2.
/// Parameters are laid out as the class-major weight matrix followed by one
/// unpenalized intercept per class.
class SoftmaxObjective {
public:
    SoftmaxObjective(const std::vector<SparseVector>& x, const std::vector<std::size_t>& y, std::size_t classes,
                     std::size_t features, double C)
        : x_(x), y_(y), classes_(classes), features_(features), C_(C) {}

    std::size_t dimension() const { return classes_ * (features_ + 1); }

    double operator()(const std::vector<double>& w, std::vector<double>& grad) const {
        grad.assign(w.size(), 0.0);
        const std::size_t bias = classes_ * features_;
        std::vector<double> z(classes_);
        double loss = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            for (std::size_t k = 0; k < classes_; ++k) {
                double acc = w[bias + k];
                const double* row = &w[k * features_];
                for (auto& [f, v] : x_[i]) acc += row[f] * v;
                z[k] = acc;
            }
            double zmax = *std::max_element(z.begin(), z.end());
            double denom = 0.0;
            for (auto& v : z) denom += std::exp(v - zmax);
            double log_norm = zmax + std::log(denom);
            loss += log_norm - z[y_[i]];
            for (std::size_t k = 0; k < classes_; ++k) {
                double g = std::exp(z[k] - log_norm) - (k == y_[i] ? 1.0 : 0.0);
                grad[bias + k] += g;
                double* grow = &grad[k * features_];
                for (auto& [f, v] : x_[i]) grow[f] += g * v;
            }
        }
        double penalty = 0.0;
        for (std::size_t j = 0; j < bias; ++j) {
            penalty += w[j] * w[j];
            grad[j] += w[j] / C_;
        }
        return loss + penalty / (2.0 * C_);
    }

private:
    const std::vector<SparseVector>& x_;
    const std::vector<std::size_t>& y_;
    std::size_t classes_;
    std::size_t features_;
    double C_;
};

struct LbfgsResult {
    std::vector<double> x;
    std::vector<double> objective_trace;  // value after each accepted step, starting point first
    std::size_t iterations = 0;
    bool converged = false;
};

/// Limited-memory BFGS with a backtracking Armijo line search. Curvature pairs
/// with s.y <= 0 are skipped so the search direction stays a descent direction.
inline LbfgsResult minimize_lbfgs(const std::function<double(const std::vector<double>&, std::vector<double>&)>& f,
                                  std::vector<double> x, const LogregOptions& opt) {
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };
    LbfgsResult res;
    std::vector<double> g;
    double fx = f(x, g);
    res.objective_trace.push_back(fx);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    const std::size_t n = x.size();
    std::vector<double> d(n), x_new(n), g_new(n);

    for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
        if (std::sqrt(dot(g, g)) <= opt.tolerance) {
            res.converged = true;
            break;
        }
        // two-loop recursion
        d = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * dot(s_hist[k], d);
            for (std::size_t j = 0; j < n; ++j) d[j] -= alpha[k] * y_hist[k][j];
        }
        double gamma = s_hist.empty() ? 1.0 / std::max(1.0, std::sqrt(dot(g, g)))
                                      : dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (auto& v : d) v *= gamma;
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double beta = rho_hist[k] * dot(y_hist[k], d);
            for (std::size_t j = 0; j < n; ++j) d[j] += s_hist[k][j] * (alpha[k] - beta);
        }
        for (auto& v : d) v = -v;
        double slope = dot(g, d);
        if (slope >= 0.0) {
            // history went stale; restart from steepest descent
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t j = 0; j < n; ++j) d[j] = -g[j] / std::max(1.0, std::sqrt(dot(g, g)));
            slope = dot(g, d);
        }

        double step = 1.0;
        double f_new = 0.0;
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * d[j];
            f_new = f(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> s(n), yv(n);
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = x_new[j] - x[j];
            yv[j] = g_new[j] - g[j];
        }
        double sy = dot(s, yv);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(yv, yv))) {
            if (s_hist.size() == opt.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
        }
        std::swap(x, x_new);
        std::swap(g, g_new);
        fx = f_new;
        res.objective_trace.push_back(fx);
    }
    if (!res.converged && std::sqrt(dot(g, g)) <= opt.tolerance) res.converged = true;
    res.x = std::move(x);
    return res;
}

/// Trained multinomial logistic regression. Classes are sorted label names.
struct LinearModel {
    std::vector<std::string> classes;
    std::size_t features = 0;
    std::vector<double> weights;     // classes x features, row-major
    std::vector<double> intercepts;  // one per class
    double C = 3.0;
    std::size_t max_iter = 1000;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;

    std::vector<double> decision(const SparseVector& x) const {
        std::vector<double> z(classes.size());
        for (std::size_t k = 0; k < classes.size(); ++k) {
            double acc = intercepts[k];
            for (auto& [f, v] : x) acc += weights[k * features + f] * v;
            z[k] = acc;
        }
        return z;
    }

    /// Softmax probabilities in class order.
    std::vector<double> predict_scores(const SparseVector& x) const {
        auto z = decision(x);
        double zmax = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (auto& v : z) sum += (v = std::exp(v - zmax));
        for (auto& v : z) v /= sum;
        return z;
    }

    /// Highest score; the earlier class wins ties.
    const std::string& predict(const SparseVector& x) const {
        auto z = decision(x);
        return classes[static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin())];
    }
};

inline LinearModel train_logreg(const std::vector<SparseVector>& x, const std::vector<std::string>& labels,
                                std::size_t features, const LogregOptions& opt = {}) {
    if (x.size() != labels.size()) throw TrainingError("feature rows and labels differ in length");
    if (features == 0) throw TrainingError("logistic regression needs at least one feature");
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() < 2) throw TrainingError("logistic regression needs at least 2 classes in training data");
    if (!(opt.C > 0.0)) throw TrainingError("regularization strength C must be positive");

    LinearModel model;
    model.classes.assign(uniq.begin(), uniq.end());
    model.features = features;
    model.C = opt.C;
    model.max_iter = opt.max_iter;
    std::vector<std::size_t> y;
    y.reserve(labels.size());
    for (const auto& l : labels) {
        y.push_back(static_cast<std::size_t>(
            std::lower_bound(model.classes.begin(), model.classes.end(), l) - model.classes.begin()));
    }
    for (const auto& row : x) {
        for (auto& [f, _] : row) {
            if (f >= features) throw TrainingError("feature index out of range");
        }
    }

    SoftmaxObjective objective(x, y, model.classes.size(), features, opt.C);
    auto result = minimize_lbfgs([&](const std::vector<double>& w, std::vector<double>& g) { return objective(w, g); },
                                 std::vector<double>(objective.dimension(), 0.0), opt);
    const auto bias = model.classes.size() * features;
    model.weights.assign(result.x.begin(), result.x.begin() + static_cast<std::ptrdiff_t>(bias));
    model.intercepts.assign(result.x.begin() + static_cast<std::ptrdiff_t>(bias), result.x.end());
    model.iterations = result.iterations;
    model.converged = result.converged;
    model.objective_trace = std::move(result.objective_trace);
    return model;
}

}  // namespace rgif::eval
