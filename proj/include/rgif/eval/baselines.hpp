#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "../json_io.hpp"
#include "../labeler.hpp"
#include "../registry.hpp"
#include "logreg.hpp"
#include "metrics.hpp"
#include "split.hpp"
#include "tfidf.hpp"

namespace rgif::eval {

enum class Task { reaction, sentiment, emotion };
enum class ModelKind { majority, logreg };

inline std::string_view task_name(Task t) {
    switch (t) {
        case Task::reaction: return "reaction";
        case Task::sentiment: return "sentiment";
        case Task::emotion: return "emotion";
    }
    return "reaction";
}

inline Task task_from_name(std::string_view s) {
    if (s == "reaction") return Task::reaction;
    if (s == "sentiment") return Task::sentiment;
    if (s == "emotion") return Task::emotion;
    throw std::invalid_argument("unknown task: " + std::string(s));
}

inline std::string_view model_name(ModelKind m) { return m == ModelKind::majority ? "majority" : "logreg"; }

inline ModelKind model_from_name(std::string_view s) {
    if (s == "majority") return ModelKind::majority;
    if (s == "logreg") return ModelKind::logreg;
    throw std::invalid_argument("unknown model: " + std::string(s));
}

/// Task view of a labeled dataset. `labels` is the single label for reaction
/// and sentiment, and the stratification key (reaction) for emotion.
struct TaskData {
    Task task = Task::reaction;
    std::vector<std::size_t> sample_index;  // positions in the source dataset
    std::vector<std::string> texts;
    std::vector<std::string> labels;
    std::vector<EmotionSet> emotions;

    std::size_t size() const { return texts.size(); }

    TaskData subset(const std::vector<std::size_t>& rows) const {
        TaskData out;
        out.task = task;
        for (auto r : rows) {
            out.sample_index.push_back(sample_index[r]);
            out.texts.push_back(texts[r]);
            out.labels.push_back(labels[r]);
            out.emotions.push_back(emotions[r]);
        }
        return out;
    }
};

/// Sentiment keeps only samples with a sentiment; emotion keeps only samples
/// with at least one emotion.
inline TaskData task_data(const std::vector<LabeledSample>& samples, Task task) {
    TaskData d;
    d.task = task;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (task == Task::sentiment && !s.sentiment) continue;
        if (task == Task::emotion && s.emotions.none()) continue;
        if (!s.root_text) {
            throw std::invalid_argument("sample " + s.root_id + " has no text; training needs the private dataset");
        }
        d.sample_index.push_back(i);
        d.texts.push_back(*s.root_text);
        d.labels.push_back(task == Task::sentiment ? std::string(sentiment_name(*s.sentiment)) : s.reaction);
        d.emotions.push_back(s.emotions);
    }
    return d;
}

/// Most frequent label; ties go to the lexicographically smallest.
inline std::string train_majority(const std::vector<std::string>& labels) {
    if (labels.empty()) throw TrainingError("majority classifier needs training labels");
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

struct BaselineOptions {
    VectorizerOptions vectorizer;
    LogregOptions logreg;
};

/// One binary model per emotion. Emotions that are always or never present in
/// training get a constant score instead of a model.
struct EmotionHead {
    std::optional<LinearModel> model;
    double constant = 0.0;
};

struct BaselineModel {
    Task task = Task::reaction;
    ModelKind kind = ModelKind::majority;
    std::string majority_label;
    std::array<double, kEmotionCount> emotion_prior{};
    TfidfVectorizer vectorizer;
    LinearModel linear;
    std::vector<EmotionHead> emotion_heads;

    std::vector<std::string> predict(const std::vector<std::string>& texts) const {
        if (task == Task::emotion) throw std::logic_error("emotion models produce scores, not labels");
        std::vector<std::string> out;
        out.reserve(texts.size());
        for (const auto& t : texts) {
            out.push_back(kind == ModelKind::majority ? majority_label : linear.predict(vectorizer.transform(t)));
        }
        return out;
    }

    std::vector<std::vector<double>> emotion_scores(const std::vector<std::string>& texts) const {
        if (task != Task::emotion) throw std::logic_error("emotion scores requested from a single-label model");
        std::vector<std::vector<double>> out;
        for (const auto& t : texts) {
            std::vector<double> row(kEmotionCount);
            if (kind == ModelKind::majority) {
                std::copy(emotion_prior.begin(), emotion_prior.end(), row.begin());
            } else {
                auto x = vectorizer.transform(t);
                for (std::size_t e = 0; e < kEmotionCount; ++e) {
                    const auto& head = emotion_heads[e];
                    row[e] = head.model ? head.model->predict_scores(x)[1] : head.constant;
                }
            }
            out.push_back(std::move(row));
        }
        return out;
    }
};

inline BaselineModel train_baseline(const TaskData& train, ModelKind kind, const BaselineOptions& opt = {}) {
    if (train.size() == 0) throw TrainingError("empty training set");
    BaselineModel m;
    m.task = train.task;
    m.kind = kind;
    if (kind == ModelKind::majority) {
        if (train.task == Task::emotion) {
            for (std::size_t e = 0; e < kEmotionCount; ++e) {
                std::size_t hits = 0;
                for (const auto& set : train.emotions) hits += set.test(e);
                m.emotion_prior[e] = static_cast<double>(hits) / static_cast<double>(train.size());
            }
        } else {
            m.majority_label = train_majority(train.labels);
        }
        return m;
    }

    m.vectorizer = TfidfVectorizer(opt.vectorizer);
    m.vectorizer.fit(train.texts);
    auto x = m.vectorizer.transform_all(train.texts);
    if (train.task != Task::emotion) {
        m.linear = train_logreg(x, train.labels, m.vectorizer.feature_count(), opt.logreg);
        return m;
    }
    m.emotion_heads.resize(kEmotionCount);
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        std::vector<std::string> y;
        std::size_t hits = 0;
        for (const auto& set : train.emotions) {
            y.push_back(set.test(e) ? "1" : "0");
            hits += set.test(e);
        }
        if (hits == 0 || hits == train.size()) {
            m.emotion_heads[e].constant = hits == 0 ? 0.0 : 1.0;
        } else {
            m.emotion_heads[e].model = train_logreg(x, y, m.vectorizer.feature_count(), opt.logreg);
        }
    }
    return m;
}

struct CrossValidation {
    std::size_t folds = 0;
    std::vector<double> fold_scores;  // accuracy, or LRAP for the emotion task
    double mean = 0.0;
};

inline EvalReport evaluate_baseline(const BaselineModel& model, const TaskData& test) {
    if (test.size() == 0) throw MetricError("empty evaluation set");
    EvalReport r;
    if (model.task == Task::emotion) {
        std::vector<std::vector<bool>> truth;
        for (const auto& set : test.emotions) {
            std::vector<bool> row(kEmotionCount);
            for (std::size_t e = 0; e < kEmotionCount; ++e) row[e] = set.test(e);
            truth.push_back(std::move(row));
        }
        r.samples = test.size();
        r.lrap = lrap(model.emotion_scores(test.texts), truth);
    } else {
        r = metrics_multiclass(test.labels, model.predict(test.texts));
    }
    r.task = std::string(task_name(model.task));
    r.model = std::string(model_name(model.kind));
    return r;
}

inline CrossValidation cross_validate(const TaskData& train, ModelKind kind, std::size_t k, std::uint64_t seed,
                                      const BaselineOptions& opt = {}) {
    CrossValidation cv;
    cv.folds = k;
    auto folds = kfold_stratified(train.labels, k, seed);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> fit_rows;
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) fit_rows.insert(fit_rows.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(fit_rows.begin(), fit_rows.end());
        auto model = train_baseline(train.subset(fit_rows), kind, opt);
        auto report = evaluate_baseline(model, train.subset(folds[f]));
        cv.fold_scores.push_back(report.lrap ? *report.lrap : report.accuracy);
    }
    double sum = 0.0;
    for (auto s : cv.fold_scores) sum += s;
    cv.mean = sum / static_cast<double>(k);
    return cv;
}

struct BaselineRun {
    HoldoutSplit split;
    BaselineModel model;
    EvalReport report;
    std::optional<CrossValidation> cv;
};

struct RunOptions {
    double holdout = 0.10;
    std::uint64_t seed = 0;
    std::size_t cv_folds = 5;  // 0 disables; only used for logreg
    BaselineOptions baseline;
};

/// Stratified holdout, optional K-fold CV on the training part, fit on the
/// whole training part, report on the holdout.
inline BaselineRun run_baseline(const TaskData& data, ModelKind kind, const RunOptions& opt = {}) {
    BaselineRun run;
    run.split = holdout_split(data.labels, opt.holdout, opt.seed);
    auto train = data.subset(run.split.train);
    auto test = data.subset(run.split.test);
    if (kind == ModelKind::logreg && opt.cv_folds >= 2) {
        run.cv = cross_validate(train, kind, opt.cv_folds, opt.seed, opt.baseline);
    }
    run.model = train_baseline(train, kind, opt.baseline);
    run.report = evaluate_baseline(run.model, test);
    return run;
}

// ---- serialization ----------------------------------------------------------

inline ordered_json linear_to_json(const LinearModel& m) {
    ordered_json j;
    j["classes"] = m.classes;
    j["features"] = m.features;
    j["C"] = m.C;
    j["max_iter"] = m.max_iter;
    j["iterations"] = m.iterations;
    j["converged"] = m.converged;
    j["intercepts"] = m.intercepts;
    j["weights"] = m.weights;
    return j;
}

inline LinearModel linear_from_json(const nlohmann::json& j) {
    LinearModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.features = j.at("features").get<std::size_t>();
    m.C = j.at("C").get<double>();
    m.max_iter = j.at("max_iter").get<std::size_t>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.converged = j.at("converged").get<bool>();
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    if (m.intercepts.size() != m.classes.size() || m.weights.size() != m.classes.size() * m.features) {
        throw FormatError("linear model tables do not match its shape");
    }
    return m;
}

inline ordered_json model_to_json(const BaselineModel& m) {
    ordered_json j;
    j["task"] = std::string(task_name(m.task));
    j["model"] = std::string(model_name(m.kind));
    if (m.kind == ModelKind::majority) {
        if (m.task == Task::emotion) {
            j["emotion_prior"] = m.emotion_prior;
        } else {
            j["majority_label"] = m.majority_label;
        }
        return j;
    }
    ordered_json vec;
    vec["min_df"] = m.vectorizer.options().min_df;
    vec["max_features"] = m.vectorizer.options().max_features;
    vec["use_stopwords"] = m.vectorizer.options().use_stopwords;
    vec["documents"] = m.vectorizer.document_count();
    vec["vocabulary"] = m.vectorizer.vocabulary();
    vec["df"] = m.vectorizer.document_frequency();
    vec["idf"] = m.vectorizer.idf();
    j["vectorizer"] = std::move(vec);
    if (m.task == Task::emotion) {
        auto heads = ordered_json::array();
        for (const auto& h : m.emotion_heads) {
            heads.push_back(h.model ? linear_to_json(*h.model) : ordered_json{{"constant", h.constant}});
        }
        j["emotion_heads"] = std::move(heads);
    } else {
        j["linear"] = linear_to_json(m.linear);
    }
    return j;
}

inline BaselineModel model_from_json(const nlohmann::json& j) {
    try {
        BaselineModel m;
        m.task = task_from_name(j.at("task").get<std::string>());
        m.kind = model_from_name(j.at("model").get<std::string>());
        if (m.kind == ModelKind::majority) {
            if (m.task == Task::emotion) {
                m.emotion_prior = j.at("emotion_prior").get<std::array<double, kEmotionCount>>();
            } else {
                m.majority_label = j.at("majority_label").get<std::string>();
            }
            return m;
        }
        const auto& v = j.at("vectorizer");
        m.vectorizer = TfidfVectorizer(VectorizerOptions{v.at("min_df").get<std::size_t>(),
                                                         v.at("max_features").get<std::size_t>(),
                                                         v.at("use_stopwords").get<bool>()});
        m.vectorizer.restore(v.at("vocabulary").get<std::vector<std::string>>(),
                             v.at("df").get<std::vector<std::size_t>>(), v.at("idf").get<std::vector<double>>(),
                             v.at("documents").get<std::size_t>());
        if (m.task == Task::emotion) {
            for (const auto& h : j.at("emotion_heads")) {
                EmotionHead head;
                if (h.contains("constant")) {
                    head.constant = h["constant"].get<double>();
                } else {
                    head.model = linear_from_json(h);
                }
                m.emotion_heads.push_back(std::move(head));
            }
            if (m.emotion_heads.size() != kEmotionCount) throw FormatError("emotion model needs 27 heads");
        } else {
            m.linear = linear_from_json(j.at("linear"));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model: ") + e.what());
    }
}

/// The TF-IDF variant in use, recorded in every report.
inline ordered_json tfidf_variant(const VectorizerOptions& v) {
    ordered_json j;
    j["tokenizer"] = "lowercase unicode-word";
    j["ngrams"] = "1-2";
    j["tf"] = "raw count";
    j["idf"] = "ln((1+N)/(1+df))+1";
    j["norm"] = "l2";
    j["min_df"] = v.min_df;
    j["max_features"] = v.max_features;
    j["stopwords"] = v.use_stopwords ? "english" : "none";
    return j;
}

inline ordered_json eval_report_to_json(const EvalReport& r) {
    ordered_json j;
    j["task"] = r.task;
    j["model"] = r.model;
    j["samples"] = r.samples;
    if (r.lrap) {
        j["lrap"] = *r.lrap;
        return j;
    }
    j["accuracy"] = r.accuracy;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    auto per = ordered_json::array();
    for (const auto& c : r.per_class) {
        per.push_back(ordered_json{{"label", c.label},
                                   {"precision", c.precision},
                                   {"recall", c.recall},
                                   {"f1", c.f1},
                                   {"support", c.support}});
    }
    j["per_class"] = std::move(per);
    return j;
}

/// Aligned table with the Acc / P / R / F1 / LRAP columns; rates in percent,
/// LRAP as a fraction. Rows can come from external models.
inline std::string format_report_table(const std::vector<EvalReport>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "Task" << std::setw(10) << "Model" << std::right << std::setw(7) << "Acc"
       << std::setw(7) << "P" << std::setw(7) << "R" << std::setw(7) << "F1" << std::setw(8) << "LRAP" << '\n';
    os << std::fixed;
    for (const auto& r : rows) {
        os << std::left << std::setw(10) << r.task << std::setw(10) << r.model << std::right;
        if (r.lrap) {
            os << std::setw(7) << "-" << std::setw(7) << "-" << std::setw(7) << "-" << std::setw(7) << "-"
               << std::setw(8) << std::setprecision(3) << *r.lrap << '\n';
        } else {
            os << std::setprecision(1) << std::setw(7) << 100.0 * r.accuracy << std::setw(7) << 100.0 * r.precision
               << std::setw(7) << 100.0 * r.recall << std::setw(7) << 100.0 * r.f1 << std::setw(8) << "-" << '\n';
        }
    }
    return os.str();
}

}  // namespace rgif::eval
