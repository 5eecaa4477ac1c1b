#pragma once

// Command implementations behind the `rgif` tool. Kept in a header so tests
// can drive whole pipelines in-process.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affinity.hpp"
#include "augment.hpp"
#include "dictionary.hpp"
#include "eval/baselines.hpp"
#include "ingest.hpp"
#include "json_io.hpp"
#include "labeler.hpp"
#include "registry.hpp"

namespace rgif::cli {

/// Failure carrying a machine-readable code for the one-line error report.
class CommandError : public std::runtime_error {
public:
    CommandError(std::string code, const std::string& message, std::string path = {})
        : std::runtime_error(message), code_(std::move(code)), path_(std::move(path)) {}
    const std::string& code() const { return code_; }
    const std::string& path() const { return path_; }

private:
    std::string code_;
    std::string path_;
};

namespace detail {

namespace fs = std::filesystem;

inline void require_file(const std::string& path, const char* what) {
    if (!fs::is_regular_file(path)) {
        throw CommandError("missing_file", std::string(what) + " not found: " + path, path);
    }
}

inline void require_dir(const std::string& path, const char* what) {
    if (!fs::is_directory(path)) {
        throw CommandError("missing_file", std::string(what) + " directory not found: " + path, path);
    }
}

inline std::vector<std::string> json_files(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& de : fs::directory_iterator(dir)) {
        if (de.is_regular_file() && de.path().extension() == ".json") out.push_back(de.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Accumulates the JSON run report written next to every artifact.
class RunReport {
public:
    RunReport(std::string command, std::uint64_t seed) {
        json_["command"] = std::move(command);
        json_["seed"] = seed;
        json_["config"] = ordered_json::object();
        json_["inputs"] = ordered_json::array();
        json_["outputs"] = ordered_json::array();
        json_["counts"] = ordered_json::object();
    }

    ordered_json& config() { return json_["config"]; }
    ordered_json& counts() { return json_["counts"]; }
    ordered_json& root() { return json_; }

    void input(const std::string& path) { json_["inputs"].push_back(entry(path)); }

    void input_dir(const std::string& dir) {
        for (const auto& f : json_files(dir)) input(f);
    }

    void output(const std::string& path) { json_["outputs"].push_back(entry(path)); }

    void write(const std::string& path) const { write_json_file(path, json_); }

private:
    static ordered_json entry(const std::string& path) {
        return ordered_json{{"path", path}, {"sha256", to_hex(sha256_file(path))}};
    }

    ordered_json json_;
};

inline std::string report_path(const std::string& explicit_path, const std::string& artifact) {
    return explicit_path.empty() ? artifact + ".run.json" : explicit_path;
}

inline CategoryRegistry load_registry_or_default(const std::string& path) {
    if (path.empty()) return default_category_registry();
    require_file(path, "registry file");
    return registry_from_json(read_json_file(path));
}

}  // namespace detail

struct Common {
    std::uint64_t seed = 0;
    std::string report;
};

inline int cmd_build_dict(const Common& common, const std::string& listings_dir, const std::string& out,
                          const std::string& registry_path, std::size_t max_per_category, std::size_t digest_bytes,
                          std::ostream& os) {
    detail::require_dir(listings_dir, "listings");
    auto registry = detail::load_registry_or_default(registry_path);
    auto dict = build_dictionary(registry, load_listings(listings_dir, digest_bytes), max_per_category, digest_bytes);
    save_dictionary(dict, out);

    detail::RunReport rep("build-dict", common.seed);
    rep.config()["max_per_category"] = max_per_category;
    rep.config()["digest_bytes"] = digest_bytes;
    if (!registry_path.empty()) rep.input(registry_path);
    rep.input_dir(listings_dir);
    rep.output(out);
    rep.counts()["categories"] = registry.size();
    rep.counts()["entries"] = dict.size();
    rep.counts()["distinct_gifs"] = dict.group_count();
    rep.counts()["multi_category_gifs"] = dict.multi_category_count();
    rep.write(detail::report_path(common.report, out));
    os << "dictionary: " << dict.size() << " entries, " << dict.group_count() << " distinct gifs, "
       << dict.multi_category_count() << " in 2+ categories\n";
    return 0;
}

inline int cmd_label(const Common& common, const std::string& dict_path, const std::string& pairs_path,
                     const std::string& rules_path, const std::string& out, std::ostream& os) {
    detail::require_file(dict_path, "dictionary file");
    detail::require_file(pairs_path, "pairs file");
    FilterRules rules;
    if (!rules_path.empty()) {
        detail::require_file(rules_path, "rules file");
        rules = rules_from_json(read_json_file(rules_path));
    }
    auto dict = load_dictionary(dict_path);
    auto loaded = load_pairs(pairs_path, dict.digest_bytes());
    auto corpus = label_corpus(dict, loaded.pairs, rules);
    write_text_file(out, serialize_samples(corpus.samples));

    detail::RunReport rep("label", common.seed);
    rep.config()["rules"] = rules_to_json(rules);
    rep.input(dict_path);
    rep.input(pairs_path);
    if (!rules_path.empty()) rep.input(rules_path);
    rep.output(out);
    auto& counts = rep.counts();
    counts["records"] = loaded.pairs.size() + loaded.errors.size();
    counts["malformed"] = loaded.errors.size();
    auto report_json = report_to_json(corpus.report);
    for (auto& [k, v] : report_json.items()) counts[k] = v;
    auto errors = ordered_json::array();
    for (const auto& e : loaded.errors) errors.push_back(ordered_json{{"line", e.line}, {"message", e.message}});
    rep.root()["load_errors"] = std::move(errors);
    if (!corpus.samples.empty()) {
        auto dist = distribution(corpus.samples);
        auto shares = ordered_json::array();
        for (const auto& s : dist.shares) {
            shares.push_back(ordered_json{{"category", s.category}, {"count", s.count}, {"proportion", s.proportion}});
        }
        rep.root()["distribution"] = std::move(shares);
        rep.root()["top_7_share"] = dist.top_k_share(7);
    }
    rep.write(detail::report_path(common.report, out));
    for (const auto& e : loaded.errors) os << pairs_path << ":" << e.line << ": " << e.message << "\n";
    os << "labeled " << corpus.report.labeled << " of " << loaded.pairs.size() << " pairs ("
       << corpus.report.rejected_total() << " filtered, " << corpus.report.discarded_not_found
       << " gif not found, " << loaded.errors.size() << " malformed)\n";
    return 0;
}

struct ClusterArgs {
    std::string dict;
    std::string out_dendrogram;
    std::string format = "json";
    std::size_t cut = 2;
    std::optional<std::vector<std::string>> exclude;
    std::string negative;
    std::string out_sentiment_map;
};

/// Dendrogram over all categories; the sentiment cut reclusters without the
/// excluded ones.
inline int cmd_cluster(const Common& common, const ClusterArgs& a, std::ostream& os) {
    detail::require_file(a.dict, "dictionary file");
    if (a.format != "json" && a.format != "newick") {
        throw CommandError("invalid_input", "unknown dendrogram format: " + a.format);
    }
    auto dict = load_dictionary(a.dict);
    auto sim = similarity_matrix(dict);
    auto tree = cluster(sim);
    write_text_file(a.out_dendrogram,
                    export_dendrogram(tree, a.format == "json" ? DendrogramFormat::json : DendrogramFormat::newick));

    std::vector<std::string> excluded;
    for (const auto& name : a.exclude.value_or(default_sentiment_exclusions())) {
        if (dict.registry().contains(name)) excluded.push_back(name);
    }
    auto reduced = sim.without(excluded);
    if (reduced.size() < a.cut) {
        throw CommandError("invalid_input", "cut larger than the number of clustered categories");
    }
    auto partition = cut_clusters(cluster(reduced), a.cut);

    detail::RunReport rep("cluster", common.seed);
    rep.config()["format"] = a.format;
    rep.config()["cut"] = a.cut;
    rep.config()["excluded"] = excluded;
    rep.config()["negative"] = a.negative;
    rep.input(a.dict);
    rep.output(a.out_dendrogram);
    rep.root()["partition"] = partition;
    auto scores = ordered_json::array();
    for (std::size_t k = 0; k < tree.merge_count(); ++k) scores.push_back(tree.merge(k).score);
    rep.root()["merge_scores"] = std::move(scores);

    if (!a.out_sentiment_map.empty()) {
        if (a.cut != 2) throw CommandError("invalid_input", "a sentiment map needs --cut 2");
        if (a.negative.empty()) throw CommandError("invalid_input", "a sentiment map needs --negative <category>");
        std::optional<std::size_t> neg;
        for (std::size_t c = 0; c < partition.size(); ++c) {
            if (std::find(partition[c].begin(), partition[c].end(), a.negative) != partition[c].end()) neg = c;
        }
        if (!neg) throw CommandError("invalid_input", "category '" + a.negative + "' is in no sentiment cluster");
        auto smap = derive_sentiment_map(partition, *neg, excluded);
        write_json_file(a.out_sentiment_map, sentiment_map_to_json(smap));
        rep.output(a.out_sentiment_map);
    }
    rep.counts()["categories"] = sim.size();
    rep.counts()["clusters"] = partition.size();
    rep.write(detail::report_path(common.report, a.out_dendrogram));
    os << to_newick(tree) << "\n";
    for (std::size_t c = 0; c < partition.size(); ++c) {
        os << "cluster " << c << ":";
        for (const auto& n : partition[c]) os << " [" << n << "]";
        os << "\n";
    }
    return 0;
}

struct AugmentArgs {
    std::string dataset;
    std::string sentiment_map;
    std::string sheets;
    std::string out;
    std::string registry;
    std::string dict;
    std::string out_emotion_map;
};

inline int cmd_augment(const Common& common, const AugmentArgs& a, std::ostream& os) {
    detail::require_file(a.dataset, "dataset file");
    detail::require_file(a.sentiment_map, "sentiment map file");
    detail::require_dir(a.sheets, "annotation sheets");
    CategoryRegistry registry;
    if (!a.dict.empty()) {
        detail::require_file(a.dict, "dictionary file");
        registry = load_dictionary(a.dict).registry();
    } else {
        registry = detail::load_registry_or_default(a.registry);
    }
    auto samples = load_samples(a.dataset);
    auto smap = sentiment_map_from_json(read_json_file(a.sentiment_map));
    auto sheets = load_sheets(a.sheets, registry);
    if (sheets.size() < 2) throw CommandError("invalid_input", "need at least 2 annotation sheets in " + a.sheets);
    auto emap = majority_mapping(sheets);
    samples = apply_emotions(apply_sentiment(std::move(samples), smap), emap);
    write_text_file(a.out, serialize_samples(samples));

    detail::RunReport rep("augment", common.seed);
    rep.input(a.dataset);
    rep.input(a.sentiment_map);
    rep.input_dir(a.sheets);
    if (!a.dict.empty()) rep.input(a.dict);
    if (!a.registry.empty()) rep.input(a.registry);
    rep.output(a.out);
    if (!a.out_emotion_map.empty()) {
        write_json_file(a.out_emotion_map, emotion_map_to_json(emap, registry));
        rep.output(a.out_emotion_map);
    }

    auto kappa_json = [](auto&& compute) -> ordered_json {
        try {
            return compute();
        } catch (const DegenerateAgreement&) {
            return "degenerate";
        }
    };
    ordered_json agreement;
    ordered_json pairs = ordered_json::object();
    for (std::size_t i = 0; i < sheets.size(); ++i) {
        for (std::size_t j = i + 1; j < sheets.size(); ++j) {
            auto key = "kappa_" + std::to_string(i + 1) + std::to_string(j + 1);
            pairs[key] = kappa_json([&] { return cohen_kappa(sheets[i], sheets[j]); });
            os << key << " (" << sheets[i].annotator_id << ", " << sheets[j].annotator_id
               << ") = " << pairs[key].dump() << "\n";
        }
    }
    agreement["annotators"] = ordered_json::array();
    for (const auto& s : sheets) agreement["annotators"].push_back(s.annotator_id);
    agreement["items"] = registry.size() * kEmotionCount;
    agreement["cohen"] = std::move(pairs);
    agreement["fleiss"] = kappa_json([&] { return fleiss_kappa(sheets); });
    os << "kappa_F = " << agreement["fleiss"].dump() << "\n";
    rep.root()["agreement"] = std::move(agreement);

    std::size_t pos = 0, neg = 0, none = 0;
    for (const auto& s : samples) {
        if (!s.sentiment) ++none;
        else if (*s.sentiment == Sentiment::positive) ++pos;
        else ++neg;
    }
    rep.counts()["samples"] = samples.size();
    rep.counts()["positive"] = pos;
    rep.counts()["negative"] = neg;
    rep.counts()["no_sentiment"] = none;
    rep.write(detail::report_path(common.report, a.out));
    return 0;
}

inline ordered_json split_to_json(const eval::HoldoutSplit& split, eval::Task task, double holdout,
                                  std::uint64_t seed) {
    ordered_json j;
    j["task"] = std::string(eval::task_name(task));
    j["holdout"] = holdout;
    j["seed"] = seed;
    j["train"] = split.train;
    j["test"] = split.test;
    j["warnings"] = split.warnings;
    return j;
}

inline eval::HoldoutSplit split_from_json(const nlohmann::json& j, std::optional<eval::Task> expect = std::nullopt,
                                          const std::string& path = {}) {
    if (expect && j.contains("task") && j["task"] != std::string(eval::task_name(*expect))) {
        throw CommandError("invalid_input",
                           "split was made for task " + j["task"].dump() + ", not " +
                               std::string(eval::task_name(*expect)),
                           path);
    }
    eval::HoldoutSplit s;
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
}

// Split files index rows of the task view, not lines of the dataset.
inline int cmd_split(const Common& common, const std::string& dataset, const std::string& task_name, double holdout,
                     const std::string& out, std::ostream& os) {
    detail::require_file(dataset, "dataset file");
    auto task = eval::task_from_name(task_name);
    auto data = eval::task_data(load_samples(dataset), task);
    if (data.size() == 0) throw CommandError("invalid_input", "no samples for task " + task_name);
    auto split = eval::holdout_split(data.labels, holdout, common.seed);
    write_json_file(out, split_to_json(split, task, holdout, common.seed));
    detail::RunReport rep("split", common.seed);
    rep.config()["task"] = task_name;
    rep.config()["holdout"] = holdout;
    rep.input(dataset);
    rep.output(out);
    rep.counts()["train"] = split.train.size();
    rep.counts()["test"] = split.test.size();
    rep.write(detail::report_path(common.report, out));
    for (const auto& w : split.warnings) os << "warning: " << w << "\n";
    os << "split: " << split.train.size() << " train, " << split.test.size() << " test\n";
    return 0;
}

struct TrainArgs {
    std::string dataset;
    std::string task = "reaction";
    std::string model = "majority";
    std::string split;
    double holdout = 0.10;
    std::size_t cv_folds = 5;
    double C = 3.0;
    std::size_t max_iter = 1000;
    std::size_t min_df = 2;
    std::size_t max_features = 1000;
    std::string out_model;
    std::string out_report;
};

inline void write_eval_outputs(const std::string& path, const eval::EvalReport& report,
                               const std::optional<eval::CrossValidation>& cv, const eval::BaselineOptions& opt,
                               std::size_t train_size) {
    auto j = eval_report_to_json(report);
    j["train_samples"] = train_size;
    if (report.model == "logreg") {
        j["tfidf"] = eval::tfidf_variant(opt.vectorizer);
        j["logreg"] = ordered_json{{"C", opt.logreg.C}, {"max_iter", opt.logreg.max_iter},
                                   {"tolerance", opt.logreg.tolerance}, {"solver", "lbfgs"}};
    }
    if (cv) j["cv"] = ordered_json{{"folds", cv->folds}, {"scores", cv->fold_scores}, {"mean", cv->mean}};
    write_json_file(path, j);
    write_text_file(path + ".txt", eval::format_report_table({report}));
}

inline int cmd_train(const Common& common, const TrainArgs& a, std::ostream& os) {
    detail::require_file(a.dataset, "dataset file");
    if (!a.split.empty()) detail::require_file(a.split, "split file");
    auto task = eval::task_from_name(a.task);
    auto kind = eval::model_from_name(a.model);
    auto data = eval::task_data(load_samples(a.dataset), task);
    if (data.size() == 0) throw CommandError("invalid_input", "no samples for task " + a.task);

    eval::RunOptions opt;
    opt.holdout = a.holdout;
    opt.seed = common.seed;
    opt.cv_folds = a.cv_folds;
    opt.baseline.logreg.C = a.C;
    opt.baseline.logreg.max_iter = a.max_iter;
    opt.baseline.vectorizer.min_df = a.min_df;
    opt.baseline.vectorizer.max_features = a.max_features;

    eval::BaselineRun run;
    if (a.split.empty()) {
        run = eval::run_baseline(data, kind, opt);
    } else {
        run.split = split_from_json(read_json_file(a.split), task, a.split);
        for (auto idx : run.split.train) {
            if (idx >= data.size()) throw CommandError("invalid_input", "split does not match dataset", a.split);
        }
        for (auto idx : run.split.test) {
            if (idx >= data.size()) throw CommandError("invalid_input", "split does not match dataset", a.split);
        }
        auto train = data.subset(run.split.train);
        if (kind == eval::ModelKind::logreg && opt.cv_folds >= 2) {
            run.cv = eval::cross_validate(train, kind, opt.cv_folds, opt.seed, opt.baseline);
        }
        run.model = eval::train_baseline(train, kind, opt.baseline);
        run.report = eval::evaluate_baseline(run.model, data.subset(run.split.test));
    }

    write_json_file(a.out_model, eval::model_to_json(run.model));
    detail::RunReport rep("train-baseline", common.seed);
    rep.config()["task"] = a.task;
    rep.config()["model"] = a.model;
    rep.config()["holdout"] = a.holdout;
    rep.config()["cv_folds"] = a.cv_folds;
    rep.config()["C"] = a.C;
    rep.config()["max_iter"] = a.max_iter;
    rep.input(a.dataset);
    if (!a.split.empty()) rep.input(a.split);
    rep.output(a.out_model);
    if (!a.out_report.empty()) {
        write_eval_outputs(a.out_report, run.report, run.cv, opt.baseline, run.split.train.size());
        rep.output(a.out_report);
        rep.output(a.out_report + ".txt");
    }
    rep.counts()["train"] = run.split.train.size();
    rep.counts()["test"] = run.split.test.size();
    if (kind == eval::ModelKind::logreg && task != eval::Task::emotion) {
        rep.counts()["lbfgs_iterations"] = run.model.linear.iterations;
        rep.root()["converged"] = run.model.linear.converged;
    }
    rep.write(detail::report_path(common.report, a.out_model));
    for (const auto& w : run.split.warnings) os << "warning: " << w << "\n";
    os << eval::format_report_table({run.report});
    return 0;
}

inline int cmd_evaluate(const Common& common, const std::string& dataset, const std::string& model_path,
                        const std::string& split_path, const std::string& out_report, std::ostream& os) {
    detail::require_file(dataset, "dataset file");
    detail::require_file(model_path, "model file");
    detail::require_file(split_path, "split file");
    auto model = eval::model_from_json(read_json_file(model_path));
    auto data = eval::task_data(load_samples(dataset), model.task);
    auto split = split_from_json(read_json_file(split_path), model.task, split_path);
    for (auto idx : split.test) {
        if (idx >= data.size()) throw CommandError("invalid_input", "split does not match dataset", split_path);
    }
    auto report = eval::evaluate_baseline(model, data.subset(split.test));
    write_eval_outputs(out_report, report, std::nullopt, {}, split.train.size());
    detail::RunReport rep("evaluate", common.seed);
    rep.input(dataset);
    rep.input(model_path);
    rep.input(split_path);
    rep.output(out_report);
    rep.counts()["test"] = split.test.size();
    rep.write(detail::report_path(common.report, out_report));
    os << eval::format_report_table({report});
    return 0;
}

inline int cmd_export(const Common& common, const std::string& dataset, const std::string& mode_name,
                      const std::string& out, std::ostream& os) {
    detail::require_file(dataset, "dataset file");
    ExportMode mode;
    if (mode_name == "public_ids_only") {
        mode = ExportMode::public_ids_only;
    } else if (mode_name == "private_with_text") {
        mode = ExportMode::private_with_text;
    } else {
        throw CommandError("invalid_input", "unknown export mode: " + mode_name);
    }
    auto samples = load_samples(dataset);
    write_text_file(out, serialize_samples(samples, mode));
    detail::RunReport rep("export", common.seed);
    rep.config()["mode"] = mode_name;
    rep.input(dataset);
    rep.output(out);
    rep.counts()["samples"] = samples.size();
    rep.write(detail::report_path(common.report, out));
    os << "exported " << samples.size() << " samples (" << mode_name << ")\n";
    return 0;
}

inline void print_error(std::ostream& err, const std::string& code, const std::string& message,
                        const std::string& path = {}) {
    nlohmann::ordered_json j;
    j["error"] = code;
    j["message"] = message;
    if (!path.empty()) j["path"] = path;
    err << j.dump() << "\n";
}

/// Entry point shared by the binary and the tests. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Reaction GIF labeling and baseline toolkit", "rgif"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "Random seed for splits and folds")->capture_default_str();
    app.add_option("--report", common.report, "Run report path (default: <artifact>.run.json)");

    std::string listings, dict_out, registry;
    std::size_t max_per_category = kDefaultMaxPerCategory, digest_bytes = kDefaultDigestBytes;
    auto* build = app.add_subcommand("build-dict", "Build the GIF dictionary from category listings");
    build->add_option("--listings", listings, "Directory with one listing file per category")->required();
    build->add_option("--out", dict_out, "Dictionary file to write")->required();
    build->add_option("--registry", registry, "Category registry file");
    build->add_option("--max-per-category", max_per_category)->capture_default_str();
    build->add_option("--digest-bytes", digest_bytes)->capture_default_str();

    std::string dict_path, pairs_path, rules_path, label_out;
    auto* label = app.add_subcommand("label", "Filter pairs and label them through the dictionary");
    label->add_option("--dict", dict_path)->required();
    label->add_option("--pairs", pairs_path, "Pair record file (JSONL)")->required();
    label->add_option("--rules", rules_path, "Filter rules file (JSON)");
    label->add_option("--out", label_out, "Labeled dataset (JSONL)")->required();

    ClusterArgs ca;
    std::vector<std::string> exclude;
    auto* clus = app.add_subcommand("cluster", "Cluster categories by reaction similarity");
    clus->add_option("--dict", ca.dict)->required();
    clus->add_option("--out-dendrogram", ca.out_dendrogram)->required();
    clus->add_option("--format", ca.format, "json or newick")->capture_default_str();
    clus->add_option("--cut", ca.cut, "Number of clusters to report")->capture_default_str();
    auto* excl_opt = clus->add_option("--exclude", exclude, "Categories left without sentiment");
    clus->add_option("--negative", ca.negative, "A category of the negative cluster");
    clus->add_option("--out-sentiment-map", ca.out_sentiment_map);

    AugmentArgs aa;
    auto* aug = app.add_subcommand("augment", "Attach sentiment and emotion labels");
    aug->add_option("--dataset", aa.dataset)->required();
    aug->add_option("--sentiment-map", aa.sentiment_map)->required();
    aug->add_option("--sheets", aa.sheets, "Directory of annotation sheets")->required();
    aug->add_option("--out", aa.out)->required();
    aug->add_option("--registry", aa.registry);
    aug->add_option("--dict", aa.dict, "Take the category registry from a dictionary");
    aug->add_option("--out-emotion-map", aa.out_emotion_map);

    std::string split_dataset, split_task = "reaction", split_out;
    double split_holdout = 0.10;
    auto* split = app.add_subcommand("split", "Stratified holdout split");
    split->add_option("--dataset", split_dataset)->required();
    split->add_option("--task", split_task)->check(CLI::IsMember({"reaction", "sentiment", "emotion"}));
    split->add_option("--holdout", split_holdout)->capture_default_str();
    split->add_option("--out", split_out)->required();

    TrainArgs ta;
    auto* train = app.add_subcommand("train-baseline", "Train and evaluate a baseline");
    train->add_option("--dataset", ta.dataset)->required();
    train->add_option("--task", ta.task)->check(CLI::IsMember({"reaction", "sentiment", "emotion"}))->required();
    train->add_option("--model", ta.model)->check(CLI::IsMember({"majority", "logreg"}))->required();
    train->add_option("--split", ta.split, "Use this split instead of a fresh holdout");
    train->add_option("--holdout", ta.holdout)->capture_default_str();
    train->add_option("--cv-folds", ta.cv_folds, "Stratified CV folds on the training part (0 = off)")
        ->capture_default_str();
    train->add_option("--C", ta.C)->capture_default_str();
    train->add_option("--max-iter", ta.max_iter)->capture_default_str();
    train->add_option("--min-df", ta.min_df)->capture_default_str();
    train->add_option("--max-features", ta.max_features)->capture_default_str();
    train->add_option("--out-model", ta.out_model)->required();
    train->add_option("--out-report", ta.out_report);

    std::string ev_dataset, ev_model, ev_split, ev_out;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved model on a split's test part");
    evaluate->add_option("--dataset", ev_dataset)->required();
    evaluate->add_option("--model", ev_model)->required();
    evaluate->add_option("--split", ev_split)->required();
    evaluate->add_option("--out-report", ev_out)->required();

    std::string ex_dataset, ex_mode = "public_ids_only", ex_out;
    auto* exp = app.add_subcommand("export", "Export a dataset, optionally without texts");
    exp->add_option("--dataset", ex_dataset)->required();
    exp->add_option("--mode", ex_mode)->check(CLI::IsMember({"public_ids_only", "private_with_text"}))
        ->capture_default_str();
    exp->add_option("--out", ex_out)->required();

    std::vector<std::string> argv_store{"rgif"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        print_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (*build) return cmd_build_dict(common, listings, dict_out, registry, max_per_category, digest_bytes, out);
        if (*label) return cmd_label(common, dict_path, pairs_path, rules_path, label_out, out);
        if (*clus) {
            if (excl_opt->count() > 0) ca.exclude = exclude;
            return cmd_cluster(common, ca, out);
        }
        if (*aug) return cmd_augment(common, aa, out);
        if (*split) return cmd_split(common, split_dataset, split_task, split_holdout, split_out, out);
        if (*train) return cmd_train(common, ta, out);
        if (*evaluate) return cmd_evaluate(common, ev_dataset, ev_model, ev_split, ev_out, out);
        if (*exp) return cmd_export(common, ex_dataset, ex_mode, ex_out, out);
    } catch (const CommandError& e) {
        print_error(err, e.code(), e.what(), e.path());
        return 1;
    } catch (const std::exception& e) {
        print_error(err, "invalid_input", e.what());
        return 1;
    }
    return 2;
}

}  // namespace rgif::cli
