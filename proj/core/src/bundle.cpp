#include "strike/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "strike/common.hpp"

namespace strike {

using nlohmann::json;

json preprocess_stats_to_json(const PreprocessStats& stats) {
    json cols = json::array();
    for (const auto& c : stats.columns) {
        cols.push_back({{"raw_name", c.raw_name},
                        {"is_numeric", c.is_numeric},
                        {"levels", c.levels},
                        {"had_missing", c.had_missing},
                        {"mins", c.mins},
                        {"maxs", c.maxs}});
    }
    return {{"columns", cols},
            {"missing_sentinel", stats.missing_sentinel},
            {"derived_names", stats.derived_names}};
}

PreprocessStats preprocess_stats_from_json(const json& j) {
    PreprocessStats stats;
    stats.missing_sentinel = j.at("missing_sentinel").get<double>();
    stats.derived_names = j.at("derived_names").get<std::vector<std::string>>();
    for (const auto& c : j.at("columns")) {
        ColumnStats cs;
        cs.raw_name = c.at("raw_name").get<std::string>();
        cs.is_numeric = c.at("is_numeric").get<bool>();
        cs.levels = c.at("levels").get<std::vector<std::string>>();
        cs.had_missing = c.at("had_missing").get<bool>();
        cs.mins = c.at("mins").get<std::vector<double>>();
        cs.maxs = c.at("maxs").get<std::vector<double>>();
        stats.columns.push_back(std::move(cs));
    }
    return stats;
}

json partition_to_json(const FeatureGroupPartition& partition) {
    json groups = json::array();
    for (const auto& g : partition.groups)
        groups.push_back({{"name", g.name}, {"features", g.feature_indices}});
    return {{"groups", groups},
            {"strategy", partition.strategy},
            {"seed", partition.seed}};
}

FeatureGroupPartition partition_from_json(const json& j) {
    FeatureGroupPartition p;
    p.strategy = j.at("strategy").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& g : j.at("groups")) {
        FeatureGroup grp;
        grp.name = g.at("name").get<std::string>();
        grp.feature_indices = g.at("features").get<std::vector<std::size_t>>();
        p.groups.push_back(std::move(grp));
    }
    return p;
}

namespace {

json tree_to_json(const TreeNodes& t) {
    return {{"feature", t.feature},
            {"threshold", t.threshold},
            {"left", t.left},
            {"right", t.right},
            {"leaf_value", t.leaf_value}};
}

TreeNodes tree_from_json(const json& j) {
    TreeNodes t;
    t.feature = j.at("feature").get<std::vector<int>>();
    t.threshold = j.at("threshold").get<std::vector<double>>();
    t.left = j.at("left").get<std::vector<int>>();
    t.right = j.at("right").get<std::vector<int>>();
    t.leaf_value = j.at("leaf_value").get<std::vector<double>>();
    return t;
}

json spec_to_json(const LearnerSpec& s) {
    return {{"kind", learner_kind_name(s.kind)},
            {"n_estimators", s.n_estimators},
            {"learning_rate", s.learning_rate},
            {"max_depth", s.max_depth},
            {"min_samples_split", s.min_samples_split},
            {"l2", s.l2},
            {"seed", s.seed}};
}

LearnerSpec spec_from_json(const json& j) {
    LearnerSpec s;
    s.kind = learner_kind_from_name(j.at("kind").get<std::string>());
    s.n_estimators = j.at("n_estimators").get<int>();
    s.learning_rate = j.at("learning_rate").get<double>();
    s.max_depth = j.at("max_depth").get<int>();
    s.min_samples_split = j.at("min_samples_split").get<int>();
    s.l2 = j.at("l2").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

}  // namespace

json base_model_to_json(const TrainedBaseModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
    return {{"spec", spec_to_json(m.spec)},
            {"n_features", m.n_features},
            {"weights", m.weights},
            {"intercept", m.intercept},
            {"trees", trees},
            {"init_score", m.init_score},
            {"stump_weights", m.stump_weights},
            {"base_rate", m.base_rate}};
}

TrainedBaseModel base_model_from_json(const json& j) {
    TrainedBaseModel m;
    m.spec = spec_from_json(j.at("spec"));
    m.n_features = j.at("n_features").get<std::size_t>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
    m.init_score = j.at("init_score").get<double>();
    m.stump_weights = j.at("stump_weights").get<std::vector<double>>();
    m.base_rate = j.at("base_rate").get<double>();
    return m;
}

json meta_learner_to_json(const MetaLearner& meta) {
    return {{"kind", meta.kind},
            {"weights", meta.weights},
            {"intercept", meta.intercept},
            {"bin_edges", meta.bin_edges},
            {"bin_values", meta.bin_values}};
}

MetaLearner meta_learner_from_json(const json& j) {
    MetaLearner m;
    m.kind = j.at("kind").get<std::string>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.bin_edges = j.at("bin_edges").get<std::vector<std::vector<double>>>();
    m.bin_values = j.at("bin_values").get<std::vector<std::vector<double>>>();
    return m;
}

json strike_model_to_json(const StrikeModel& model, const json& run_config) {
    json groups = json::array();
    for (const auto& g : model.group_models) {
        json models = json::array();
        for (const auto& m : g) models.push_back(base_model_to_json(m));
        groups.push_back(models);
    }
    json meta_cols = json::array();
    for (const auto& [grp, kind] : model.meta_columns)
        meta_cols.push_back({{"group", grp}, {"kind", kind}});
    return {{"format_version", kBundleFormatVersion},
            {"run_config", run_config},
            {"preprocess", preprocess_stats_to_json(model.preprocess)},
            {"partition", partition_to_json(model.partition)},
            {"group_models", groups},
            {"meta_columns", meta_cols},
            {"meta", meta_learner_to_json(model.meta)},
            {"master_seed", model.master_seed}};
}

StrikeModel strike_model_from_json(const json& j) {
    int version = j.at("format_version").get<int>();
    if (version != kBundleFormatVersion)
        throw ConfigError("unsupported bundle format_version " +
                          std::to_string(version));
    StrikeModel model;
    model.format_version = version;
    model.preprocess = preprocess_stats_from_json(j.at("preprocess"));
    model.partition = partition_from_json(j.at("partition"));
    for (const auto& g : j.at("group_models")) {
        std::vector<TrainedBaseModel> models;
        for (const auto& m : g) models.push_back(base_model_from_json(m));
        model.group_models.push_back(std::move(models));
    }
    for (const auto& c : j.at("meta_columns"))
        model.meta_columns.emplace_back(c.at("group").get<std::string>(),
                                        c.at("kind").get<std::string>());
    model.meta = meta_learner_from_json(j.at("meta"));
    model.master_seed = j.at("master_seed").get<std::uint64_t>();
    return model;
}

void save_bundle(const std::string& path, const StrikeModel& model,
                 const json& run_config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write bundle: " + path);
    out << strike_model_to_json(model, run_config).dump(2) << "\n";
}

StrikeModel load_bundle(const std::string& path, json* run_config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open bundle: " + path);
    json j = json::parse(in);
    if (run_config) *run_config = j.value("run_config", json::object());
    return strike_model_from_json(j);
}

json eval_report_to_json(const StrikeEvalReport& report) {
    json per_group = json::array();
    for (const auto& g : report.per_group) {
        json models = json::array();
        for (const auto& m : g.models)
            models.push_back({{"kind", m.kind},
                              {"fold_aucs", m.fold_aucs},
                              {"mean_auc", m.mean_auc}});
        per_group.push_back({{"group", g.group}, {"models", models}});
    }
    return {{"per_group", per_group},
            {"meta",
             {{"kind", report.meta_kind},
              {"cv_auc_mean", report.meta_cv_auc_mean},
              {"cv_auc_std", report.meta_cv_auc_std},
              {"coefficients", report.meta_coefficients}}}};
}

json cmi_matrix_to_json(const CmiMatrix& matrix) {
    return {{"group_names", matrix.group_names},
            {"values", matrix.values},
            {"off_diagonal_mean", matrix.off_diagonal_mean},
            {"settings",
             {{"summary_method", matrix.summary_method},
              {"n_bins", matrix.n_bins},
              {"n_samples", matrix.n_samples}}}};
}

std::string cmi_matrix_to_csv(const CmiMatrix& matrix) {
    std::ostringstream out;
    out << "group";
    for (const auto& nm : matrix.group_names) out << "," << nm;
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < matrix.group_names.size(); ++i) {
        out << matrix.group_names[i];
        for (std::size_t j = 0; j < matrix.group_names.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", matrix.values[i][j]);
            out << "," << buf;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace strike
