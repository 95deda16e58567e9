#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strike/grouping.hpp"
#include "strike/learners.hpp"
#include "strike/tabular.hpp"

namespace strike {

struct OofColumn {
    std::string group;
    LearnerKind kind = LearnerKind::logreg;
    std::vector<double> probs;  // clipped to [1e-6, 1-1e-6]
    std::vector<double> fold_aucs;
    double mean_auc = 0.0;
};

struct MetaDataset {
    Columns features;  // logit-transformed OOF columns
    std::vector<int> labels;
    std::vector<std::pair<std::string, std::string>> column_meta;  // (group, kind)
};

struct MetaLearner {
    std::string kind;  // logistic | additive_binned
    // logistic
    std::vector<double> weights;
    double intercept = 0.0;
    // additive_binned
    std::vector<std::vector<double>> bin_edges;   // per feature, strictly increasing
    std::vector<std::vector<double>> bin_values;  // per feature, edges.size()+1 bins
};

std::vector<double> meta_predict(const MetaLearner& meta, const Columns& features);

MetaLearner fit_meta(const MetaDataset& meta, const std::string& kind);

struct StackingConfig {
    int k_folds = 5;
    int top_k = 3;
    std::string meta_kind = "logistic";
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct GroupModelReport {
    std::string kind;
    std::vector<double> fold_aucs;
    double mean_auc = 0.0;
};

struct GroupReport {
    std::string group;
    std::vector<GroupModelReport> models;
};

struct StrikeEvalReport {
    std::vector<GroupReport> per_group;
    std::string meta_kind;
    double meta_cv_auc_mean = 0.0;
    double meta_cv_auc_std = 0.0;
    std::vector<double> meta_coefficients;  // logistic only
};

struct StrikeModel {
    int format_version = 1;
    PreprocessStats preprocess;  // attached by the CLI for raw-table prediction
    FeatureGroupPartition partition;
    std::vector<std::vector<TrainedBaseModel>> group_models;  // selected, per group
    std::vector<std::pair<std::string, std::string>> meta_columns;  // (group, kind)
    MetaLearner meta;
    std::uint64_t master_seed = 0;
};

// Leakage instrumentation hook: records, for each trained fold model, the
// global row indices it was trained on and the rows it predicted.
struct OofInstrumentation {
    struct FitRecord {
        std::string group;
        LearnerKind kind;
        int fold = 0;
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> predicted_rows;
    };
    std::vector<FitRecord> fits;
};

// One OofColumn per pool spec: K fold-models each trained on the other folds,
// their validation predictions assembled into a full vector.
std::vector<OofColumn> generate_group_oof(const TabularDataset& group_view,
                                          const std::string& group_name,
                                          std::size_t group_index,
                                          const std::vector<LearnerSpec>& pool,
                                          const FoldAssignment& folds,
                                          std::uint64_t master_seed,
                                          int workers = 1,
                                          OofInstrumentation* instrumentation = nullptr);

// Top k by mean CV AUC; ties broken by lexicographic learner-kind name.
std::vector<OofColumn> select_top_models(const std::vector<OofColumn>& columns, int k);

MetaDataset build_meta_dataset(const std::vector<std::vector<OofColumn>>& selected_per_group,
                               const std::vector<int>& y);

std::pair<StrikeModel, StrikeEvalReport> train_strike(const TabularDataset& train,
                                                      const FeatureGroupPartition& partition,
                                                      const std::vector<LearnerSpec>& pool,
                                                      const StackingConfig& config,
                                                      OofInstrumentation* instrumentation = nullptr);

// Orthodox stacking: one group containing every feature, same pipeline.
std::pair<StrikeModel, StrikeEvalReport> train_orthodox_stacking(
    const TabularDataset& train, const std::vector<LearnerSpec>& pool,
    const StackingConfig& config);

std::vector<double> predict_strike_dataset(const StrikeModel& model,
                                           const TabularDataset& ds);

std::vector<double> predict_strike(const StrikeModel& model, const RawTable& raw);

// K-fold CV AUC of one learner on the full feature set (benchmark rows).
std::pair<double, double> monolithic_cv_auc(const TabularDataset& ds,
                                            const LearnerSpec& spec,
                                            const FoldAssignment& folds);

}  // namespace strike
