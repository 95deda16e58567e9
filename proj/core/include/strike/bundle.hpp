#pragma once

#include <string>

#include <json.hpp>

#include "strike/cmi.hpp"
#include "strike/stacking.hpp"

namespace strike {

// Versioned JSON model bundle. Reload-then-predict is bit-identical.
constexpr int kBundleFormatVersion = 1;

nlohmann::json preprocess_stats_to_json(const PreprocessStats& stats);
PreprocessStats preprocess_stats_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const FeatureGroupPartition& partition);
FeatureGroupPartition partition_from_json(const nlohmann::json& j);

nlohmann::json base_model_to_json(const TrainedBaseModel& model);
TrainedBaseModel base_model_from_json(const nlohmann::json& j);

nlohmann::json meta_learner_to_json(const MetaLearner& meta);
MetaLearner meta_learner_from_json(const nlohmann::json& j);

nlohmann::json strike_model_to_json(const StrikeModel& model,
                                    const nlohmann::json& run_config);
StrikeModel strike_model_from_json(const nlohmann::json& j);

void save_bundle(const std::string& path, const StrikeModel& model,
                 const nlohmann::json& run_config);
StrikeModel load_bundle(const std::string& path,
                        nlohmann::json* run_config = nullptr);

nlohmann::json eval_report_to_json(const StrikeEvalReport& report);
nlohmann::json cmi_matrix_to_json(const CmiMatrix& matrix);
std::string cmi_matrix_to_csv(const CmiMatrix& matrix);

}  // namespace strike
