#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace strike {

enum class LearnerKind { logreg, tree, forest, extratrees, gbdt, adaboost };

std::string learner_kind_name(LearnerKind kind);
LearnerKind learner_kind_from_name(const std::string& name);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::logreg;
    int n_estimators = 100;
    double learning_rate = 0.1;
    int max_depth = 8;
    int min_samples_split = 2;
    double l2 = 1e-6;  // logreg ridge penalty
    std::uint64_t seed = 0;

    static LearnerSpec defaults(LearnerKind kind, std::uint64_t seed = 0);
    void validate() const;
};

// Binary tree as parallel arrays; children/feature are -1 at leaves.
struct TreeNodes {
    std::vector<int> feature;
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<double> leaf_value;

    double predict_row(const std::vector<std::vector<double>>& columns,
                       std::size_t row) const;
    std::size_t leaf_count() const;
};

struct TrainedBaseModel {
    LearnerSpec spec;
    std::size_t n_features = 0;

    // logreg
    std::vector<double> weights;
    double intercept = 0.0;

    // tree ensembles
    std::vector<TreeNodes> trees;
    double init_score = 0.0;            // gbdt F0
    std::vector<double> stump_weights;  // adaboost alphas
    double base_rate = 0.5;             // adaboost fallback when no stump kept
};

// X is column-major: columns[j][i] is feature j of row i.
using Columns = std::vector<std::vector<double>>;

TrainedBaseModel fit_model(const Columns& x, const std::vector<int>& y,
                           const LearnerSpec& spec);

std::vector<double> predict_proba(const TrainedBaseModel& model, const Columns& x);

// Penalized logistic loss and its gradient at (weights, intercept); exposed for
// optimizer verification.
double logreg_loss(const Columns& x, const std::vector<int>& y,
                   const std::vector<double>& weights, double intercept, double l2);
void logreg_gradient(const Columns& x, const std::vector<int>& y,
                     const std::vector<double>& weights, double intercept, double l2,
                     std::vector<double>& grad_w, double& grad_b);

}  // namespace strike
