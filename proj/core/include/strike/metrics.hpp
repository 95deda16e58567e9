#pragma once

#include <utility>
#include <vector>

namespace strike {

// Mann-Whitney AUC with midranks for ties. Requires both classes present.
double auc_roc(const std::vector<double>& scores, const std::vector<int>& y);

double f1_score(const std::vector<double>& scores, const std::vector<int>& y,
                double threshold = 0.5);

// Mean of -[y ln p + (1-y) ln(1-p)], probabilities clipped to [1e-15, 1-1e-15].
double log_loss(const std::vector<double>& scores, const std::vector<int>& y);

double accuracy(const std::vector<double>& scores, const std::vector<int>& y,
                double threshold = 0.5);

// (TPR + TNR) / 2; requires both classes present.
double balanced_accuracy(const std::vector<double>& scores,
                         const std::vector<int>& y, double threshold = 0.5);

// (mean, sample std with divisor K-1); requires >= 2 values.
std::pair<double, double> cv_aggregate(const std::vector<double>& per_fold);

}  // namespace strike
