#include "strike/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "strike/common.hpp"

namespace strike {

namespace {

void check_binary(const std::vector<double>& scores, const std::vector<int>& y) {
    if (scores.size() != y.size())
        throw std::invalid_argument("scores and labels differ in length");
    if (scores.empty()) throw std::invalid_argument("empty input");
}

struct Counts {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

Counts threshold_counts(const std::vector<double>& scores,
                        const std::vector<int>& y, double thr) {
    Counts c;
    for (std::size_t i = 0; i < y.size(); ++i) {
        bool pred = scores[i] >= thr;
        if (y[i] == 1) {
            pred ? ++c.tp : ++c.fn;
        } else {
            pred ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

}  // namespace

double auc_roc(const std::vector<double>& scores, const std::vector<int>& y) {
    check_binary(scores, y);
    std::size_t n = y.size();
    std::size_t n_pos = 0;
    for (int v : y) n_pos += (v == 1);
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auc_roc requires both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // sum of positive midranks (1-based)
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // (i+1 + j) / 2
        for (std::size_t k = i; k < j; ++k)
            if (y[order[k]] == 1) rank_sum_pos += midrank;
        i = j;
    }
    double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double f1_score(const std::vector<double>& scores, const std::vector<int>& y,
                double threshold) {
    check_binary(scores, y);
    Counts c = threshold_counts(scores, y, threshold);
    double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(c.tp) / denom;
}

double log_loss(const std::vector<double>& scores, const std::vector<int>& y) {
    check_binary(scores, y);
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double p = clip(scores[i], 1e-15, 1.0 - 1e-15);
        total += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(y.size());
}

double accuracy(const std::vector<double>& scores, const std::vector<int>& y,
                double threshold) {
    check_binary(scores, y);
    Counts c = threshold_counts(scores, y, threshold);
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(y.size());
}

double balanced_accuracy(const std::vector<double>& scores,
                         const std::vector<int>& y, double threshold) {
    check_binary(scores, y);
    Counts c = threshold_counts(scores, y, threshold);
    if (c.tp + c.fn == 0 || c.fp + c.tn == 0)
        throw std::invalid_argument("balanced_accuracy requires both classes");
    double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    double tnr = static_cast<double>(c.tn) / static_cast<double>(c.fp + c.tn);
    return 0.5 * (tpr + tnr);
}

std::pair<double, double> cv_aggregate(const std::vector<double>& per_fold) {
    if (per_fold.size() < 2)
        throw std::invalid_argument("cv_aggregate requires at least 2 folds");
    double mean = std::accumulate(per_fold.begin(), per_fold.end(), 0.0) /
                  static_cast<double>(per_fold.size());
    double ss = 0.0;
    for (double v : per_fold) ss += (v - mean) * (v - mean);
    double var = ss / static_cast<double>(per_fold.size() - 1);
    return {mean, std::sqrt(var)};
}

}  // namespace strike
