#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strike/grouping.hpp"
#include "strike/tabular.hpp"

namespace strike {

struct CmiMatrix {
    std::vector<std::string> group_names;
    std::vector<std::vector<double>> values;  // G x G, nats, diagonal 0
    double off_diagonal_mean = 0.0;
    std::string summary_method;
    int n_bins = 10;
    std::size_t n_samples = 0;
};

struct CmiSettings {
    std::string summary_method = "oof_logit";  // oof_logit | first_pc
    int n_bins = 10;
    std::uint64_t seed = 0;
};

// Bin edges at nearest-rank quantiles q_{j/B}; value v maps to the count of
// edges strictly less than v. Duplicate edges collapse.
std::vector<int> quantile_bin(const std::vector<double>& values, int n_bins);

// Scalar reduction of a feature group. first_pc: leading principal component
// via power iteration, sign fixed so the largest-magnitude loading is positive.
// All-constant groups yield a zero vector (warning flag set).
std::vector<double> group_summary_first_pc(const TabularDataset& ds,
                                           const std::vector<std::size_t>& group,
                                           std::uint64_t seed,
                                           bool* degenerate = nullptr);

// Plug-in estimate of I(a;b|y) in nats from empirical contingency tables;
// clamped to >= 0.
double conditional_mutual_information(const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& y);

// Plug-in (unconditional) MI and entropy over binned values, in nats.
double mutual_information(const std::vector<int>& a, const std::vector<int>& b);
double entropy(const std::vector<int>& a);

// Pairwise CMI between group summaries. Summaries are provided by the caller
// (the oof_logit method reuses stacking outputs; first_pc is local).
CmiMatrix cmi_matrix_from_summaries(const std::vector<std::string>& group_names,
                                    const std::vector<std::vector<double>>& summaries,
                                    const std::vector<int>& y,
                                    const CmiSettings& settings);

}  // namespace strike
