#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace strike {

// One raw column: either real-valued or categorical, cells may be missing.
struct RawColumn {
    std::string name;
    bool is_numeric = false;
    std::vector<std::optional<double>> numeric;       // used when is_numeric
    std::vector<std::optional<std::string>> category; // used otherwise
};

struct RawTable {
    std::vector<RawColumn> columns;
    std::string label_column;
    std::vector<int> labels;
    std::size_t n_rows = 0;
};

struct ColumnStats {
    std::string raw_name;
    bool is_numeric = false;
    std::vector<std::string> levels;  // categorical only, first-seen order
    bool had_missing = false;         // adds a "__missing__" level column
    // per derived column, min/max observed on the fit data
    std::vector<double> mins;
    std::vector<double> maxs;
};

struct PreprocessStats {
    std::vector<ColumnStats> columns;
    double missing_sentinel = -999.0;
    std::vector<std::string> derived_names;
};

struct TabularDataset {
    std::size_t n_rows = 0;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> columns;  // column-major, all in [0,1]
    std::vector<int> labels;                   // {0,1}
};

struct FoldAssignment {
    int k = 5;
    std::vector<int> fold_of_row;
    std::uint64_t seed = 0;
};

// Missing iff empty cell or literal "NA"; numeric iff every non-missing cell
// parses as a real number.
RawTable load_csv(const std::string& path, const std::string& label_column);

// Parse an already-loaded CSV body (header + rows); used by load_csv and tests.
RawTable parse_csv_rows(const std::vector<std::vector<std::string>>& rows,
                        const std::string& label_column);

// One-hot encode, impute numeric missing with -999, then min-max scale each
// derived column (constant columns map to all zeros).
std::pair<TabularDataset, PreprocessStats> fit_preprocess(const RawTable& raw);

// Same transforms with stored stats; unseen levels -> all-zero block; values
// clamped to [0,1].
TabularDataset apply_preprocess(const RawTable& raw, const PreprocessStats& stats);

// Per class, round-half-up(train_frac * n_c) rows to train via seeded shuffle;
// outputs preserve original row order.
std::pair<TabularDataset, TabularDataset> stratified_split(
    const TabularDataset& ds, double train_frac, std::uint64_t seed);

// Per class, seeded shuffle then round-robin deal to folds 0..K-1.
FoldAssignment stratified_kfold(const TabularDataset& ds, int k, std::uint64_t seed);

// Column-subset copy (used for group-restricted training).
TabularDataset select_columns(const TabularDataset& ds,
                              const std::vector<std::size_t>& column_indices);

}  // namespace strike
