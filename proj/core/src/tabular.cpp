#include "strike/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "strike/common.hpp"

namespace strike {

namespace {

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && std::isfinite(out);
}

bool is_missing_cell(const std::string& s) { return s.empty() || s == "NA"; }

// RFC-4180: quoted fields may contain commas, doubled quotes, and newlines.
std::vector<std::vector<std::string>> parse_csv_text(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&] { row.push_back(std::move(field)); field.clear(); };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallow; row ends at the \n
        } else if (c == '\n') {
            end_row();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (!field.empty() || !row.empty()) end_row();
    return rows;
}

int parse_label(const std::string& cell) {
    if (cell == "0") return 0;
    if (cell == "1") return 1;
    throw ConfigError("label cell '" + cell + "' is not 0 or 1");
}

std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

RawTable parse_csv_rows(const std::vector<std::vector<std::string>>& rows,
                        const std::string& label_column) {
    if (rows.empty()) throw ConfigError("CSV has no header row");
    const auto& header = rows.front();
    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_idx = j;
    const bool has_label = label_idx < header.size();
    if (!label_column.empty() && !has_label)
        throw ConfigError("label column '" + label_column + "' not in header");

    const std::size_t n_rows = rows.size() - 1;
    RawTable table;
    table.label_column = has_label ? label_column : "";
    table.n_rows = n_rows;

    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != header.size())
            throw ConfigError("CSV row " + std::to_string(r) + " has " +
                              std::to_string(rows[r].size()) + " fields, expected " +
                              std::to_string(header.size()));

    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == label_idx) {
            table.labels.reserve(n_rows);
            for (std::size_t r = 1; r < rows.size(); ++r)
                table.labels.push_back(parse_label(rows[r][j]));
            continue;
        }
        RawColumn col;
        col.name = header[j];
        bool numeric = true;
        for (std::size_t r = 1; r < rows.size() && numeric; ++r) {
            const std::string& cell = rows[r][j];
            double v;
            if (!is_missing_cell(cell) && !parse_real(cell, v)) numeric = false;
        }
        col.is_numeric = numeric;
        if (numeric) {
            col.numeric.reserve(n_rows);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const std::string& cell = rows[r][j];
                if (is_missing_cell(cell)) {
                    col.numeric.emplace_back(std::nullopt);
                } else {
                    double v;
                    parse_real(cell, v);
                    col.numeric.emplace_back(v);
                }
            }
        } else {
            col.category.reserve(n_rows);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const std::string& cell = rows[r][j];
                if (is_missing_cell(cell))
                    col.category.emplace_back(std::nullopt);
                else
                    col.category.emplace_back(cell);
            }
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

RawTable load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open CSV file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_rows(parse_csv_text(buf.str()), label_column);
}

namespace {

// derived feature blocks before scaling
void expand_column(const RawColumn& raw, const ColumnStats& stats,
                   double sentinel, std::vector<std::vector<double>>& out) {
    const std::size_t n = stats.is_numeric ? raw.numeric.size() : raw.category.size();
    if (stats.is_numeric) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = raw.numeric[i].has_value() ? *raw.numeric[i] : sentinel;
        out.push_back(std::move(col));
        return;
    }
    std::unordered_map<std::string, std::size_t> level_of;
    for (std::size_t l = 0; l < stats.levels.size(); ++l)
        level_of.emplace(stats.levels[l], l);
    std::size_t n_cols = stats.levels.size() + (stats.had_missing ? 1 : 0);
    std::vector<std::vector<double>> block(n_cols, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (!raw.category[i].has_value()) {
            if (stats.had_missing) block[stats.levels.size()][i] = 1.0;
            continue;  // no missing level at fit time: all-zero row
        }
        auto it = level_of.find(*raw.category[i]);
        if (it != level_of.end()) block[it->second][i] = 1.0;
        // unseen level: all-zero indicator block
    }
    for (auto& c : block) out.push_back(std::move(c));
}

std::vector<std::string> derived_names_for(const ColumnStats& stats) {
    if (stats.is_numeric) return {stats.raw_name};
    std::vector<std::string> names;
    for (const auto& level : stats.levels)
        names.push_back(stats.raw_name + "=" + level);
    if (stats.had_missing) names.push_back(stats.raw_name + "=__missing__");
    return names;
}

}  // namespace

std::pair<TabularDataset, PreprocessStats> fit_preprocess(const RawTable& raw) {
    if (raw.n_rows == 0) throw ConfigError("fit_preprocess: zero rows");
    if (raw.columns.empty()) throw ConfigError("fit_preprocess: zero feature columns");

    PreprocessStats stats;
    std::vector<std::vector<double>> cols;
    for (const auto& rc : raw.columns) {
        ColumnStats cs;
        cs.raw_name = rc.name;
        cs.is_numeric = rc.is_numeric;
        if (!rc.is_numeric) {
            std::unordered_set<std::string> seen;
            for (const auto& cell : rc.category) {
                if (!cell.has_value()) {
                    cs.had_missing = true;
                } else if (seen.insert(*cell).second) {
                    cs.levels.push_back(*cell);
                }
            }
            if (cs.levels.empty() && !cs.had_missing)
                throw ConfigError("categorical column '" + rc.name + "' has no data");
        }
        std::vector<std::vector<double>> block;
        expand_column(rc, cs, stats.missing_sentinel, block);
        for (auto& col : block) {
            double lo = *std::min_element(col.begin(), col.end());
            double hi = *std::max_element(col.begin(), col.end());
            cs.mins.push_back(lo);
            cs.maxs.push_back(hi);
            if (hi > lo) {
                for (double& v : col) v = (v - lo) / (hi - lo);
            } else {
                std::fill(col.begin(), col.end(), 0.0);
            }
            cols.push_back(std::move(col));
        }
        for (auto& nm : derived_names_for(cs)) stats.derived_names.push_back(nm);
        stats.columns.push_back(std::move(cs));
    }

    TabularDataset ds;
    ds.n_rows = raw.n_rows;
    ds.feature_names = stats.derived_names;
    ds.columns = std::move(cols);
    ds.labels = raw.labels;
    return {std::move(ds), std::move(stats)};
}

TabularDataset apply_preprocess(const RawTable& raw, const PreprocessStats& stats) {
    std::unordered_map<std::string, const RawColumn*> by_name;
    for (const auto& rc : raw.columns) by_name.emplace(rc.name, &rc);

    TabularDataset ds;
    ds.n_rows = raw.n_rows;
    ds.feature_names = stats.derived_names;
    ds.labels = raw.labels;
    for (const auto& cs : stats.columns) {
        auto it = by_name.find(cs.raw_name);
        if (it == by_name.end())
            throw ConfigError("apply_preprocess: column '" + cs.raw_name + "' missing");
        const RawColumn* rc = it->second;
        RawColumn coerced;
        // A column numeric at fit time must be treated numerically even if the
        // new file's cells made type inference pick categorical, and vice versa.
        if (cs.is_numeric != rc->is_numeric) {
            coerced.name = rc->name;
            coerced.is_numeric = cs.is_numeric;
            if (cs.is_numeric) {
                for (const auto& cell : rc->category) {
                    if (!cell.has_value()) {
                        coerced.numeric.emplace_back(std::nullopt);
                        continue;
                    }
                    double v;
                    if (!parse_real(*cell, v))
                        throw ConfigError("apply_preprocess: non-numeric value '" +
                                          *cell + "' in numeric column '" +
                                          cs.raw_name + "'");
                    coerced.numeric.emplace_back(v);
                }
            } else {
                for (const auto& cell : rc->numeric) {
                    if (!cell.has_value()) {
                        coerced.category.emplace_back(std::nullopt);
                    } else {
                        std::ostringstream os;
                        os << *cell;
                        coerced.category.emplace_back(os.str());
                    }
                }
            }
            rc = &coerced;
        }
        std::vector<std::vector<double>> block;
        expand_column(*rc, cs, stats.missing_sentinel, block);
        for (std::size_t b = 0; b < block.size(); ++b) {
            double lo = cs.mins[b], hi = cs.maxs[b];
            auto& col = block[b];
            if (hi > lo) {
                for (double& v : col) v = clip((v - lo) / (hi - lo), 0.0, 1.0);
            } else {
                std::fill(col.begin(), col.end(), 0.0);
            }
            ds.columns.push_back(std::move(col));
        }
    }
    return ds;
}

namespace {

TabularDataset take_rows(const TabularDataset& ds, const std::vector<char>& keep) {
    TabularDataset out;
    out.feature_names = ds.feature_names;
    out.columns.resize(ds.columns.size());
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        if (!keep[i]) continue;
        ++out.n_rows;
        out.labels.push_back(ds.labels[i]);
        for (std::size_t c = 0; c < ds.columns.size(); ++c)
            out.columns[c].push_back(ds.columns[c][i]);
    }
    return out;
}

std::vector<std::vector<std::size_t>> class_indices(const std::vector<int>& y) {
    std::vector<std::vector<std::size_t>> idx(2);
    for (std::size_t i = 0; i < y.size(); ++i) idx[y[i]].push_back(i);
    return idx;
}

}  // namespace

std::pair<TabularDataset, TabularDataset> stratified_split(
    const TabularDataset& ds, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw ConfigError("train_frac must be in (0,1)");
    auto idx = class_indices(ds.labels);
    for (int c = 0; c < 2; ++c)
        if (idx[c].size() < 2)
            throw ConfigError("stratified_split: class " + std::to_string(c) +
                              " has fewer than 2 rows");
    std::vector<char> in_train(ds.n_rows, 0);
    for (int c = 0; c < 2; ++c) {
        auto rows = idx[c];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(rows);
        std::size_t n_train = round_half_up(train_frac * static_cast<double>(rows.size()));
        for (std::size_t i = 0; i < n_train && i < rows.size(); ++i)
            in_train[rows[i]] = 1;
    }
    std::vector<char> in_test(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) in_test[i] = !in_train[i];
    return {take_rows(ds, in_train), take_rows(ds, in_test)};
}

FoldAssignment stratified_kfold(const TabularDataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: K must be >= 2");
    auto idx = class_indices(ds.labels);
    for (int c = 0; c < 2; ++c)
        if (idx[c].size() < static_cast<std::size_t>(k))
            throw ConfigError("stratified_kfold: class " + std::to_string(c) +
                              " has fewer than K rows");
    FoldAssignment folds;
    folds.k = k;
    folds.seed = seed;
    folds.fold_of_row.assign(ds.n_rows, -1);
    for (int c = 0; c < 2; ++c) {
        auto rows = idx[c];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i)
            folds.fold_of_row[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return folds;
}

TabularDataset select_columns(const TabularDataset& ds,
                              const std::vector<std::size_t>& column_indices) {
    TabularDataset out;
    out.n_rows = ds.n_rows;
    out.labels = ds.labels;
    for (std::size_t c : column_indices) {
        out.feature_names.push_back(ds.feature_names[c]);
        out.columns.push_back(ds.columns[c]);
    }
    return out;
}

}  // namespace strike
