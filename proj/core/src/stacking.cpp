#include "strike/stacking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "strike/cmi.hpp"
#include "strike/common.hpp"
#include "strike/metrics.hpp"

namespace strike {

namespace {

Columns take_columns_rows(const Columns& cols, const std::vector<std::size_t>& rows) {
    Columns out(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out[c].reserve(rows.size());
        for (std::size_t r : rows) out[c].push_back(cols[c][r]);
    }
    return out;
}

template <typename T>
std::vector<T> take_rows(const std::vector<T>& v, const std::vector<std::size_t>& rows) {
    std::vector<T> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(v[r]);
    return out;
}

void run_tasks(std::size_t n_tasks, int workers,
               const std::function<void(std::size_t)>& task) {
    if (workers <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    int n_threads = std::min<std::size_t>(workers, n_tasks);
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        threads.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n_tasks) return;
                task(i);
            }
        });
    for (auto& th : threads) th.join();
}

std::uint64_t kind_id(LearnerKind kind) { return static_cast<std::uint64_t>(kind); }

}  // namespace

std::vector<OofColumn> generate_group_oof(const TabularDataset& group_view,
                                          const std::string& group_name,
                                          std::size_t group_index,
                                          const std::vector<LearnerSpec>& pool,
                                          const FoldAssignment& folds,
                                          std::uint64_t master_seed, int workers,
                                          OofInstrumentation* instrumentation) {
    if (pool.empty()) throw std::invalid_argument("generate_group_oof: empty pool");
    const std::size_t n = group_view.n_rows;
    if (folds.fold_of_row.size() != n)
        throw std::invalid_argument("generate_group_oof: fold assignment size mismatch");
    const int k = folds.k;

    std::vector<std::vector<std::size_t>> fold_rows(k);
    for (std::size_t i = 0; i < n; ++i) fold_rows[folds.fold_of_row[i]].push_back(i);
    for (int f = 0; f < k; ++f) {
        bool has_pos = false, has_neg = false;
        for (std::size_t r : fold_rows[f])
            (group_view.labels[r] == 1 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg)
            throw std::invalid_argument("fold " + std::to_string(f) +
                                        " contains a single class; AUC undefined");
    }

    struct Task {
        std::size_t spec_idx;
        int fold;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < pool.size(); ++s)
        for (int f = 0; f < k; ++f) tasks.push_back({s, f});

    std::vector<OofColumn> columns(pool.size());
    for (std::size_t s = 0; s < pool.size(); ++s) {
        columns[s].group = group_name;
        columns[s].kind = pool[s].kind;
        columns[s].probs.assign(n, 0.0);
        columns[s].fold_aucs.assign(k, 0.0);
    }

    std::vector<OofInstrumentation::FitRecord> records(
        instrumentation ? tasks.size() : 0);

    run_tasks(tasks.size(), workers, [&](std::size_t ti) {
        const auto& t = tasks[ti];
        LearnerSpec spec = pool[t.spec_idx];
        spec.seed = mix_seed(master_seed, group_index, kind_id(spec.kind),
                             static_cast<std::uint64_t>(t.fold));

        std::vector<std::size_t> train_rows, val_rows;
        for (std::size_t i = 0; i < n; ++i)
            (folds.fold_of_row[i] == t.fold ? val_rows : train_rows).push_back(i);

        Columns x_train = take_columns_rows(group_view.columns, train_rows);
        std::vector<int> y_train = take_rows(group_view.labels, train_rows);
        TrainedBaseModel model = fit_model(x_train, y_train, spec);

        Columns x_val = take_columns_rows(group_view.columns, val_rows);
        std::vector<double> p = predict_proba(model, x_val);
        std::vector<int> y_val = take_rows(group_view.labels, val_rows);

        auto& col = columns[t.spec_idx];
        for (std::size_t i = 0; i < val_rows.size(); ++i)
            col.probs[val_rows[i]] = clip(p[i], kProbClip, 1.0 - kProbClip);
        col.fold_aucs[t.fold] = auc_roc(p, y_val);

        if (instrumentation) {
            records[ti] = {group_name, spec.kind, t.fold, train_rows, val_rows};
        }
    });

    for (auto& col : columns)
        col.mean_auc = std::accumulate(col.fold_aucs.begin(), col.fold_aucs.end(), 0.0) /
                       static_cast<double>(k);
    if (instrumentation)
        for (auto& rec : records) instrumentation->fits.push_back(std::move(rec));
    return columns;
}

std::vector<OofColumn> select_top_models(const std::vector<OofColumn>& columns, int k) {
    if (columns.empty()) throw std::invalid_argument("select_top_models: empty input");
    if (k < 1) throw std::invalid_argument("select_top_models: k must be >= 1");
    std::vector<OofColumn> sorted = columns;
    std::sort(sorted.begin(), sorted.end(), [](const OofColumn& a, const OofColumn& b) {
        if (a.mean_auc != b.mean_auc) return a.mean_auc > b.mean_auc;
        return learner_kind_name(a.kind) < learner_kind_name(b.kind);
    });
    if (sorted.size() > static_cast<std::size_t>(k)) sorted.resize(k);
    return sorted;
}

MetaDataset build_meta_dataset(const std::vector<std::vector<OofColumn>>& selected_per_group,
                               const std::vector<int>& y) {
    MetaDataset meta;
    meta.labels = y;
    for (const auto& group_cols : selected_per_group)
        for (const auto& col : group_cols) {
            if (col.probs.size() != y.size())
                throw std::invalid_argument("build_meta_dataset: length mismatch");
            std::vector<double> logits(col.probs.size());
            for (std::size_t i = 0; i < col.probs.size(); ++i)
                logits[i] = logit(col.probs[i]);
            meta.features.push_back(std::move(logits));
            meta.column_meta.emplace_back(col.group, learner_kind_name(col.kind));
        }
    return meta;
}

namespace {

int bin_index(const std::vector<double>& edges, double v) {
    return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), v) -
                            edges.begin());
}

MetaLearner fit_meta_additive_binned(const MetaDataset& meta) {
    constexpr int kBins = 16;
    constexpr int kPasses = 20;
    const std::size_t n = meta.labels.size();
    const std::size_t d = meta.features.size();

    MetaLearner m;
    m.kind = "additive_binned";
    m.bin_edges.resize(d);
    m.bin_values.resize(d);
    std::vector<std::vector<int>> bins(d);
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<double> sorted = meta.features[f];
        std::sort(sorted.begin(), sorted.end());
        for (int j = 1; j < kBins; ++j) {
            std::size_t rank = static_cast<std::size_t>(std::ceil(
                static_cast<double>(j) * static_cast<double>(n) / kBins));
            rank = std::min(std::max<std::size_t>(rank, 1), n);
            double edge = sorted[rank - 1];
            if (m.bin_edges[f].empty() || edge > m.bin_edges[f].back())
                m.bin_edges[f].push_back(edge);
        }
        m.bin_values[f].assign(m.bin_edges[f].size() + 1, 0.0);
        bins[f].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            bins[f][i] = bin_index(m.bin_edges[f], meta.features[f][i]);
    }

    double pos = 0.0;
    for (int v : meta.labels) pos += v;
    m.intercept = logit(clip(pos / static_cast<double>(n), kProbClip, 1.0 - kProbClip));

    std::vector<double> score(n, m.intercept);
    for (int pass = 0; pass < kPasses; ++pass) {
        double max_change = 0.0;
        for (std::size_t f = 0; f < d; ++f) {
            const std::size_t nb = m.bin_values[f].size();
            std::vector<double> grad(nb, 0.0), hess(nb, 0.0), count(nb, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double p = sigmoid(score[i]);
                int b = bins[f][i];
                grad[b] += p - static_cast<double>(meta.labels[i]);
                hess[b] += p * (1.0 - p);
                count[b] += 1.0;
            }
            std::vector<double> delta(nb, 0.0);
            for (std::size_t b = 0; b < nb; ++b)
                if (count[b] > 0.0) delta[b] = -grad[b] / std::max(hess[b], 1e-12);
            // center contributions (data-weighted) and fold the mean into the
            // intercept so per-feature curves stay identifiable
            double weighted = 0.0;
            for (std::size_t b = 0; b < nb; ++b)
                weighted += count[b] * (m.bin_values[f][b] + delta[b]);
            double mean_contrib = weighted / static_cast<double>(n);
            for (std::size_t b = 0; b < nb; ++b) {
                double next = m.bin_values[f][b] + delta[b] - mean_contrib;
                max_change = std::max(max_change, std::fabs(next - m.bin_values[f][b]));
                double shift = next - m.bin_values[f][b];
                m.bin_values[f][b] = next;
                delta[b] = shift;  // actual applied shift for score update
            }
            m.intercept += mean_contrib;
            for (std::size_t i = 0; i < n; ++i)
                score[i] += delta[bins[f][i]] + mean_contrib;
        }
        if (max_change < 1e-6) break;
    }
    return m;
}

}  // namespace

MetaLearner fit_meta(const MetaDataset& meta, const std::string& kind) {
    if (meta.labels.empty()) throw std::invalid_argument("fit_meta: empty meta-dataset");
    bool has_pos = false, has_neg = false;
    for (int v : meta.labels) (v == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw std::invalid_argument("fit_meta: single-class labels");

    if (kind == "logistic") {
        LearnerSpec spec = LearnerSpec::defaults(LearnerKind::logreg);
        TrainedBaseModel lr = fit_model(meta.features, meta.labels, spec);
        MetaLearner m;
        m.kind = "logistic";
        m.weights = lr.weights;
        m.intercept = lr.intercept;
        return m;
    }
    if (kind == "additive_binned") return fit_meta_additive_binned(meta);
    throw ConfigError("unknown meta-learner kind '" + kind + "'");
}

std::vector<double> meta_predict(const MetaLearner& meta, const Columns& features) {
    const std::size_t n = features.empty() ? 0 : features[0].size();
    std::vector<double> out(n);
    if (meta.kind == "logistic") {
        if (features.size() != meta.weights.size())
            throw std::invalid_argument("meta_predict: feature count mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            double z = meta.intercept;
            for (std::size_t j = 0; j < features.size(); ++j)
                z += meta.weights[j] * features[j][i];
            out[i] = sigmoid(z);
        }
        return out;
    }
    if (meta.kind == "additive_binned") {
        if (features.size() != meta.bin_edges.size())
            throw std::invalid_argument("meta_predict: feature count mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            double z = meta.intercept;
            for (std::size_t j = 0; j < features.size(); ++j)
                z += meta.bin_values[j][bin_index(meta.bin_edges[j], features[j][i])];
            out[i] = sigmoid(z);
        }
        return out;
    }
    throw std::logic_error("meta_predict: unknown kind");
}

namespace {

// Meta-learner spread: refit per fold on OOF rows outside the fold, score the
// fold, aggregate.
std::pair<double, double> meta_cv(const MetaDataset& meta, const std::string& kind,
                                  const FoldAssignment& folds) {
    std::vector<double> fold_aucs;
    for (int f = 0; f < folds.k; ++f) {
        std::vector<std::size_t> train_rows, val_rows;
        for (std::size_t i = 0; i < meta.labels.size(); ++i)
            (folds.fold_of_row[i] == f ? val_rows : train_rows).push_back(i);
        MetaDataset train_meta;
        train_meta.features = take_columns_rows(meta.features, train_rows);
        train_meta.labels = take_rows(meta.labels, train_rows);
        train_meta.column_meta = meta.column_meta;
        MetaLearner m = fit_meta(train_meta, kind);
        Columns val_features = take_columns_rows(meta.features, val_rows);
        std::vector<double> p = meta_predict(m, val_features);
        fold_aucs.push_back(auc_roc(p, take_rows(meta.labels, val_rows)));
    }
    return cv_aggregate(fold_aucs);
}

}  // namespace

std::pair<StrikeModel, StrikeEvalReport> train_strike(const TabularDataset& train,
                                                      const FeatureGroupPartition& partition,
                                                      const std::vector<LearnerSpec>& pool,
                                                      const StackingConfig& config,
                                                      OofInstrumentation* instrumentation) {
    validate_partition(partition, train.columns.size());
    FoldAssignment folds = stratified_kfold(train, config.k_folds, config.master_seed);

    StrikeModel model;
    model.partition = partition;
    model.master_seed = config.master_seed;
    StrikeEvalReport report;
    report.meta_kind = config.meta_kind;

    std::vector<std::vector<OofColumn>> selected_per_group;
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        const auto& grp = partition.groups[g];
        TabularDataset view = select_columns(train, grp.feature_indices);
        auto columns = generate_group_oof(view, grp.name, g, pool, folds,
                                          config.master_seed, config.workers,
                                          instrumentation);
        GroupReport grp_report;
        grp_report.group = grp.name;
        for (const auto& col : columns)
            grp_report.models.push_back(
                {learner_kind_name(col.kind), col.fold_aucs, col.mean_auc});
        report.per_group.push_back(std::move(grp_report));
        selected_per_group.push_back(select_top_models(columns, config.top_k));
    }

    MetaDataset meta = build_meta_dataset(selected_per_group, train.labels);
    model.meta = fit_meta(meta, config.meta_kind);
    model.meta_columns = meta.column_meta;
    auto [cv_mean, cv_std] = meta_cv(meta, config.meta_kind, folds);
    report.meta_cv_auc_mean = cv_mean;
    report.meta_cv_auc_std = cv_std;
    if (model.meta.kind == "logistic") report.meta_coefficients = model.meta.weights;

    // refit selected (group, kind) specs on all training rows for deployment
    model.group_models.resize(partition.groups.size());
    struct RefitTask {
        std::size_t group;
        std::size_t slot;
        LearnerKind kind;
    };
    std::vector<RefitTask> refits;
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        model.group_models[g].resize(selected_per_group[g].size());
        for (std::size_t s = 0; s < selected_per_group[g].size(); ++s)
            refits.push_back({g, s, selected_per_group[g][s].kind});
    }
    run_tasks(refits.size(), config.workers, [&](std::size_t ti) {
        const auto& t = refits[ti];
        LearnerSpec spec;
        for (const auto& p : pool)
            if (p.kind == t.kind) spec = p;
        spec.seed = mix_seed(config.master_seed, t.group, kind_id(t.kind),
                             static_cast<std::uint64_t>(config.k_folds));
        TabularDataset view =
            select_columns(train, partition.groups[t.group].feature_indices);
        model.group_models[t.group][t.slot] = fit_model(view.columns, view.labels, spec);
    });

    return {std::move(model), std::move(report)};
}

std::pair<StrikeModel, StrikeEvalReport> train_orthodox_stacking(
    const TabularDataset& train, const std::vector<LearnerSpec>& pool,
    const StackingConfig& config) {
    FeatureGroupPartition partition;
    partition.strategy = "manual";
    FeatureGroup all;
    all.name = "all";
    all.feature_indices.resize(train.columns.size());
    std::iota(all.feature_indices.begin(), all.feature_indices.end(), 0);
    partition.groups.push_back(std::move(all));
    return train_strike(train, partition, pool, config);
}

std::vector<double> predict_strike_dataset(const StrikeModel& model,
                                           const TabularDataset& ds) {
    Columns meta_features;
    for (std::size_t g = 0; g < model.partition.groups.size(); ++g) {
        TabularDataset view =
            select_columns(ds, model.partition.groups[g].feature_indices);
        for (const auto& base : model.group_models[g]) {
            std::vector<double> p = predict_proba(base, view.columns);
            for (double& v : p) v = logit(clip(v, kProbClip, 1.0 - kProbClip));
            meta_features.push_back(std::move(p));
        }
    }
    return meta_predict(model.meta, meta_features);
}

std::vector<double> predict_strike(const StrikeModel& model, const RawTable& raw) {
    TabularDataset ds = apply_preprocess(raw, model.preprocess);
    return predict_strike_dataset(model, ds);
}

std::pair<double, double> monolithic_cv_auc(const TabularDataset& ds,
                                            const LearnerSpec& spec,
                                            const FoldAssignment& folds) {
    std::vector<double> fold_aucs;
    for (int f = 0; f < folds.k; ++f) {
        std::vector<std::size_t> train_rows, val_rows;
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            (folds.fold_of_row[i] == f ? val_rows : train_rows).push_back(i);
        LearnerSpec fold_spec = spec;
        fold_spec.seed = mix_seed(spec.seed, kind_id(spec.kind),
                                  static_cast<std::uint64_t>(f));
        Columns x_train = take_columns_rows(ds.columns, train_rows);
        TrainedBaseModel m = fit_model(x_train, take_rows(ds.labels, train_rows), fold_spec);
        Columns x_val = take_columns_rows(ds.columns, val_rows);
        std::vector<double> p = predict_proba(m, x_val);
        fold_aucs.push_back(auc_roc(p, take_rows(ds.labels, val_rows)));
    }
    return cv_aggregate(fold_aucs);
}

}  // namespace strike
