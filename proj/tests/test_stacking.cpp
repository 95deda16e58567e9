#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "strike/common.hpp"
#include "strike/metrics.hpp"
#include "strike/stacking.hpp"
#include "strike/synth.hpp"

using namespace strike;

namespace {

TabularDataset dataset_from_columns(std::vector<std::vector<double>> cols,
                                    std::vector<int> labels) {
    TabularDataset ds;
    ds.columns = std::move(cols);
    ds.labels = std::move(labels);
    ds.n_rows = ds.labels.size();
    for (std::size_t j = 0; j < ds.columns.size(); ++j)
        ds.feature_names.push_back("f" + std::to_string(j));
    return ds;
}

TabularDataset scaled_synth(const std::string& kind, std::size_t n,
                            std::uint64_t seed) {
    SynthDataset s = synth_fixture(kind, n, seed);
    TabularDataset ds = dataset_from_columns(s.columns, s.labels);
    for (auto& col : ds.columns) {
        double lo = *std::min_element(col.begin(), col.end());
        double hi = *std::max_element(col.begin(), col.end());
        for (double& v : col) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    }
    ds.feature_names = s.feature_names;
    return ds;
}

FeatureGroupPartition contiguous_partition(std::size_t n_features, int n_groups) {
    FeatureGroupPartition p;
    p.strategy = "manual";
    std::size_t per = n_features / n_groups;
    for (int g = 0; g < n_groups; ++g) {
        FeatureGroup grp;
        grp.name = "g" + std::to_string(g);
        std::size_t lo = g * per;
        std::size_t hi = g == n_groups - 1 ? n_features : lo + per;
        for (std::size_t f = lo; f < hi; ++f) grp.feature_indices.push_back(f);
        p.groups.push_back(std::move(grp));
    }
    return p;
}

OofColumn make_column(const std::string& kind_name, double mean_auc) {
    OofColumn c;
    c.group = "g";
    c.kind = learner_kind_from_name(kind_name);
    c.mean_auc = mean_auc;
    c.probs = {0.5, 0.5};
    return c;
}

}  // namespace

TEST_CASE("constant-predictor OOF equals the training folds' base rate") {
    // labels [1,0,1,0,1,0], folds {0,1},{2,3},{4,5}: a single-leaf learner
    // trained outside fold 0 sees labels of rows 2..5 -> mean 0.5
    TabularDataset ds = dataset_from_columns({{.1, .2, .3, .4, .5, .6}},
                                             {1, 0, 1, 0, 1, 0});
    FoldAssignment folds;
    folds.k = 3;
    folds.fold_of_row = {0, 0, 1, 1, 2, 2};
    LearnerSpec constant = LearnerSpec::defaults(LearnerKind::tree);
    constant.min_samples_split = 7;  // forces a single leaf
    auto cols = generate_group_oof(ds, "g0", 0, {constant}, folds, 0);
    REQUIRE(cols.size() == 1);
    for (double p : cols[0].probs) CHECK(p == doctest::Approx(0.5));
}

TEST_CASE("OOF leakage instrumentation: no row trains the model that scores it") {
    auto ds = scaled_synth("conditional_independent", 300, 3);
    FoldAssignment folds = stratified_kfold(ds, 5, 1);
    OofInstrumentation inst;
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg),
                                  LearnerSpec::defaults(LearnerKind::tree)};
    auto cols = generate_group_oof(ds, "g0", 0, pool, folds, 7, 1, &inst);
    CHECK(inst.fits.size() == 10);
    for (const auto& rec : inst.fits) {
        std::set<std::size_t> train(rec.train_rows.begin(), rec.train_rows.end());
        for (std::size_t r : rec.predicted_rows) CHECK(train.count(r) == 0);
        CHECK(train.size() + rec.predicted_rows.size() == ds.n_rows);
    }
    // fold cover: every OOF entry filled (clipped probabilities are in (0,1))
    for (const auto& col : cols)
        for (double p : col.probs) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
        }
}

TEST_CASE("generate_group_oof names a single-class fold") {
    TabularDataset ds = dataset_from_columns({{.1, .2, .3, .4}}, {1, 1, 0, 0});
    FoldAssignment folds;
    folds.k = 2;
    folds.fold_of_row = {0, 0, 1, 1};  // fold 0 all-positive
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::tree)};
    CHECK_THROWS_WITH_AS(generate_group_oof(ds, "g0", 0, pool, folds, 0),
                         doctest::Contains("fold 0"), std::invalid_argument);
}

TEST_CASE("select_top_models ordering and ties") {
    std::vector<OofColumn> cols{make_column("logreg", 0.7), make_column("tree", 0.9),
                                make_column("forest", 0.8), make_column("gbdt", 0.6),
                                make_column("adaboost", 0.65)};
    auto top = select_top_models(cols, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].mean_auc == 0.9);
    CHECK(top[1].mean_auc == 0.8);
    CHECK(top[2].mean_auc == 0.7);

    auto both = select_top_models({make_column("tree", 0.8), make_column("gbdt", 0.7)}, 3);
    CHECK(both.size() == 2);

    // tie at the boundary: lexicographic kind name wins
    auto tied = select_top_models({make_column("gbdt", 0.8), make_column("adaboost", 0.8),
                                   make_column("tree", 0.9)},
                                  2);
    CHECK(learner_kind_name(tied[1].kind) == "adaboost");
}

TEST_CASE("select_top_models is invariant under monotone AUC transforms") {
    std::vector<OofColumn> cols{make_column("logreg", 0.72), make_column("tree", 0.55),
                                make_column("forest", 0.83), make_column("gbdt", 0.61)};
    auto base = select_top_models(cols, 2);
    auto transformed = cols;
    for (auto& c : transformed) c.mean_auc = std::tanh(5.0 * c.mean_auc);
    auto after = select_top_models(transformed, 2);
    REQUIRE(base.size() == after.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(base[i].kind == after[i].kind);
}

TEST_CASE("build_meta_dataset logit transform and clipping") {
    OofColumn c;
    c.group = "g0";
    c.kind = LearnerKind::logreg;
    c.probs = {0.5, 0.7310585786300049, 1.0 - 1e-6};
    std::vector<int> y{0, 1, 1};
    auto meta = build_meta_dataset({{c}}, y);
    CHECK(meta.features[0][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(meta.features[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(meta.features[0][2] == doctest::Approx(std::log((1.0 - 1e-6) / 1e-6)));
    CHECK_THROWS(build_meta_dataset({{c}}, std::vector<int>{0, 1}));
}

TEST_CASE("fit_meta logistic recovers a well-specified single logit") {
    Rng rng(17);
    const std::size_t n = 50000;
    MetaDataset meta;
    meta.features.resize(1);
    for (std::size_t i = 0; i < n; ++i) {
        double ell = 2.0 * rng.normal();
        meta.features[0].push_back(ell);
        meta.labels.push_back(rng.uniform() < sigmoid(ell) ? 1 : 0);
    }
    auto m = fit_meta(meta, "logistic");
    CHECK(std::fabs(m.intercept) < 0.05);
    CHECK(std::fabs(m.weights[0] - 1.0) < 0.05);
}

TEST_CASE("fit_meta: duplicated meta-feature splits the weight, sum preserved") {
    Rng rng(19);
    const std::size_t n = 50000;
    MetaDataset meta;
    meta.features.resize(2);
    for (std::size_t i = 0; i < n; ++i) {
        double ell = 1.5 * rng.normal();
        meta.features[0].push_back(ell);
        meta.features[1].push_back(ell);
        meta.labels.push_back(rng.uniform() < sigmoid(ell) ? 1 : 0);
    }
    auto m = fit_meta(meta, "logistic");
    CHECK(std::fabs(m.weights[0] + m.weights[1] - 1.0) < 0.05);
}

TEST_CASE("fit_meta: zero-variance meta-feature gets zero weight") {
    Rng rng(23);
    MetaDataset meta;
    meta.features.resize(2);
    for (std::size_t i = 0; i < 2000; ++i) {
        double ell = rng.normal();
        meta.features[0].push_back(ell);
        meta.features[1].push_back(0.37);
        meta.labels.push_back(rng.uniform() < sigmoid(ell) ? 1 : 0);
    }
    auto m = fit_meta(meta, "logistic");
    CHECK(std::fabs(m.weights[1]) < 1e-6);
    CHECK_THROWS(fit_meta(MetaDataset{{{0.1, 0.2}}, {1, 1}, {}}, "logistic"));
}

TEST_CASE("fit_meta additive_binned fits a nonlinear link that logistic cannot") {
    Rng rng(29);
    const std::size_t n = 20000;
    MetaDataset meta;
    meta.features.resize(1);
    for (std::size_t i = 0; i < n; ++i) {
        double ell = 2.0 * rng.normal();
        double true_logit = 3.0 * std::tanh(2.0 * ell);  // saturating link
        meta.features[0].push_back(ell);
        meta.labels.push_back(rng.uniform() < sigmoid(true_logit) ? 1 : 0);
    }
    auto binned = fit_meta(meta, "additive_binned");
    auto p = meta_predict(binned, meta.features);
    double ll_binned = log_loss(p, meta.labels);
    auto logistic = fit_meta(meta, "logistic");
    double ll_logistic = log_loss(meta_predict(logistic, meta.features), meta.labels);
    CHECK(ll_binned < ll_logistic);
    for (const auto& edges : binned.bin_edges)
        for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);
}

TEST_CASE("train_strike: single group + logreg pool reduces to plain logreg") {
    auto ds = scaled_synth("conditional_independent", 2000, 5);
    StackingConfig cfg;
    cfg.top_k = 1;
    cfg.master_seed = 11;
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg)};
    auto part = contiguous_partition(ds.columns.size(), 1);
    auto [model, report] = train_strike(ds, part, pool, cfg);

    auto folds = stratified_kfold(ds, cfg.k_folds, cfg.master_seed);
    auto [mono_mean, mono_std] =
        monolithic_cv_auc(ds, LearnerSpec::defaults(LearnerKind::logreg), folds);
    CHECK(std::fabs(report.meta_cv_auc_mean - mono_mean) < 0.01);
}

TEST_CASE("train_orthodox_stacking equals train_strike on a single-group partition") {
    auto ds = scaled_synth("conditional_independent", 600, 9);
    StackingConfig cfg;
    cfg.master_seed = 3;
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg),
                                  LearnerSpec::defaults(LearnerKind::tree)};
    auto [orthodox, orep] = train_orthodox_stacking(ds, pool, cfg);
    FeatureGroupPartition part;
    part.strategy = "manual";
    FeatureGroup all;
    all.name = "all";
    for (std::size_t f = 0; f < ds.columns.size(); ++f) all.feature_indices.push_back(f);
    part.groups.push_back(all);
    auto [direct, drep] = train_strike(ds, part, pool, cfg);
    CHECK(orep.meta_cv_auc_mean == drep.meta_cv_auc_mean);
    CHECK(predict_strike_dataset(orthodox, ds) == predict_strike_dataset(direct, ds));
}

TEST_CASE("predict via meta forward pass matches hand computation") {
    MetaLearner m;
    m.kind = "logistic";
    m.intercept = -1.0;
    m.weights = {2.0};
    Columns one_logit{{0.5}};
    auto p = meta_predict(m, one_logit);
    CHECK(p[0] == doctest::Approx(0.5));  // sigma(-1 + 2*0.5)
    m.weights = {0.0};
    m.intercept = 0.0;
    CHECK(meta_predict(m, one_logit)[0] == doctest::Approx(0.5));
}

TEST_CASE("end-to-end determinism across worker counts") {
    auto ds = scaled_synth("conditional_independent", 500, 13);
    auto part = contiguous_partition(ds.columns.size(), 3);
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg),
                                  LearnerSpec::defaults(LearnerKind::gbdt),
                                  LearnerSpec::defaults(LearnerKind::tree)};
    for (auto& spec : pool) spec.n_estimators = 10;
    std::vector<std::vector<double>> outputs;
    for (int workers : {1, 4, 8}) {
        StackingConfig cfg;
        cfg.master_seed = 21;
        cfg.workers = workers;
        auto [model, report] = train_strike(ds, part, pool, cfg);
        outputs.push_back(predict_strike_dataset(model, ds));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
}

TEST_CASE("meta-feature count is sum over groups of min(k, pool size)") {
    auto ds = scaled_synth("conditional_independent", 400, 15);
    auto part = contiguous_partition(ds.columns.size(), 3);
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg),
                                  LearnerSpec::defaults(LearnerKind::tree)};
    StackingConfig cfg;
    cfg.top_k = 3;
    cfg.master_seed = 2;
    auto [model, report] = train_strike(ds, part, pool, cfg);
    CHECK(model.meta_columns.size() == 3 * 2);  // min(3, |pool|=2) per group
    CHECK(model.meta.weights.size() == 6);
}
