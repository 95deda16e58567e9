#include <benchmark/benchmark.h>

#include <vector>

#include "strike/cmi.hpp"
#include "strike/common.hpp"
#include "strike/learners.hpp"
#include "strike/metrics.hpp"
#include "strike/stacking.hpp"
#include "strike/synth.hpp"
#include "strike/tabular.hpp"

using namespace strike;

namespace {

std::pair<Columns, std::vector<int>> bench_data(std::size_t n, std::size_t d) {
    Rng rng(42);
    Columns x(d, std::vector<double>(n));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j][i] = rng.uniform();
            z += x[j][i] - 0.5;
        }
        y[i] = rng.uniform() < sigmoid(z) ? 1 : 0;
    }
    return {x, y};
}

void bm_auc_roc(benchmark::State& state) {
    std::size_t n = state.range(0);
    Rng rng(1);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = rng.uniform();
        y[i] = i % 2;
    }
    for (auto _ : state) benchmark::DoNotOptimize(auc_roc(s, y));
}
BENCHMARK(bm_auc_roc)->Arg(10000)->Arg(100000);

void bm_quantile_bin(benchmark::State& state) {
    Rng rng(2);
    std::vector<double> v(state.range(0));
    for (auto& x : v) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(quantile_bin(v, 10));
}
BENCHMARK(bm_quantile_bin)->Arg(10000)->Arg(100000);

void bm_fit_logreg(benchmark::State& state) {
    auto [x, y] = bench_data(state.range(0), 20);
    LearnerSpec spec = LearnerSpec::defaults(LearnerKind::logreg);
    for (auto _ : state) benchmark::DoNotOptimize(fit_model(x, y, spec));
}
BENCHMARK(bm_fit_logreg)->Arg(2000)->Arg(10000);

void bm_fit_tree(benchmark::State& state) {
    auto [x, y] = bench_data(state.range(0), 10);
    LearnerSpec spec = LearnerSpec::defaults(LearnerKind::tree);
    for (auto _ : state) benchmark::DoNotOptimize(fit_model(x, y, spec));
}
BENCHMARK(bm_fit_tree)->Arg(2000)->Arg(10000);

void bm_fit_gbdt(benchmark::State& state) {
    auto [x, y] = bench_data(state.range(0), 10);
    LearnerSpec spec = LearnerSpec::defaults(LearnerKind::gbdt);
    spec.n_estimators = 20;
    for (auto _ : state) benchmark::DoNotOptimize(fit_model(x, y, spec));
}
BENCHMARK(bm_fit_gbdt)->Arg(2000);

void bm_group_oof(benchmark::State& state) {
    SynthDataset s = synth_fixture("conditional_independent", 2000, 7);
    TabularDataset ds;
    ds.columns = s.columns;
    ds.labels = s.labels;
    ds.n_rows = s.labels.size();
    ds.feature_names = s.feature_names;
    FoldAssignment folds = stratified_kfold(ds, 5, 0);
    std::vector<LearnerSpec> pool{LearnerSpec::defaults(LearnerKind::logreg),
                                  LearnerSpec::defaults(LearnerKind::tree)};
    int workers = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_group_oof(ds, "g", 0, pool, folds, 0, workers));
}
BENCHMARK(bm_group_oof)->Arg(1)->Arg(4);

void bm_cmi_matrix(benchmark::State& state) {
    Rng rng(3);
    std::size_t n = state.range(0);
    std::vector<int> y(n);
    std::vector<std::vector<double>> summaries(4, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2;
        for (auto& s : summaries) s[i] = rng.normal();
    }
    CmiSettings settings;
    std::vector<std::string> names{"a", "b", "c", "d"};
    for (auto _ : state)
        benchmark::DoNotOptimize(cmi_matrix_from_summaries(names, summaries, y, settings));
}
BENCHMARK(bm_cmi_matrix)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
