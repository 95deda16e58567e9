// strike: feature-group stacking for binary tabular classification.
//
// Subcommands: train, predict, evaluate, ablate-groups, ablate-meta,
// benchmark, cmi, synth. Configuration is a JSON file plus --key value
// overrides (dotted keys address nested fields; overrides win).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "strike/bundle.hpp"
#include "strike/cmi.hpp"
#include "strike/common.hpp"
#include "strike/grouping.hpp"
#include "strike/metrics.hpp"
#include "strike/stacking.hpp"
#include "strike/synth.hpp"
#include "strike/tabular.hpp"

using json = nlohmann::json;
using namespace strike;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json default_config() {
    return {{"dataset", ""},
            {"label_column", "target"},
            {"seed", 0},
            {"k_folds", 5},
            {"train_frac", 1.0},
            {"top_k", 3},
            {"meta", "logistic"},
            {"pool", json::array({"gbdt", "forest", "extratrees", "adaboost", "logreg"})},
            {"grouping",
             {{"strategy", "manual"}, {"n_groups", 0}, {"config", ""}, {"seed", 0}, {"n_bins", 10}}},
            {"cmi", {{"summary_method", "oof_logit"}, {"n_bins", 10}}},
            {"output_dir", "."},
            {"workers", 1}};
}

void apply_override(json& cfg, const std::string& key, const std::string& value) {
    json* node = &cfg;
    std::string rest = key, part;
    while (true) {
        std::size_t dot = rest.find('.');
        part = rest.substr(0, dot);
        if (dot == std::string::npos) break;
        node = &(*node)[part];
        rest = rest.substr(dot + 1);
    }
    json parsed = json::parse(value, nullptr, false);
    (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
}

json load_config(const std::string& path, const std::vector<std::string>& extras) {
    json cfg = default_config();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        json file = json::parse(in, nullptr, false);
        if (file.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
        cfg.merge_patch(file);
    }
    if (extras.size() % 2 != 0)
        throw ConfigError("overrides must come in --key value pairs");
    for (std::size_t i = 0; i < extras.size(); i += 2) {
        std::string key = extras[i];
        if (key.rfind("--", 0) != 0)
            throw ConfigError("expected --key, got '" + key + "'");
        apply_override(cfg, key.substr(2), extras[i + 1]);
    }
    return cfg;
}

std::vector<LearnerSpec> parse_pool(const json& cfg) {
    std::vector<LearnerSpec> pool;
    for (const auto& entry : cfg.at("pool")) {
        LearnerSpec spec;
        if (entry.is_string()) {
            spec = LearnerSpec::defaults(learner_kind_from_name(entry.get<std::string>()));
        } else if (entry.is_object()) {
            spec = LearnerSpec::defaults(
                learner_kind_from_name(entry.at("kind").get<std::string>()));
            if (entry.contains("n_estimators")) spec.n_estimators = entry["n_estimators"];
            if (entry.contains("learning_rate")) spec.learning_rate = entry["learning_rate"];
            if (entry.contains("max_depth")) spec.max_depth = entry["max_depth"];
            if (entry.contains("min_samples_split"))
                spec.min_samples_split = entry["min_samples_split"];
            if (entry.contains("l2")) spec.l2 = entry["l2"];
        } else {
            throw ConfigError("pool entries must be kind names or objects");
        }
        spec.validate();
        pool.push_back(spec);
    }
    if (pool.empty()) throw ConfigError("pool must name at least one learner");
    return pool;
}

std::vector<GroupSpecEntry> load_group_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open group config: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw ConfigError("group config must be a JSON array: " + path);
    std::vector<GroupSpecEntry> entries;
    for (const auto& g : j) {
        GroupSpecEntry e;
        e.name = g.at("name").get<std::string>();
        for (const auto& f : g.at("features")) e.features.push_back(f.get<std::string>());
        entries.push_back(std::move(e));
    }
    return entries;
}

int required_groups(const json& grouping) {
    int g = grouping.at("n_groups").get<int>();
    if (g < 1)
        throw ConfigError("grouping.n_groups must be set for strategy '" +
                          grouping.at("strategy").get<std::string>() + "'");
    return g;
}

FeatureGroupPartition make_partition(const json& grouping, const TabularDataset& ds) {
    std::string strategy = grouping.at("strategy").get<std::string>();
    std::uint64_t seed = grouping.at("seed").get<std::uint64_t>();
    if (strategy == "manual") {
        std::string path = grouping.at("config").get<std::string>();
        if (path.empty())
            throw ConfigError("grouping.config is required for the manual strategy");
        return manual_partition(load_group_config(path), ds.feature_names);
    }
    if (strategy == "corr") return correlation_partition(ds, required_groups(grouping), seed);
    if (strategy == "mi")
        return mi_partition(ds, required_groups(grouping),
                            grouping.at("n_bins").get<int>(), seed);
    if (strategy == "random")
        return random_round_robin_partition(ds.columns.size(), required_groups(grouping), seed);
    throw ConfigError("unknown grouping.strategy '" + strategy + "'");
}

StackingConfig stacking_config(const json& cfg) {
    StackingConfig sc;
    sc.k_folds = cfg.at("k_folds").get<int>();
    sc.top_k = cfg.at("top_k").get<int>();
    sc.meta_kind = cfg.at("meta").get<std::string>();
    sc.master_seed = cfg.at("seed").get<std::uint64_t>();
    sc.workers = cfg.at("workers").get<int>();
    if (sc.k_folds < 2) throw ConfigError("k_folds must be >= 2");
    if (sc.top_k < 1) throw ConfigError("top_k must be >= 1");
    if (sc.meta_kind != "logistic" && sc.meta_kind != "additive_binned")
        throw ConfigError("unknown meta kind '" + sc.meta_kind + "'");
    if (sc.workers < 1) throw ConfigError("workers must be >= 1");
    return sc;
}

struct LoadedData {
    RawTable raw;
    TabularDataset full;
    PreprocessStats stats;
};

LoadedData load_dataset(const json& cfg) {
    std::string path = cfg.at("dataset").get<std::string>();
    if (path.empty()) throw ConfigError("config field 'dataset' is required");
    LoadedData d;
    d.raw = load_csv(path, cfg.at("label_column").get<std::string>());
    std::tie(d.full, d.stats) = fit_preprocess(d.raw);
    return d;
}

std::filesystem::path out_path(const json& cfg, const std::string& name) {
    std::filesystem::path dir = cfg.at("output_dir").get<std::string>();
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json metrics_json(const std::vector<double>& p, const std::vector<int>& y) {
    return {{"auc", auc_roc(p, y)},
            {"f1", f1_score(p, y, 0.5)},
            {"log_loss", log_loss(p, y)},
            {"accuracy", accuracy(p, y, 0.5)},
            {"balanced_accuracy", balanced_accuracy(p, y, 0.5)}};
}

void require_both_classes(const std::vector<int>& y) {
    bool pos = false, neg = false;
    for (int v : y) (v == 1 ? pos : neg) = true;
    if (!pos || !neg)
        throw ConfigError("AUC undefined: input file contains a single class");
}

int cmd_train(const json& cfg) {
    LoadedData data = load_dataset(cfg);
    double frac = cfg.at("train_frac").get<double>();
    if (!(frac > 0.0) || frac > 1.0) throw ConfigError("train_frac must be in (0, 1]");

    TabularDataset train = data.full, holdout;
    bool split = frac < 1.0;
    if (split)
        std::tie(train, holdout) =
            stratified_split(data.full, frac, cfg.at("seed").get<std::uint64_t>());

    FeatureGroupPartition partition = make_partition(cfg.at("grouping"), train);
    auto pool = parse_pool(cfg);
    auto [model, report] = train_strike(train, partition, pool, stacking_config(cfg));
    model.preprocess = data.stats;

    json snapshot = cfg;
    snapshot.erase("workers");  // execution detail, keeps bundles worker-invariant
    save_bundle(out_path(cfg, "bundle.json").string(), model, snapshot);
    json rep = eval_report_to_json(report);
    if (split) rep["holdout"] = metrics_json(predict_strike_dataset(model, holdout), holdout.labels);
    write_json(out_path(cfg, "report.json"), rep);

    std::cout << "meta cv auc: " << fmt17(report.meta_cv_auc_mean) << " +/- "
              << fmt17(report.meta_cv_auc_std) << "\n";
    return 0;
}

int cmd_predict(const std::string& bundle_path, const std::string& input,
                const std::string& output) {
    json run_config;
    StrikeModel model = load_bundle(bundle_path, &run_config);
    std::string label = run_config.value("label_column", std::string());

    // the label column is optional at prediction time
    RawTable raw;
    try {
        raw = load_csv(input, label);
    } catch (const ConfigError&) {
        raw = load_csv(input, "");
    }
    std::vector<double> p = predict_strike(model, raw);

    std::string csv = "row_index,probability\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        csv += std::to_string(i) + "," + fmt17(p[i]) + "\n";
    write_text(output, csv);
    return 0;
}

int cmd_evaluate(const std::string& bundle_path, const std::string& input,
                 const std::string& output) {
    json run_config;
    StrikeModel model = load_bundle(bundle_path, &run_config);
    std::string label = run_config.value("label_column", std::string("target"));
    RawTable raw = load_csv(input, label);
    if (raw.labels.size() != raw.n_rows)
        throw ConfigError("evaluate requires the label column '" + label + "'");
    require_both_classes(raw.labels);
    json m = metrics_json(predict_strike(model, raw), raw.labels);
    std::cout << m.dump(2) << "\n";
    if (!output.empty()) write_json(output, m);
    return 0;
}

struct AblationRow {
    std::string strategy;
    bool has_seed = false;
    std::uint64_t seed = 0;
    double auc = 0.0;
    bool has_delta = false;
    double delta = 0.0;
};

int cmd_ablate_groups(const json& cfg) {
    LoadedData data = load_dataset(cfg);
    const TabularDataset& ds = data.full;
    auto pool = parse_pool(cfg);
    StackingConfig sc = stacking_config(cfg);

    auto run = [&](const FeatureGroupPartition& part) {
        auto [model, report] = train_strike(ds, part, pool, sc);
        return report.meta_cv_auc_mean;
    };

    std::vector<AblationRow> rows;
    json grouping = cfg.at("grouping");
    bool has_manual = !grouping.at("config").get<std::string>().empty();
    if (has_manual) {
        json g = grouping;
        g["strategy"] = "manual";
        rows.push_back({"manual", false, 0, run(make_partition(g, ds)), false, 0.0});
    }
    int n_groups = grouping.at("n_groups").get<int>();
    if (n_groups < 1 && has_manual) {
        // size the automatic strategies like the manual reference
        json g = grouping;
        g["strategy"] = "manual";
        n_groups = static_cast<int>(make_partition(g, ds).groups.size());
    }
    json auto_grouping = grouping;
    auto_grouping["n_groups"] = n_groups;
    for (const std::string& strategy : {"corr", "mi"}) {
        json g = auto_grouping;
        g["strategy"] = strategy;
        rows.push_back({strategy, false, 0, run(make_partition(g, ds)), false, 0.0});
    }
    double random_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        json g = auto_grouping;
        g["strategy"] = "random";
        g["seed"] = seed;
        double auc = run(make_partition(g, ds));
        random_sum += auc;
        rows.push_back({"random", true, seed, auc, false, 0.0});
    }
    rows.push_back({"random_mean", false, 0, random_sum / 5.0, false, 0.0});

    if (has_manual) {
        double manual_auc = rows.front().auc;
        for (auto& r : rows) {
            r.has_delta = true;
            r.delta = r.auc - manual_auc;
        }
    }

    std::string csv = "strategy,seed,meta_cv_auc,delta_vs_manual\n";
    json table = json::array();
    for (const auto& r : rows) {
        csv += r.strategy + "," + (r.has_seed ? std::to_string(r.seed) : "") + "," +
               fmt17(r.auc) + "," + (r.has_delta ? fmt17(r.delta) : "") + "\n";
        json row{{"strategy", r.strategy}, {"meta_cv_auc", r.auc}};
        row["seed"] = r.has_seed ? json(r.seed) : json();
        row["delta_vs_manual"] = r.has_delta ? json(r.delta) : json();
        table.push_back(row);
    }
    write_text(out_path(cfg, "ablate_groups.csv"), csv);
    write_json(out_path(cfg, "ablate_groups.json"), table);
    std::cout << csv;
    return 0;
}

int cmd_ablate_meta(const json& cfg) {
    LoadedData data = load_dataset(cfg);
    FeatureGroupPartition partition = make_partition(cfg.at("grouping"), data.full);
    auto pool = parse_pool(cfg);

    std::string csv = "meta,cv_auc_mean,cv_auc_std\n";
    json table = json::array();
    for (const std::string& kind : {"logistic", "additive_binned"}) {
        json c = cfg;
        c["meta"] = kind;
        auto [model, report] = train_strike(data.full, partition, pool, stacking_config(c));
        csv += kind + "," + fmt17(report.meta_cv_auc_mean) + "," +
               fmt17(report.meta_cv_auc_std) + "\n";
        table.push_back({{"meta", kind},
                         {"cv_auc_mean", report.meta_cv_auc_mean},
                         {"cv_auc_std", report.meta_cv_auc_std}});
    }
    write_text(out_path(cfg, "ablate_meta.csv"), csv);
    write_json(out_path(cfg, "ablate_meta.json"), table);
    std::cout << csv;
    return 0;
}

int cmd_benchmark(const json& cfg) {
    LoadedData data = load_dataset(cfg);
    const TabularDataset& ds = data.full;
    auto pool = parse_pool(cfg);
    StackingConfig sc = stacking_config(cfg);
    FoldAssignment folds = stratified_kfold(ds, sc.k_folds, sc.master_seed);

    std::string csv = "model,cv_auc_mean,cv_auc_std\n";
    json table = json::array();
    auto add_row = [&](const std::string& name, double mean, double std) {
        csv += name + "," + fmt17(mean) + "," + fmt17(std) + "\n";
        table.push_back({{"model", name}, {"cv_auc_mean", mean}, {"cv_auc_std", std}});
    };
    for (const auto& spec : pool) {
        auto [mean, std] = monolithic_cv_auc(ds, spec, folds);
        add_row(learner_kind_name(spec.kind), mean, std);
    }
    {
        auto [model, report] = train_orthodox_stacking(ds, pool, sc);
        add_row("orthodox_stacking", report.meta_cv_auc_mean, report.meta_cv_auc_std);
    }
    {
        FeatureGroupPartition partition = make_partition(cfg.at("grouping"), ds);
        auto [model, report] = train_strike(ds, partition, pool, sc);
        add_row("strike", report.meta_cv_auc_mean, report.meta_cv_auc_std);
    }
    write_text(out_path(cfg, "benchmark.csv"), csv);
    write_json(out_path(cfg, "benchmark.json"), table);
    std::cout << csv;
    return 0;
}

int cmd_cmi(const json& cfg) {
    LoadedData data = load_dataset(cfg);
    const TabularDataset& ds = data.full;
    FeatureGroupPartition partition = make_partition(cfg.at("grouping"), ds);

    CmiSettings settings;
    settings.summary_method = cfg.at("cmi").at("summary_method").get<std::string>();
    settings.n_bins = cfg.at("cmi").at("n_bins").get<int>();
    settings.seed = cfg.at("seed").get<std::uint64_t>();

    std::vector<std::string> names;
    std::vector<std::vector<double>> summaries;
    if (settings.summary_method == "first_pc") {
        for (const auto& grp : partition.groups) {
            names.push_back(grp.name);
            summaries.push_back(group_summary_first_pc(ds, grp.feature_indices, settings.seed));
        }
    } else if (settings.summary_method == "oof_logit") {
        // each group's scalar summary is the OOF logit of its best pool model
        auto pool = parse_pool(cfg);
        StackingConfig sc = stacking_config(cfg);
        FoldAssignment folds = stratified_kfold(ds, sc.k_folds, sc.master_seed);
        for (std::size_t g = 0; g < partition.groups.size(); ++g) {
            const auto& grp = partition.groups[g];
            TabularDataset view = select_columns(ds, grp.feature_indices);
            auto columns = generate_group_oof(view, grp.name, g, pool, folds,
                                              sc.master_seed, sc.workers);
            auto best = select_top_models(columns, 1);
            std::vector<double> summary;
            for (double p : best[0].probs) summary.push_back(logit(p));
            names.push_back(grp.name);
            summaries.push_back(std::move(summary));
        }
    } else {
        throw ConfigError("unknown cmi.summary_method '" + settings.summary_method + "'");
    }

    CmiMatrix m = cmi_matrix_from_summaries(names, summaries, ds.labels, settings);
    write_text(out_path(cfg, "cmi.csv"), cmi_matrix_to_csv(m));
    write_json(out_path(cfg, "cmi.json"), cmi_matrix_to_json(m));
    std::cout << "cmi off-diagonal mean: " << fmt17(m.off_diagonal_mean) << "\n";
    return 0;
}

int cmd_synth(const std::string& kind, std::size_t n, std::uint64_t seed,
              const std::string& output) {
    SynthDataset ds = synth_fixture(kind, n, seed);
    write_synth_csv(ds, output);
    json groups = json::array();
    for (const auto& g : ds.true_groups)
        groups.push_back({{"name", g.name}, {"features", g.features}});
    write_text(output + ".groups.json", groups.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature-group stacking for binary tabular classification"};
    app.require_subcommand(1);

    std::string config_path, bundle_path, input_path, output_path;
    std::string synth_kind = "conditional_independent";
    std::size_t synth_n = 1000;
    std::uint64_t synth_seed = 0;

    auto add_config_cmd = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run-config JSON file");
        sub->allow_extras();
        return sub;
    };

    CLI::App* train = add_config_cmd("train", "train a stacked model, write bundle + report");
    CLI::App* ablate_groups =
        add_config_cmd("ablate-groups", "compare grouping strategies (manual/corr/mi/random)");
    CLI::App* ablate_meta =
        add_config_cmd("ablate-meta", "compare logistic vs additive_binned meta-learners");
    CLI::App* benchmark =
        add_config_cmd("benchmark", "monolithic learners vs orthodox stacking vs grouped stacking");
    CLI::App* cmi = add_config_cmd("cmi", "pairwise conditional mutual information between groups");

    CLI::App* predict = app.add_subcommand("predict", "score a CSV with a trained bundle");
    predict->add_option("--bundle", bundle_path, "model bundle JSON")->required();
    predict->add_option("--input", input_path, "input CSV")->required();
    predict->add_option("--output", output_path, "scores CSV path")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "metrics of a bundle on a labeled CSV");
    evaluate->add_option("--bundle", bundle_path, "model bundle JSON")->required();
    evaluate->add_option("--input", input_path, "labeled CSV")->required();
    evaluate->add_option("--output", output_path, "metrics JSON path (optional)");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture CSV");
    synth->add_option("--kind", synth_kind,
                      "conditional_independent | group_nonlinear | xor_meta");
    synth->add_option("--n", synth_n, "row count");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--output", output_path, "CSV path")->required();

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : {train, ablate_groups, ablate_meta, benchmark, cmi})
            if (sub->parsed()) {
                json cfg = load_config(config_path, sub->remaining());
                if (sub == train) return cmd_train(cfg);
                if (sub == ablate_groups) return cmd_ablate_groups(cfg);
                if (sub == ablate_meta) return cmd_ablate_meta(cfg);
                if (sub == benchmark) return cmd_benchmark(cfg);
                return cmd_cmi(cfg);
            }
        if (predict->parsed()) return cmd_predict(bundle_path, input_path, output_path);
        if (evaluate->parsed()) return cmd_evaluate(bundle_path, input_path, output_path);
        if (synth->parsed()) return cmd_synth(synth_kind, synth_n, synth_seed, output_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
