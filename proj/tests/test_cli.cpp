// End-to-end tests of the command-line binary. The binary path arrives as a
// positional argument from CTest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <vector>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "strike/metrics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

static std::string g_cli;
static fs::path g_dir;

namespace {

int run(const std::string& args) {
    std::string cmd = g_cli + " " + args + " >" + (g_dir / "stdout.txt").string() +
                      " 2>" + (g_dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

fs::path fixture_csv() {
    fs::path csv = g_dir / "fixture.csv";
    if (!fs::exists(csv))
        REQUIRE(run("synth --kind conditional_independent --n 400 --seed 5 --output " +
                    csv.string()) == 0);
    return csv;
}

fs::path base_config(const std::string& name, const json& extra = json::object()) {
    fs::path csv = fixture_csv();
    json cfg{{"dataset", csv.string()},
             {"label_column", "target"},
             {"seed", 9},
             {"k_folds", 3},
             {"top_k", 2},
             {"pool", json::array({"logreg", "tree"})},
             {"grouping", {{"config", (csv.string() + ".groups.json")}}},
             {"output_dir", (g_dir / name).string()}};
    cfg.merge_patch(extra);
    fs::path path = g_dir / (name + ".json");
    write_file(path, cfg.dump(2));
    return path;
}

}  // namespace

TEST_CASE("synth generation is reproducible byte-for-byte") {
    fs::path a = g_dir / "synth_a.csv", b = g_dir / "synth_b.csv";
    REQUIRE(run("synth --kind group_nonlinear --n 200 --seed 3 --output " + a.string()) == 0);
    REQUIRE(run("synth --kind group_nonlinear --n 200 --seed 3 --output " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).size() > 0);
}

TEST_CASE("train writes a bundle and a report with the meta CV AUC") {
    fs::path cfg = base_config("train_smoke");
    REQUIRE(run("train --config " + cfg.string()) == 0);
    fs::path out = g_dir / "train_smoke";
    CHECK(fs::exists(out / "bundle.json"));
    json report = json::parse(slurp(out / "report.json"));
    double auc = report.at("meta").at("cv_auc_mean").get<double>();
    CHECK(auc > 0.5);
    CHECK(auc <= 1.0);
}

TEST_CASE("train is byte-deterministic across reruns and worker counts") {
    fs::path cfg = base_config("det_a");
    REQUIRE(run("train --config " + cfg.string()) == 0);
    std::string first = slurp(g_dir / "det_a" / "bundle.json");

    REQUIRE(run("train --config " + cfg.string()) == 0);
    CHECK(slurp(g_dir / "det_a" / "bundle.json") == first);

    fs::path cfg_b = base_config("det_b", {{"workers", 4}});
    REQUIRE(run("train --config " + cfg_b.string()) == 0);
    // bundles differ only in the run-config snapshot; predictions must agree
    json ja = json::parse(first);
    json jb = json::parse(slurp(g_dir / "det_b" / "bundle.json"));
    ja.erase("run_config");
    jb.erase("run_config");
    CHECK(ja == jb);
}

TEST_CASE("exit-code contract: config errors are 2") {
    CHECK(run("train --config /nonexistent/cfg.json") == 2);
    fs::path bad_meta = base_config("bad_meta", {{"meta", "cubist"}});
    CHECK(run("train --config " + bad_meta.string()) == 2);
    std::string err = slurp(g_dir / "stderr.txt");
    CHECK(err.find("meta") != std::string::npos);
    CHECK(run("no-such-subcommand") == 2);
    fs::path bad_label = base_config("bad_label", {{"label_column", "no_such_column"}});
    CHECK(run("train --config " + bad_label.string()) == 2);
}

TEST_CASE("predict emits row_index,probability and is stable across reruns") {
    fs::path cfg = base_config("predict_run");
    REQUIRE(run("train --config " + cfg.string()) == 0);
    fs::path bundle = g_dir / "predict_run" / "bundle.json";
    fs::path scores = g_dir / "scores.csv";
    REQUIRE(run("predict --bundle " + bundle.string() + " --input " +
                fixture_csv().string() + " --output " + scores.string()) == 0);

    std::ifstream in(scores);
    std::string line;
    std::getline(in, line);
    CHECK(line == "row_index,probability");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        CHECK(std::stoul(line.substr(0, comma)) == rows);
        double p = std::stod(line.substr(comma + 1));
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        ++rows;
    }
    CHECK(rows == 400);

    fs::path scores2 = g_dir / "scores2.csv";
    REQUIRE(run("predict --bundle " + bundle.string() + " --input " +
                fixture_csv().string() + " --output " + scores2.string()) == 0);
    CHECK(slurp(scores) == slurp(scores2));

    // schema mismatch: a CSV with entirely different columns
    fs::path bad = g_dir / "bad_schema.csv";
    write_file(bad, "alpha,beta\n1,2\n3,4\n");
    CHECK(run("predict --bundle " + bundle.string() + " --input " + bad.string() +
              " --output " + (g_dir / "bad_scores.csv").string()) == 2);
}

TEST_CASE("evaluate reports metrics consistent with the scores CSV") {
    fs::path cfg = base_config("eval_run");
    REQUIRE(run("train --config " + cfg.string()) == 0);
    fs::path bundle = g_dir / "eval_run" / "bundle.json";
    fs::path metrics = g_dir / "metrics.json";
    REQUIRE(run("evaluate --bundle " + bundle.string() + " --input " +
                fixture_csv().string() + " --output " + metrics.string()) == 0);
    json m = json::parse(slurp(metrics));
    for (const char* key : {"auc", "f1", "log_loss", "accuracy", "balanced_accuracy"}) {
        CHECK(m.contains(key));
        CHECK(m.at(key).get<double>() >= 0.0);
    }
    CHECK(m.at("auc").get<double>() <= 1.0);

    // recompute AUC from the scores CSV and the fixture labels
    fs::path scores = g_dir / "eval_scores.csv";
    REQUIRE(run("predict --bundle " + bundle.string() + " --input " +
                fixture_csv().string() + " --output " + scores.string()) == 0);
    std::vector<double> p;
    {
        std::ifstream in(scores);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) p.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
    std::vector<int> y;
    {
        std::ifstream in(fixture_csv());
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) y.push_back(line.back() - '0');
    }
    CHECK(std::fabs(strike::auc_roc(p, y) - m.at("auc").get<double>()) < 1e-12);
    CHECK(std::fabs(strike::log_loss(p, y) - m.at("log_loss").get<double>()) < 1e-12);
}

TEST_CASE("evaluate on a single-class file exits 2 with an AUC message") {
    fs::path cfg = base_config("single_class");
    REQUIRE(run("train --config " + cfg.string()) == 0);
    fs::path bundle = g_dir / "single_class" / "bundle.json";

    // keep the header and only label-1 rows
    std::ifstream in(fixture_csv());
    std::ostringstream filtered;
    std::string line;
    std::getline(in, line);
    filtered << line << "\n";
    while (std::getline(in, line))
        if (line.back() == '1') filtered << line << "\n";
    fs::path one_class = g_dir / "one_class.csv";
    write_file(one_class, filtered.str());

    CHECK(run("evaluate --bundle " + bundle.string() + " --input " + one_class.string()) == 2);
    std::string err = slurp(g_dir / "stderr.txt");
    CHECK(err.find("AUC undefined") != std::string::npos);
}

TEST_CASE("command-line overrides win over the config file") {
    fs::path cfg = base_config("override_a", {{"seed", 1}});
    REQUIRE(run("train --config " + cfg.string() + " --seed 2 --output_dir " +
                (g_dir / "override_b").string()) == 0);
    json run_cfg;
    json bundle = json::parse(slurp(g_dir / "override_b" / "bundle.json"));
    CHECK(bundle.at("run_config").at("seed").get<int>() == 2);
    CHECK(bundle.at("master_seed").get<int>() == 2);
}

TEST_CASE("ablation and benchmark tables have the promised shape") {
    fs::path cfg = base_config("tables", {{"grouping", {{"n_groups", 3}}}});
    REQUIRE(run("ablate-groups --config " + cfg.string()) == 0);
    json t = json::parse(slurp(g_dir / "tables" / "ablate_groups.json"));
    // manual + corr + mi + 5 random + random_mean
    CHECK(t.size() == 9);
    CHECK(t[0].at("strategy") == "manual");
    CHECK(t.back().at("strategy") == "random_mean");
    CHECK(t[0].at("delta_vs_manual").get<double>() == 0.0);

    REQUIRE(run("ablate-meta --config " + cfg.string()) == 0);
    json am = json::parse(slurp(g_dir / "tables" / "ablate_meta.json"));
    CHECK(am.size() == 2);
    CHECK(am[0].at("meta") == "logistic");
    CHECK(am[1].at("meta") == "additive_binned");

    REQUIRE(run("benchmark --config " + cfg.string()) == 0);
    json b = json::parse(slurp(g_dir / "tables" / "benchmark.json"));
    CHECK(b.size() == 2 + 2);  // pool learners + orthodox + strike
    CHECK(b[b.size() - 2].at("model") == "orthodox_stacking");
    CHECK(b.back().at("model") == "strike");

    // identical rerun → identical tables
    std::string first = slurp(g_dir / "tables" / "ablate_groups.csv");
    REQUIRE(run("ablate-groups --config " + cfg.string()) == 0);
    CHECK(slurp(g_dir / "tables" / "ablate_groups.csv") == first);
}

TEST_CASE("cmi emits a symmetric matrix as CSV plus a JSON sidecar") {
    fs::path cfg = base_config("cmi_run", {{"grouping", {{"n_groups", 3}}}});
    REQUIRE(run("cmi --config " + cfg.string()) == 0);
    json j = json::parse(slurp(g_dir / "cmi_run" / "cmi.json"));
    auto values = j.at("values").get<std::vector<std::vector<double>>>();
    REQUIRE(values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(values[i][i] == 0.0);
        for (std::size_t k = 0; k < 3; ++k) CHECK(values[i][k] == values[k][i]);
    }
    CHECK(j.at("settings").at("summary_method") == "oof_logit");
    std::string csv = slurp(g_dir / "cmi_run" / "cmi.csv");
    CHECK(csv.rfind("group,", 0) == 0);
}

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (argv[i][0] != '-') g_cli = argv[i];
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli-binary>\n");
        return 1;
    }
    g_dir = fs::temp_directory_path() / "strike_cli_tests";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
