#include "strike/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "strike/common.hpp"
#include "strike/metrics.hpp"

namespace strike {

namespace {

// conditional_independent: 3 groups x 12 features, shift 0.16 per feature
constexpr int kCiGroups = 3;
constexpr int kCiPerGroup = 12;
constexpr double kCiShift = 0.16;

// group_nonlinear: 3 groups x 4 features (2 XOR pairs per group)
constexpr int kGnGroups = 3;
constexpr int kGnPairs = 2;  // per group
constexpr double kGnQ1 = 0.8;
constexpr double kGnQ0 = 0.2;

// xor_meta: saturating + accelerating per-group shapes
double xm_h1(double s) { return 4.0 * std::tanh(2.0 * s); }
double xm_h2(double s) {
    double c = clip(s, -3.0, 3.0);
    return 2.5 * (c < 0 ? -c * c : c * c) / 3.0;
}

std::vector<GroupSpecEntry> contiguous_groups(int n_groups, int per_group) {
    std::vector<GroupSpecEntry> groups;
    for (int g = 0; g < n_groups; ++g) {
        GroupSpecEntry e;
        e.name = "g" + std::to_string(g);
        for (int j = 0; j < per_group; ++j)
            e.features.push_back("f" + std::to_string(g * per_group + j));
        groups.push_back(std::move(e));
    }
    return groups;
}

SynthDataset make_conditional_independent(std::size_t n, std::uint64_t seed) {
    SynthDataset ds;
    ds.kind = "conditional_independent";
    const int d = kCiGroups * kCiPerGroup;
    for (int j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    ds.true_groups = contiguous_groups(kCiGroups, kCiPerGroup);
    ds.columns.assign(d, {});
    Rng rng(mix_seed(seed, 0xc1));
    for (std::size_t i = 0; i < n; ++i) {
        int y = rng.uniform() < 0.5 ? 1 : 0;
        ds.labels.push_back(y);
        for (int j = 0; j < d; ++j)
            ds.columns[j].push_back(rng.normal() + (y == 1 ? kCiShift : 0.0));
    }
    return ds;
}

SynthDataset make_group_nonlinear(std::size_t n, std::uint64_t seed) {
    SynthDataset ds;
    ds.kind = "group_nonlinear";
    const int per_group = 2 * kGnPairs;
    const int d = kGnGroups * per_group;
    for (int j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    ds.true_groups = contiguous_groups(kGnGroups, per_group);
    ds.columns.assign(d, {});
    Rng rng(mix_seed(seed, 0x6e));
    for (std::size_t i = 0; i < n; ++i) {
        int y = rng.uniform() < 0.5 ? 1 : 0;
        ds.labels.push_back(y);
        double q = y == 1 ? kGnQ1 : kGnQ0;
        for (int g = 0; g < kGnGroups; ++g)
            for (int p = 0; p < kGnPairs; ++p) {
                double t = rng.uniform() < q ? 1.0 : -1.0;
                double s = rng.uniform() < 0.5 ? 1.0 : -1.0;
                double m1 = std::fabs(rng.normal());
                double m2 = std::fabs(rng.normal());
                ds.columns[g * per_group + 2 * p].push_back(s * m1);
                ds.columns[g * per_group + 2 * p + 1].push_back(s * t * m2);
            }
    }
    return ds;
}

SynthDataset make_xor_meta(std::size_t n, std::uint64_t seed) {
    SynthDataset ds;
    ds.kind = "xor_meta";
    ds.feature_names = {"f0", "f1"};
    ds.true_groups = contiguous_groups(2, 1);
    ds.columns.assign(2, {});
    Rng rng(mix_seed(seed, 0x40));
    for (std::size_t i = 0; i < n; ++i) {
        double s1 = rng.normal();
        double s2 = rng.normal();
        double p = sigmoid(xm_h1(s1) + xm_h2(s2));
        ds.labels.push_back(rng.uniform() < p ? 1 : 0);
        ds.columns[0].push_back(s1);
        ds.columns[1].push_back(s2);
    }
    return ds;
}

}  // namespace

SynthDataset synth_fixture(const std::string& kind, std::size_t n, std::uint64_t seed) {
    if (kind == "conditional_independent") return make_conditional_independent(n, seed);
    if (kind == "group_nonlinear") return make_group_nonlinear(n, seed);
    if (kind == "xor_meta") return make_xor_meta(n, seed);
    throw ConfigError("unknown fixture kind '" + kind + "'");
}

double synth_true_logit(const std::string& kind, const std::vector<double>& row) {
    if (kind == "conditional_independent") {
        double z = 0.0;
        for (double x : row) z += kCiShift * (x - kCiShift / 2.0);
        return z;
    }
    if (kind == "group_nonlinear") {
        double lp = std::log(kGnQ1 / kGnQ0);
        double ln = std::log((1.0 - kGnQ1) / (1.0 - kGnQ0));
        double z = 0.0;
        for (std::size_t p = 0; p + 1 < row.size(); p += 2)
            z += row[p] * row[p + 1] > 0.0 ? lp : ln;
        return z;
    }
    if (kind == "xor_meta") return xm_h1(row[0]) + xm_h2(row[1]);
    throw ConfigError("unknown fixture kind '" + kind + "'");
}

double synth_bayes_auc(const std::string& kind, std::size_t n_samples,
                       std::uint64_t seed) {
    SynthDataset ds = synth_fixture(kind, n_samples, mix_seed(seed, 0xbae5));
    std::vector<double> scores(n_samples);
    std::vector<double> row(ds.columns.size());
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < ds.columns.size(); ++j) row[j] = ds.columns[j][i];
        scores[i] = synth_true_logit(kind, row);
    }
    return auc_roc(scores, ds.labels);
}

void write_synth_csv(const SynthDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write fixture CSV: " + path);
    for (const auto& nm : ds.feature_names) out << nm << ",";
    out << "target\n";
    char buf[40];
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        for (std::size_t j = 0; j < ds.columns.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.columns[j][i]);
            out << buf << ",";
        }
        out << ds.labels[i] << "\n";
    }
}

}  // namespace strike
