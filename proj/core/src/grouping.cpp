#include "strike/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "strike/cmi.hpp"
#include "strike/common.hpp"

namespace strike {

void validate_partition(const FeatureGroupPartition& partition, std::size_t n_features) {
    std::vector<int> owner(n_features, -1);
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        const auto& grp = partition.groups[g];
        if (grp.feature_indices.empty())
            throw ConfigError("group '" + grp.name + "' is empty");
        for (std::size_t f : grp.feature_indices) {
            if (f >= n_features)
                throw ConfigError("group '" + grp.name + "' references feature index " +
                                  std::to_string(f) + " out of range");
            if (owner[f] != -1)
                throw ConfigError("feature index " + std::to_string(f) +
                                  " assigned to more than one group");
            owner[f] = static_cast<int>(g);
        }
    }
    for (std::size_t f = 0; f < n_features; ++f)
        if (owner[f] == -1)
            throw ConfigError("feature index " + std::to_string(f) + " unassigned");
}

FeatureGroupPartition manual_partition(const std::vector<GroupSpecEntry>& config,
                                       const std::vector<std::string>& feature_names) {
    FeatureGroupPartition out;
    out.strategy = "manual";
    std::vector<int> owner(feature_names.size(), -1);
    for (const auto& entry : config) {
        FeatureGroup grp;
        grp.name = entry.name;
        for (const auto& pat : entry.features) {
            bool is_prefix = pat.size() >= 2 && pat.compare(pat.size() - 2, 2, "=*") == 0;
            std::string prefix = is_prefix ? pat.substr(0, pat.size() - 1) : "";
            bool matched = false;
            for (std::size_t f = 0; f < feature_names.size(); ++f) {
                const std::string& nm = feature_names[f];
                bool hit = is_prefix
                               ? nm.size() > prefix.size() &&
                                     nm.compare(0, prefix.size(), prefix) == 0
                               : nm == pat;
                if (!hit) continue;
                matched = true;
                if (owner[f] != -1)
                    throw ConfigError("feature '" + nm + "' matched by more than one group");
                owner[f] = 1;
                grp.feature_indices.push_back(f);
            }
            if (!matched)
                throw ConfigError("group '" + entry.name + "' pattern '" + pat +
                                  "' matches no feature");
        }
        if (grp.feature_indices.empty())
            throw ConfigError("group '" + entry.name + "' is empty");
        out.groups.push_back(std::move(grp));
    }
    for (std::size_t f = 0; f < feature_names.size(); ++f)
        if (owner[f] == -1)
            throw ConfigError("feature " + feature_names[f] + " unassigned");
    validate_partition(out, feature_names.size());
    return out;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;  // constant column
    return sab / std::sqrt(saa * sbb);
}

// Average-linkage agglomerative clustering via Lance-Williams updates.
// Tie-break: merge the pair with smallest (distance, min repr, max repr) where
// a cluster's representative is its smallest member index.
FeatureGroupPartition agglomerate(std::vector<std::vector<double>> dist,
                                  std::size_t n, int n_groups,
                                  const std::string& strategy) {
    if (n_groups < 2 || static_cast<std::size_t>(n_groups) > n)
        throw ConfigError("group count must be in [2, n_features]");

    std::vector<std::vector<std::size_t>> members(n);
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> repr(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {i};
        repr[i] = i;
    }
    std::size_t n_clusters = n;
    while (n_clusters > static_cast<std::size_t>(n_groups)) {
        double best_d = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0, best_b = 0;
        bool have_best = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                double d = dist[i][j];
                std::size_t lo = std::min(repr[i], repr[j]);
                std::size_t hi = std::max(repr[i], repr[j]);
                bool better;
                if (!have_best) {
                    better = true;
                } else {
                    std::size_t blo = std::min(repr[best_a], repr[best_b]);
                    std::size_t bhi = std::max(repr[best_a], repr[best_b]);
                    better = d < best_d ||
                             (d == best_d && (lo < blo || (lo == blo && hi < bhi)));
                }
                if (better) {
                    best_d = d;
                    best_a = i;
                    best_b = j;
                    have_best = true;
                }
            }
        }
        std::size_t a = best_a, b = best_b;
        double wa = static_cast<double>(members[a].size());
        double wb = static_cast<double>(members[b].size());
        for (std::size_t c = 0; c < n; ++c) {
            if (!alive[c] || c == a || c == b) continue;
            double d = (wa * dist[a][c] + wb * dist[b][c]) / (wa + wb);
            dist[a][c] = dist[c][a] = d;
        }
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        repr[a] = std::min(repr[a], repr[b]);
        alive[b] = false;
        --n_clusters;
    }

    // order groups by smallest member index
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return repr[x] < repr[y]; });

    FeatureGroupPartition out;
    out.strategy = strategy;
    for (std::size_t gi = 0; gi < order.size(); ++gi) {
        FeatureGroup grp;
        grp.name = "g" + std::to_string(gi);
        grp.feature_indices = members[order[gi]];
        std::sort(grp.feature_indices.begin(), grp.feature_indices.end());
        out.groups.push_back(std::move(grp));
    }
    validate_partition(out, n);
    return out;
}

}  // namespace

FeatureGroupPartition correlation_partition(const TabularDataset& ds, int n_groups,
                                            std::uint64_t seed) {
    const std::size_t d = ds.columns.size();
    std::vector<std::vector<double>> dist(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double r = pearson(ds.columns[i], ds.columns[j]);
            dist[i][j] = dist[j][i] = 1.0 - std::fabs(r);
        }
    auto out = agglomerate(std::move(dist), d, n_groups, "corr");
    out.seed = seed;
    return out;
}

FeatureGroupPartition mi_partition(const TabularDataset& ds, int n_groups,
                                   int n_bins, std::uint64_t seed) {
    const std::size_t d = ds.columns.size();
    std::vector<std::vector<int>> binned(d);
    std::vector<double> h(d);
    for (std::size_t i = 0; i < d; ++i) {
        binned[i] = quantile_bin(ds.columns[i], n_bins);
        h[i] = entropy(binned[i]);
    }
    constexpr double eps = 1e-12;
    std::vector<std::vector<double>> dist(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double mi = mutual_information(binned[i], binned[j]);
            double denom = std::max(eps, std::min(h[i], h[j]));
            double dd = 1.0 - mi / denom;
            dist[i][j] = dist[j][i] = clip(dd, 0.0, 1.0);
        }
    auto out = agglomerate(std::move(dist), d, n_groups, "mi");
    out.seed = seed;
    return out;
}

FeatureGroupPartition random_round_robin_partition(std::size_t n_features,
                                                   int n_groups, std::uint64_t seed) {
    if (n_groups < 2 || static_cast<std::size_t>(n_groups) > n_features)
        throw ConfigError("group count must be in [2, n_features]");
    std::vector<std::size_t> idx(n_features);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seed(seed, 0x5ee1));
    rng.shuffle(idx);
    FeatureGroupPartition out;
    out.strategy = "random";
    out.seed = seed;
    out.groups.resize(n_groups);
    for (int g = 0; g < n_groups; ++g)
        out.groups[g].name = "g" + std::to_string(g);
    for (std::size_t i = 0; i < n_features; ++i)
        out.groups[i % static_cast<std::size_t>(n_groups)].feature_indices.push_back(idx[i]);
    validate_partition(out, n_features);
    return out;
}

}  // namespace strike
