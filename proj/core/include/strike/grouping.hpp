#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strike/tabular.hpp"

namespace strike {

struct FeatureGroup {
    std::string name;
    std::vector<std::size_t> feature_indices;
};

struct FeatureGroupPartition {
    std::vector<FeatureGroup> groups;
    std::string strategy;  // manual | corr | mi | random
    std::uint64_t seed = 0;
};

// Throws unless groups are pairwise disjoint, non-empty, and cover all columns.
void validate_partition(const FeatureGroupPartition& partition, std::size_t n_features);

struct GroupSpecEntry {
    std::string name;
    std::vector<std::string> features;  // names, or "rawcol=*" one-hot prefixes
};

// Config-order partition; every feature must match exactly one entry.
FeatureGroupPartition manual_partition(const std::vector<GroupSpecEntry>& config,
                                       const std::vector<std::string>& feature_names);

// Average-linkage clustering on d(i,j) = 1 - |pearson(i,j)| cut to G clusters.
FeatureGroupPartition correlation_partition(const TabularDataset& ds, int n_groups,
                                            std::uint64_t seed);

// Same linkage on d(i,j) = 1 - MI(i,j)/max(eps, min(H_i,H_j)) over quantile-binned
// columns.
FeatureGroupPartition mi_partition(const TabularDataset& ds, int n_groups,
                                   int n_bins, std::uint64_t seed);

// Seeded shuffle, then position i dealt to group i mod G.
FeatureGroupPartition random_round_robin_partition(std::size_t n_features,
                                                   int n_groups, std::uint64_t seed);

}  // namespace strike
