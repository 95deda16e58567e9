#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strike/grouping.hpp"
#include "strike/learners.hpp"

namespace strike {

// Synthetic test-data generators with known generative densities.
//
//   conditional_independent: Y ~ Bernoulli(1/2); per group, class-conditional
//     unit Gaussians, independent across groups given Y. The true log-odds is
//     additive across groups.
//   group_nonlinear: within-group XOR-sign pairs (marginals uninformative,
//     pair products carry the signal); groups independent given Y.
//   xor_meta: two single-feature groups whose marginal group logits combine
//     nonlinearly into the true logit.
struct SynthDataset {
    std::string kind;
    std::vector<std::string> feature_names;
    Columns columns;  // raw, unscaled
    std::vector<int> labels;
    std::vector<GroupSpecEntry> true_groups;
};

SynthDataset synth_fixture(const std::string& kind, std::size_t n, std::uint64_t seed);

// Bayes log-odds of a feature row under the fixture's generative model.
double synth_true_logit(const std::string& kind, const std::vector<double>& row);

// Monte-Carlo estimate of the Bayes AUC (fresh samples scored by the true
// log-odds).
double synth_bayes_auc(const std::string& kind, std::size_t n_samples,
                       std::uint64_t seed);

void write_synth_csv(const SynthDataset& ds, const std::string& path);

}  // namespace strike
