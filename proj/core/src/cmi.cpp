#include "strike/cmi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strike/common.hpp"

namespace strike {

std::vector<int> quantile_bin(const std::vector<double>& values, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("quantile_bin: B must be >= 2");
    if (values.empty()) throw std::invalid_argument("quantile_bin: empty input");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> edges;
    for (int j = 1; j < n_bins; ++j) {
        // nearest-rank quantile q_{j/B}: value at rank ceil(j*n/B), 1-based
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(static_cast<double>(j) * static_cast<double>(n) /
                      static_cast<double>(n_bins)));
        if (rank < 1) rank = 1;
        if (rank > n) rank = n;
        double edge = sorted[rank - 1];
        if (edges.empty() || edge > edges.back()) edges.push_back(edge);
    }
    std::vector<int> bins(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        // count of edges strictly less than v
        bins[i] = static_cast<int>(
            std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    }
    return bins;
}

std::vector<double> group_summary_first_pc(const TabularDataset& ds,
                                           const std::vector<std::size_t>& group,
                                           std::uint64_t seed, bool* degenerate) {
    if (group.empty()) throw std::invalid_argument("group_summary: empty group");
    const std::size_t n = ds.n_rows;
    const std::size_t d = group.size();
    if (degenerate) *degenerate = false;

    Eigen::MatrixXd centered(n, d);
    bool any_variance = false;
    for (std::size_t j = 0; j < d; ++j) {
        const auto& col = ds.columns[group[j]];
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) centered(i, j) = col[i] - mean;
        if (centered.col(j).cwiseAbs().maxCoeff() > 0.0) any_variance = true;
    }
    if (!any_variance) {
        if (degenerate) *degenerate = true;
        return std::vector<double>(n, 0.0);
    }

    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    Rng rng(mix_seed(seed, 0x9c7));
    Eigen::VectorXd v(d);
    for (std::size_t j = 0; j < d; ++j) v(j) = rng.normal();
    v.normalize();
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd next = cov * v;
        double norm = next.norm();
        if (norm == 0.0) break;
        next /= norm;
        double delta = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (delta < 1e-9) break;
    }
    // sign rule: largest-magnitude loading positive
    Eigen::Index max_idx;
    v.cwiseAbs().maxCoeff(&max_idx);
    if (v(max_idx) < 0.0) v = -v;

    Eigen::VectorXd proj = centered * v;
    return std::vector<double>(proj.data(), proj.data() + n);
}

double entropy(const std::vector<int>& a) {
    if (a.empty()) return 0.0;
    int max_bin = *std::max_element(a.begin(), a.end());
    std::vector<double> counts(static_cast<std::size_t>(max_bin) + 1, 0.0);
    for (int v : a) counts[v] += 1.0;
    double n = static_cast<double>(a.size());
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0) h -= (c / n) * std::log(c / n);
    return h;
}

double mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("mutual_information: length mismatch");
    int na = *std::max_element(a.begin(), a.end()) + 1;
    int nb = *std::max_element(b.begin(), b.end()) + 1;
    std::vector<double> joint(static_cast<std::size_t>(na) * nb, 0.0);
    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<std::size_t>(a[i]) * nb + b[i]] += 1.0;
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
    }
    double mi = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            double pij = joint[static_cast<std::size_t>(i) * nb + j] / n;
            if (pij <= 0.0) continue;
            mi += pij * std::log(pij / ((pa[i] / n) * (pb[j] / n)));
        }
    return mi < 0.0 ? 0.0 : mi;
}

double conditional_mutual_information(const std::vector<int>& a,
                                      const std::vector<int>& b,
                                      const std::vector<int>& y) {
    if (a.size() != b.size() || a.size() != y.size())
        throw std::invalid_argument("conditional_mutual_information: length mismatch");
    std::vector<int> a0, b0, a1, b1;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1) {
            a1.push_back(a[i]);
            b1.push_back(b[i]);
        } else {
            a0.push_back(a[i]);
            b0.push_back(b[i]);
        }
    }
    if (a0.empty() || a1.empty())
        throw std::invalid_argument("conditional_mutual_information: single-class labels");
    double n = static_cast<double>(y.size());
    double cmi = (static_cast<double>(a0.size()) / n) * mutual_information(a0, b0) +
                 (static_cast<double>(a1.size()) / n) * mutual_information(a1, b1);
    return cmi < 0.0 ? 0.0 : cmi;
}

CmiMatrix cmi_matrix_from_summaries(const std::vector<std::string>& group_names,
                                    const std::vector<std::vector<double>>& summaries,
                                    const std::vector<int>& y,
                                    const CmiSettings& settings) {
    const std::size_t g = summaries.size();
    if (g < 2) throw std::invalid_argument("cmi_matrix: need at least 2 groups");
    CmiMatrix m;
    m.group_names = group_names;
    m.summary_method = settings.summary_method;
    m.n_bins = settings.n_bins;
    m.n_samples = y.size();
    m.values.assign(g, std::vector<double>(g, 0.0));

    std::vector<std::vector<int>> binned(g);
    for (std::size_t i = 0; i < g; ++i)
        binned[i] = quantile_bin(summaries[i], settings.n_bins);

    double sum = 0.0;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j) {
            double v = conditional_mutual_information(binned[i], binned[j], y);
            m.values[i][j] = v;
            m.values[j][i] = v;
            sum += 2.0 * v;
        }
    m.off_diagonal_mean = sum / static_cast<double>(g * (g - 1));
    return m;
}

}  // namespace strike
