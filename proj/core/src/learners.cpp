#include "strike/learners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "strike/common.hpp"

namespace strike {

std::string learner_kind_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::logreg: return "logreg";
        case LearnerKind::tree: return "tree";
        case LearnerKind::forest: return "forest";
        case LearnerKind::extratrees: return "extratrees";
        case LearnerKind::gbdt: return "gbdt";
        case LearnerKind::adaboost: return "adaboost";
    }
    throw std::logic_error("unknown learner kind");
}

LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "logreg") return LearnerKind::logreg;
    if (name == "tree") return LearnerKind::tree;
    if (name == "forest") return LearnerKind::forest;
    if (name == "extratrees") return LearnerKind::extratrees;
    if (name == "gbdt") return LearnerKind::gbdt;
    if (name == "adaboost") return LearnerKind::adaboost;
    throw ConfigError("unknown learner kind '" + name + "'");
}

LearnerSpec LearnerSpec::defaults(LearnerKind kind, std::uint64_t seed) {
    LearnerSpec s;
    s.kind = kind;
    s.seed = seed;
    switch (kind) {
        case LearnerKind::logreg:
            s.l2 = 1e-6;
            break;
        case LearnerKind::tree:
            s.max_depth = 8;
            s.min_samples_split = 2;
            break;
        case LearnerKind::forest:
        case LearnerKind::extratrees:
            s.n_estimators = 100;
            s.max_depth = 12;
            break;
        case LearnerKind::gbdt:
            s.n_estimators = 100;
            s.learning_rate = 0.1;
            s.max_depth = 3;
            break;
        case LearnerKind::adaboost:
            s.n_estimators = 100;
            s.max_depth = 1;
            break;
    }
    return s;
}

void LearnerSpec::validate() const {
    if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
    if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    if (l2 < 0.0) throw ConfigError("l2 must be >= 0");
}

double TreeNodes::predict_row(const Columns& columns, std::size_t row) const {
    int node = 0;
    while (feature[node] != -1) {
        double v = columns[feature[node]][row];
        node = v <= threshold[node] ? left[node] : right[node];
    }
    return leaf_value[node];
}

std::size_t TreeNodes::leaf_count() const {
    std::size_t leaves = 0;
    for (int f : feature) leaves += (f == -1);
    return leaves;
}

namespace {

void check_input(const Columns& x, const std::vector<int>& y) {
    if (x.empty()) throw std::invalid_argument("fit: X has no columns");
    for (const auto& col : x) {
        if (col.size() != y.size())
            throw std::invalid_argument("fit: column length mismatch");
        for (double v : col)
            if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite value in X");
    }
    for (int v : y)
        if (v != 0 && v != 1) throw std::invalid_argument("fit: labels must be 0/1");
}

struct GrowConfig {
    int max_depth = 8;
    int min_samples_split = 2;
    std::size_t mtry = 0;        // 0 = all features
    bool random_threshold = false;
    Rng* rng = nullptr;
};

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

double gini(double w_pos, double w_total) {
    if (w_total <= 0.0) return 0.0;
    double p = w_pos / w_total;
    return 2.0 * p * (1.0 - p);
}

// Exhaustive midpoint scan for the best weighted-Gini split of one feature.
void scan_gini_feature(const Columns& x, const std::vector<int>& y,
                       const std::vector<double>& w,
                       const std::vector<std::size_t>& rows, std::size_t feat,
                       double parent_impurity, double w_total, double w_pos,
                       Split& best) {
    const auto& col = x[feat];
    std::vector<std::pair<double, std::size_t>> vals;
    vals.reserve(rows.size());
    for (std::size_t r : rows) vals.emplace_back(col[r], r);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double wl = 0.0, wl_pos = 0.0;
    for (std::size_t k = 1; k < vals.size(); ++k) {
        std::size_t r = vals[k - 1].second;
        wl += w[r];
        wl_pos += w[r] * y[r];
        double lo = vals[k - 1].first, hi = vals[k].first;
        if (!(hi > lo)) continue;
        double thr = 0.5 * (lo + hi);
        if (!(thr < hi)) thr = lo;  // rounding guard: keep exactly k rows left
        double wr = w_total - wl, wr_pos = w_pos - wl_pos;
        double child = (wl / w_total) * gini(wl_pos, wl) +
                       (wr / w_total) * gini(wr_pos, wr);
        double gain = parent_impurity - child;
        if (gain > best.gain && gain > 1e-15) {
            best.found = true;
            best.feature = feat;
            best.threshold = thr;
            best.gain = gain;
        }
    }
}

// extratrees: a single uniform-random threshold between node min and max.
void scan_random_threshold(const Columns& x, const std::vector<int>& y,
                           const std::vector<double>& w,
                           const std::vector<std::size_t>& rows, std::size_t feat,
                           double parent_impurity, double w_total, double w_pos,
                           Rng& rng, Split& best) {
    const auto& col = x[feat];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r : rows) {
        lo = std::min(lo, col[r]);
        hi = std::max(hi, col[r]);
    }
    double u = rng.uniform();
    if (!(hi > lo)) return;
    double thr = lo + u * (hi - lo);
    if (!(thr < hi)) thr = std::nextafter(hi, lo);
    double wl = 0.0, wl_pos = 0.0;
    for (std::size_t r : rows) {
        if (col[r] <= thr) {
            wl += w[r];
            wl_pos += w[r] * y[r];
        }
    }
    if (wl <= 0.0 || wl >= w_total) return;
    double wr = w_total - wl, wr_pos = w_pos - wl_pos;
    double child =
        (wl / w_total) * gini(wl_pos, wl) + (wr / w_total) * gini(wr_pos, wr);
    double gain = parent_impurity - child;
    if (gain > best.gain && gain > 1e-15) {
        best.found = true;
        best.feature = feat;
        best.threshold = thr;
        best.gain = gain;
    }
}

std::vector<std::size_t> candidate_features(std::size_t d, const GrowConfig& cfg) {
    if (cfg.mtry == 0 || cfg.mtry >= d) {
        std::vector<std::size_t> all(d);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    // sample mtry distinct features; ascending order keeps the tie-break rule
    std::vector<std::size_t> pool(d);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < cfg.mtry; ++i) {
        std::size_t j = i + static_cast<std::size_t>(cfg.rng->uniform_int(d - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(cfg.mtry);
    std::sort(pool.begin(), pool.end());
    return pool;
}

int add_leaf(TreeNodes& t, double value) {
    t.feature.push_back(-1);
    t.threshold.push_back(0.0);
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.leaf_value.push_back(value);
    return static_cast<int>(t.feature.size()) - 1;
}

int add_internal(TreeNodes& t, std::size_t feat, double thr) {
    t.feature.push_back(static_cast<int>(feat));
    t.threshold.push_back(thr);
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.leaf_value.push_back(0.0);
    return static_cast<int>(t.feature.size()) - 1;
}

int grow_gini(TreeNodes& tree, const Columns& x, const std::vector<int>& y,
              const std::vector<double>& w, std::vector<std::size_t>& rows,
              int depth, const GrowConfig& cfg) {
    double w_total = 0.0, w_pos = 0.0;
    for (std::size_t r : rows) {
        w_total += w[r];
        w_pos += w[r] * y[r];
    }
    double leaf = w_total > 0.0 ? w_pos / w_total : 0.5;
    double impurity = gini(w_pos, w_total);
    if (depth >= cfg.max_depth ||
        rows.size() < static_cast<std::size_t>(cfg.min_samples_split) ||
        impurity <= 0.0)
        return add_leaf(tree, leaf);

    Split best;
    auto feats = candidate_features(x.size(), cfg);
    for (std::size_t f : feats) {
        if (cfg.random_threshold)
            scan_random_threshold(x, y, w, rows, f, impurity, w_total, w_pos,
                                  *cfg.rng, best);
        else
            scan_gini_feature(x, y, w, rows, f, impurity, w_total, w_pos, best);
    }
    if (!best.found) return add_leaf(tree, leaf);

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
        (x[best.feature][r] <= best.threshold ? left_rows : right_rows).push_back(r);
    if (left_rows.empty() || right_rows.empty()) return add_leaf(tree, leaf);
    rows.clear();
    rows.shrink_to_fit();

    int node = add_internal(tree, best.feature, best.threshold);
    int l = grow_gini(tree, x, y, w, left_rows, depth + 1, cfg);
    int r = grow_gini(tree, x, y, w, right_rows, depth + 1, cfg);
    tree.left[node] = l;
    tree.right[node] = r;
    return node;
}

// Squared-error regression tree on residuals; leaves carry Newton steps
// sum(y - p) / max(eps, sum(p (1-p))).
int grow_residual(TreeNodes& tree, const Columns& x, const std::vector<int>& y,
                  const std::vector<double>& p, const std::vector<double>& resid,
                  std::vector<std::size_t>& rows, int depth, const GrowConfig& cfg) {
    double sum_r = 0.0, sum_h = 0.0, sum_r2 = 0.0;
    for (std::size_t r : rows) {
        sum_r += resid[r];
        sum_h += p[r] * (1.0 - p[r]);
        sum_r2 += resid[r] * resid[r];
    }
    const double m = static_cast<double>(rows.size());
    double leaf = sum_r / std::max(1e-12, sum_h);
    double parent_sse = sum_r2 - sum_r * sum_r / m;
    if (depth >= cfg.max_depth ||
        rows.size() < static_cast<std::size_t>(cfg.min_samples_split) ||
        parent_sse <= 1e-12)
        return add_leaf(tree, leaf);

    Split best;
    for (std::size_t f = 0; f < x.size(); ++f) {
        const auto& col = x[f];
        std::vector<std::pair<double, std::size_t>> vals;
        vals.reserve(rows.size());
        for (std::size_t r : rows) vals.emplace_back(col[r], r);
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double rl = 0.0, ml = 0.0;
        for (std::size_t k = 1; k < vals.size(); ++k) {
            rl += resid[vals[k - 1].second];
            ml += 1.0;
            double lo = vals[k - 1].first, hi = vals[k].first;
            if (!(hi > lo)) continue;
            double thr = 0.5 * (lo + hi);
            if (!(thr < hi)) thr = lo;
            double rr = sum_r - rl, mr = m - ml;
            // SSE reduction = sum_l^2/m_l + sum_r^2/m_r - sum^2/m
            double gain = rl * rl / ml + rr * rr / mr - sum_r * sum_r / m;
            if (gain > best.gain && gain > 1e-15) {
                best.found = true;
                best.feature = f;
                best.threshold = thr;
                best.gain = gain;
            }
        }
    }
    if (!best.found) return add_leaf(tree, leaf);

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
        (x[best.feature][r] <= best.threshold ? left_rows : right_rows).push_back(r);
    if (left_rows.empty() || right_rows.empty()) return add_leaf(tree, leaf);
    rows.clear();
    rows.shrink_to_fit();

    int node = add_internal(tree, best.feature, best.threshold);
    int l = grow_residual(tree, x, y, p, resid, left_rows, depth + 1, cfg);
    int r = grow_residual(tree, x, y, p, resid, right_rows, depth + 1, cfg);
    tree.left[node] = l;
    tree.right[node] = r;
    return node;
}

// grow_* append children after the parent slot, so re-root to node 0 by
// construction: the first call creates node 0 only when the root is a leaf.
// To keep predict_row starting at node 0 correct, grow with an explicit
// wrapper that guarantees the root is node 0.
TreeNodes grow_gini_tree(const Columns& x, const std::vector<int>& y,
                         const std::vector<double>& w,
                         std::vector<std::size_t> rows, const GrowConfig& cfg) {
    TreeNodes t;
    grow_gini(t, x, y, w, rows, 0, cfg);
    return t;
}

TreeNodes grow_residual_tree(const Columns& x, const std::vector<int>& y,
                             const std::vector<double>& p,
                             const std::vector<double>& resid,
                             std::vector<std::size_t> rows, const GrowConfig& cfg) {
    TreeNodes t;
    grow_residual(t, x, y, p, resid, rows, 0, cfg);
    return t;
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

Eigen::MatrixXd design_matrix(const Columns& x) {
    const std::size_t n = x[0].size(), d = x.size();
    Eigen::MatrixXd m(n, d + 1);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = x[j][i];
    m.col(d).setOnes();
    return m;
}

TrainedBaseModel fit_logreg(const Columns& x, const std::vector<int>& y,
                            const LearnerSpec& spec) {
    const std::size_t n = y.size(), d = x.size();
    Eigen::MatrixXd a = design_matrix(x);
    Eigen::VectorXd yv(n);
    for (std::size_t i = 0; i < n; ++i) yv(i) = y[i];
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
    const double lambda = spec.l2;
    const double inv_n = 1.0 / static_cast<double>(n);

    auto loss_at = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd z = a * b;
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double zi = z(i);
            // log(1 + exp(-s z)) with s = 2y-1, computed stably
            double sz = (2.0 * yv(i) - 1.0) * zi;
            loss += sz > 0.0 ? std::log1p(std::exp(-sz)) : -sz + std::log1p(std::exp(sz));
        }
        loss *= inv_n;
        loss += 0.5 * lambda * b.head(d).squaredNorm();
        return loss;
    };

    double current = loss_at(beta);
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::VectorXd z = a * beta;
        Eigen::VectorXd p(n), wdiag(n);
        for (std::size_t i = 0; i < n; ++i) {
            p(i) = sigmoid(z(i));
            wdiag(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
        }
        Eigen::VectorXd grad = inv_n * (a.transpose() * (p - yv));
        grad.head(d) += lambda * beta.head(d);
        Eigen::MatrixXd hess =
            inv_n * (a.transpose() * wdiag.asDiagonal() * a);
        for (std::size_t j = 0; j < d; ++j) hess(j, j) += lambda;
        Eigen::VectorXd step = hess.ldlt().solve(grad);

        double t = 1.0;
        Eigen::VectorXd next = beta - t * step;
        double next_loss = loss_at(next);
        int halvings = 0;
        while (next_loss > current && halvings < 60) {
            t *= 0.5;
            next = beta - t * step;
            next_loss = loss_at(next);
            ++halvings;
        }
        double max_change = (next - beta).cwiseAbs().maxCoeff();
        beta = next;
        current = next_loss;
        if (max_change < 1e-8) break;
    }

    TrainedBaseModel model;
    model.spec = spec;
    model.n_features = d;
    model.weights.assign(beta.data(), beta.data() + d);
    model.intercept = beta(d);
    return model;
}

TrainedBaseModel fit_tree(const Columns& x, const std::vector<int>& y,
                          const LearnerSpec& spec) {
    GrowConfig cfg;
    cfg.max_depth = spec.max_depth;
    cfg.min_samples_split = spec.min_samples_split;
    TrainedBaseModel model;
    model.spec = spec;
    model.n_features = x.size();
    std::vector<double> w(y.size(), 1.0);
    model.trees.push_back(grow_gini_tree(x, y, w, all_rows(y.size()), cfg));
    return model;
}

TrainedBaseModel fit_forest(const Columns& x, const std::vector<int>& y,
                            const LearnerSpec& spec) {
    const std::size_t n = y.size(), d = x.size();
    const bool extra = spec.kind == LearnerKind::extratrees;
    TrainedBaseModel model;
    model.spec = spec;
    model.n_features = d;
    std::vector<double> unit(n, 1.0);
    for (int t = 0; t < spec.n_estimators; ++t) {
        Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(t)));
        GrowConfig cfg;
        cfg.max_depth = spec.max_depth;
        cfg.min_samples_split = spec.min_samples_split;
        cfg.mtry = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(d))));
        cfg.random_threshold = extra;
        cfg.rng = &rng;

        std::vector<std::size_t> rows;
        if (extra) {
            rows = all_rows(n);
        } else {
            rows.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                rows.push_back(static_cast<std::size_t>(rng.uniform_int(n)));
        }
        model.trees.push_back(grow_gini_tree(x, y, unit, std::move(rows), cfg));
    }
    return model;
}

TrainedBaseModel fit_gbdt(const Columns& x, const std::vector<int>& y,
                          const LearnerSpec& spec) {
    const std::size_t n = y.size();
    TrainedBaseModel model;
    model.spec = spec;
    model.n_features = x.size();

    double pos = 0.0;
    for (int v : y) pos += v;
    double p_bar = clip(pos / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    model.init_score = std::log(p_bar / (1.0 - p_bar));

    GrowConfig cfg;
    cfg.max_depth = spec.max_depth;
    cfg.min_samples_split = spec.min_samples_split;

    std::vector<double> f(n, model.init_score);
    std::vector<double> p(n), resid(n);
    for (int round = 0; round < spec.n_estimators; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = sigmoid(f[i]);
            resid[i] = static_cast<double>(y[i]) - p[i];
        }
        TreeNodes tree = grow_residual_tree(x, y, p, resid, all_rows(n), cfg);
        for (std::size_t i = 0; i < n; ++i)
            f[i] += spec.learning_rate * tree.predict_row(x, i);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

TrainedBaseModel fit_adaboost(const Columns& x, const std::vector<int>& y,
                              const LearnerSpec& spec) {
    const std::size_t n = y.size();
    TrainedBaseModel model;
    model.spec = spec;
    model.n_features = x.size();
    double pos = 0.0;
    for (int v : y) pos += v;
    model.base_rate = pos / static_cast<double>(n);

    GrowConfig cfg;
    cfg.max_depth = 1;  // stumps
    cfg.min_samples_split = 2;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < spec.n_estimators; ++round) {
        TreeNodes stump = grow_gini_tree(x, y, w, all_rows(n), cfg);
        double err = 0.0;
        std::vector<int> h(n);
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = stump.predict_row(x, i) >= 0.5 ? 1 : 0;
            if (h[i] != y[i]) err += w[i];
        }
        if (err >= 0.5) break;  // stump discarded
        double alpha = std::log((1.0 - err) / std::max(err, 1e-12));
        model.trees.push_back(std::move(stump));
        model.stump_weights.push_back(alpha);
        if (err <= 1e-12) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (h[i] != y[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }
    return model;
}

}  // namespace

TrainedBaseModel fit_model(const Columns& x, const std::vector<int>& y,
                           const LearnerSpec& spec) {
    spec.validate();
    check_input(x, y);
    switch (spec.kind) {
        case LearnerKind::logreg: return fit_logreg(x, y, spec);
        case LearnerKind::tree: return fit_tree(x, y, spec);
        case LearnerKind::forest:
        case LearnerKind::extratrees: return fit_forest(x, y, spec);
        case LearnerKind::gbdt: return fit_gbdt(x, y, spec);
        case LearnerKind::adaboost: return fit_adaboost(x, y, spec);
    }
    throw std::logic_error("unknown learner kind");
}

std::vector<double> predict_proba(const TrainedBaseModel& model, const Columns& x) {
    if (x.size() != model.n_features)
        throw std::invalid_argument("predict_proba: feature width mismatch (got " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(model.n_features) + ")");
    const std::size_t n = x.empty() ? 0 : x[0].size();
    std::vector<double> out(n);
    switch (model.spec.kind) {
        case LearnerKind::logreg: {
            for (std::size_t i = 0; i < n; ++i) {
                double z = model.intercept;
                for (std::size_t j = 0; j < model.n_features; ++j)
                    z += model.weights[j] * x[j][i];
                out[i] = sigmoid(z);
            }
            break;
        }
        case LearnerKind::tree: {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = model.trees[0].predict_row(x, i);
            break;
        }
        case LearnerKind::forest:
        case LearnerKind::extratrees: {
            double inv = 1.0 / static_cast<double>(model.trees.size());
            for (std::size_t i = 0; i < n; ++i) {
                double sum = 0.0;
                for (const auto& t : model.trees) sum += t.predict_row(x, i);
                out[i] = sum * inv;
            }
            break;
        }
        case LearnerKind::gbdt: {
            for (std::size_t i = 0; i < n; ++i) {
                double f = model.init_score;
                for (const auto& t : model.trees)
                    f += model.spec.learning_rate * t.predict_row(x, i);
                out[i] = sigmoid(f);
            }
            break;
        }
        case LearnerKind::adaboost: {
            if (model.trees.empty()) {
                std::fill(out.begin(), out.end(), model.base_rate);
                break;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t t = 0; t < model.trees.size(); ++t) {
                    int h = model.trees[t].predict_row(x, i) >= 0.5 ? 1 : 0;
                    s += model.stump_weights[t] * (2.0 * h - 1.0);
                }
                out[i] = sigmoid(0.5 * s);
            }
            break;
        }
    }
    return out;
}

double logreg_loss(const Columns& x, const std::vector<int>& y,
                   const std::vector<double>& weights, double intercept, double l2) {
    const std::size_t n = y.size(), d = x.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = intercept;
        for (std::size_t j = 0; j < d; ++j) z += weights[j] * x[j][i];
        double sz = (2.0 * y[i] - 1.0) * z;
        loss += sz > 0.0 ? std::log1p(std::exp(-sz)) : -sz + std::log1p(std::exp(sz));
    }
    loss /= static_cast<double>(n);
    for (double w : weights) loss += 0.5 * l2 * w * w;
    return loss;
}

void logreg_gradient(const Columns& x, const std::vector<int>& y,
                     const std::vector<double>& weights, double intercept, double l2,
                     std::vector<double>& grad_w, double& grad_b) {
    const std::size_t n = y.size(), d = x.size();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = intercept;
        for (std::size_t j = 0; j < d; ++j) z += weights[j] * x[j][i];
        double r = sigmoid(z) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < d; ++j) grad_w[j] += r * x[j][i];
        grad_b += r;
    }
    double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) grad_w[j] = grad_w[j] * inv_n + l2 * weights[j];
    grad_b *= inv_n;
}

}  // namespace strike
