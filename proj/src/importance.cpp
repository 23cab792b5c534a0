#include "citree/importance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "citree/rng.hpp"

namespace citree {

namespace {

void walk_splits(const TreeNode& node, std::map<int, std::pair<long, double>>& acc) {
    if (node.is_leaf()) return;
    const double drop =
        node.stats.deviance - node.left->stats.deviance - node.right->stats.deviance;
    auto& entry = acc[node.rule->predictor];
    entry.first += 1;
    entry.second += drop;
    walk_splits(*node.left, acc);
    walk_splits(*node.right, acc);
}

// Competition ranking: descending by key, ties share the smaller rank.
template <typename RowT, typename KeyFn>
void assign_ranks(std::vector<RowT>& rows, KeyFn key, int RowT::*rank_field) {
    for (auto& r : rows) {
        int rank = 1;
        for (const auto& other : rows) {
            if (key(other) > key(r)) ++rank;
        }
        r.*rank_field = rank;
    }
}

} // namespace

ImportanceTable deviance_importance(const Tree& t) {
    if (!t.root) throw NumericError("deviance_importance: empty tree");
    ImportanceTable table;
    std::map<int, std::pair<long, double>> acc;
    walk_splits(*t.root, acc);
    for (const auto& [pred, entry] : acc) { // std::map keeps schema order
        DevianceImportanceRow row;
        row.predictor = predictor_schema()[static_cast<std::size_t>(pred)].name;
        row.split_count = entry.first;
        row.total_drop = entry.second;
        row.drop_per_split = entry.second / static_cast<double>(entry.first);
        table.dev_rows.push_back(row);
        table.total_splits += entry.first;
        table.total_drop += entry.second;
    }
    if (table.total_splits > 0) {
        table.overall_drop_per_split =
            table.total_drop / static_cast<double>(table.total_splits);
    }
    assign_ranks(table.dev_rows, [](const DevianceImportanceRow& r) { return r.drop_per_split; },
                 &DevianceImportanceRow::rank_dev);
    return table;
}

ImportanceTable shuffle_importance(const Tree& t, const Dataset& d, long k, std::uint64_t seed,
                                   const ShuffleOptions& opts) {
    if (d.rows.empty()) throw NumericError("shuffle_importance: empty dataset");
    if (k < 1) throw ConfigError("shuffle_importance: K must be >= 1");

    const double base = misclassification_rate(t, d);
    const std::size_t n = d.rows.size();

    // increases[p][trial] = beta_k - beta
    std::vector<std::vector<double>> increases(
        kNumPredictors, std::vector<double>(static_cast<std::size_t>(k), 0.0));

    const long total_trials = static_cast<long>(kNumPredictors) * k;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
    for (long trial = 0; trial < total_trials; ++trial) {
        const int p = static_cast<int>(trial / k);
        const long rep = trial % k;

        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = d.rows[i].x[static_cast<std::size_t>(p)];
        if (!opts.force_identity_permutation) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p),
                                static_cast<std::uint64_t>(rep)));
            full_shuffle(column, rng);
        }

        long errors = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto x = d.rows[i].x;
            x[static_cast<std::size_t>(p)] = column[i];
            if (predict_class(t, x) != d.rows[i].cls) ++errors;
        }
        increases[static_cast<std::size_t>(p)][static_cast<std::size_t>(rep)] =
            static_cast<double>(errors) / static_cast<double>(n) - base;
    }

    ImportanceTable table;
    for (int p = 0; p < kNumPredictors; ++p) {
        const auto& inc = increases[static_cast<std::size_t>(p)];
        double sum = 0.0;
        for (double v : inc) sum += v;
        const double gamma = sum / static_cast<double>(k);
        double var = 0.0;
        for (double v : inc) var += (v - gamma) * (v - gamma);
        const double stderr_mean =
            k > 1 ? std::sqrt(var / static_cast<double>(k - 1) / static_cast<double>(k)) : 0.0;

        ShuffleImportanceRow row;
        row.predictor = predictor_schema()[static_cast<std::size_t>(p)].name;
        row.gamma = gamma;
        row.trials = k;
        row.base_rate = base;
        row.std_error = stderr_mean;
        table.shuffle_rows.push_back(row);
    }
    assign_ranks(table.shuffle_rows, [](const ShuffleImportanceRow& r) { return r.gamma; },
                 &ShuffleImportanceRow::rank_mis);
    return table;
}

std::vector<std::string> rank_predictors(const ImportanceTable& table, RankKey key) {
    std::vector<std::pair<std::string, double>> items;
    if (key == RankKey::DropPerSplit) {
        for (const auto& r : table.dev_rows) items.emplace_back(r.predictor, r.drop_per_split);
    } else {
        for (const auto& r : table.shuffle_rows) items.emplace_back(r.predictor, r.gamma);
    }
    if (items.empty()) throw NumericError("rank_predictors: empty table");
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& [name, value] : items) out.push_back(name);
    return out;
}

ImportanceTable merge_importance(const ImportanceTable& dev, const ImportanceTable& shuffle) {
    ImportanceTable out = dev;
    out.shuffle_rows = shuffle.shuffle_rows;
    return out;
}

} // namespace citree
