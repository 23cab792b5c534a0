#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citree/tree.hpp"

namespace citree {

struct DevianceImportanceRow {
    std::string predictor;
    long split_count = 0;
    double total_drop = 0.0;
    double drop_per_split = 0.0;
    int rank_dev = 0;
};

struct ShuffleImportanceRow {
    std::string predictor;
    double gamma = 0.0; // average increase of misclassification rate
    int rank_mis = 0;
    long trials = 0;
    double base_rate = 0.0;
    double std_error = 0.0; // standard error of the trial mean
};

struct ImportanceTable {
    std::vector<DevianceImportanceRow> dev_rows;       // schema order
    std::vector<ShuffleImportanceRow> shuffle_rows;    // schema order
    long total_splits = 0;
    double total_drop = 0.0;
    double overall_drop_per_split = 0.0;
};

// Per-predictor split counts and summed deviance drops over the grown tree.
// A single-leaf tree yields an empty table.
ImportanceTable deviance_importance(const Tree& t);

struct ShuffleOptions {
    bool parallel = true;
    bool force_identity_permutation = false; // test hook; gamma must be 0
};

// Permutation importance: for each predictor, K trials each permuting that
// column over the whole sample, re-scoring the fixed tree. Trial (p, k) uses
// a sub-seed derived from (seed, p, k), so results do not depend on predictor
// evaluation order or on parallel scheduling.
ImportanceTable shuffle_importance(const Tree& t, const Dataset& d, long k, std::uint64_t seed,
                                   const ShuffleOptions& opts = {});

enum class RankKey { DropPerSplit, Gamma };

// Descending by key; ties share the smaller rank and keep schema order.
std::vector<std::string> rank_predictors(const ImportanceTable& table, RankKey key);

// Merges the two tables (same tree, same predictors) for combined reporting.
ImportanceTable merge_importance(const ImportanceTable& dev, const ImportanceTable& shuffle);

} // namespace citree
