#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "citree/tree.hpp"

namespace citree {

// counts[predicted][real], indexed by ClassLabel.
struct ConfusionMatrix {
    std::array<std::array<long, kNumClasses>, kNumClasses> counts{};

    long total() const;
    long trace() const;
    // (row sum - diagonal) / row sum; empty rows have no rate.
    std::optional<double> predict_error_rate(ClassLabel predicted) const;
    // (column sum - diagonal) / column sum.
    std::optional<double> misclassification_rate(ClassLabel real) const;
    double overall_error_rate() const;

    static ConfusionMatrix from_counts(
        const std::array<std::array<long, kNumClasses>, kNumClasses>& counts);
};

ConfusionMatrix confusion_matrix(const Tree& t, const Dataset& d);

struct HoldoutReport {
    long trials = 0;
    long holdout_size = 0;
    std::vector<double> per_trial_errors;
    double mean_test_error = 0.0;
    double baseline_error = 0.0;
};

struct HoldoutOptions {
    bool parallel = true;
};

// Repeated random holdout: each trial draws a uniform holdout without
// replacement (sub-seed from (seed, trial)), grows a tree on the remainder,
// and scores the holdout. Deterministic in the seed; trials independent.
HoldoutReport repeated_holdout(const Dataset& d, long holdout_size, long trials,
                               const GrowthControl& control, std::uint64_t seed,
                               const HoldoutOptions& opts = {});

// Exhaustive deterministic variant: one trial per deleted row.
HoldoutReport leave_one_out(const Dataset& d, const GrowthControl& control,
                            const HoldoutOptions& opts = {});

// Uniform random guess over J classes: (J-1)/J.
double random_baseline_error(int num_classes);

struct GroupSummary {
    std::string label;
    long n = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0; // of citation counts
};

enum class Grouping {
    SingleVsMulti,       // aut = 1 vs aut > 1
    LocalVsInternational // among aut >= 2: nati = 1 vs nati >= 2
};

// Five-number summaries of citation counts per group. Quartiles use the
// median-of-halves convention (overall median excluded for odd n).
std::vector<GroupSummary> describe_groups(const Dataset& d, Grouping grouping);
std::vector<GroupSummary> describe_groups(
    const Dataset& d,
    const std::vector<std::pair<std::string, std::function<bool(const Row&)>>>& groups);

struct ScatterTable {
    struct Point {
        double mcq;
        CitationCount citations;
        int rt;
    };
    std::vector<Point> points;
    std::optional<double> mean_mcq; // absent for an empty dataset
};

ScatterTable scatter_export(const Dataset& d);

} // namespace citree
