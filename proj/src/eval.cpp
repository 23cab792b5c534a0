#include "citree/eval.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "citree/rng.hpp"

namespace citree {

// ---------------------------------------------------------------------------
// Confusion matrix
// ---------------------------------------------------------------------------

long ConfusionMatrix::total() const {
    long s = 0;
    for (const auto& row : counts) {
        for (long c : row) s += c;
    }
    return s;
}

long ConfusionMatrix::trace() const {
    long s = 0;
    for (int j = 0; j < kNumClasses; ++j) {
        s += counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    }
    return s;
}

std::optional<double> ConfusionMatrix::predict_error_rate(ClassLabel predicted) const {
    const auto p = static_cast<std::size_t>(predicted);
    long row_sum = 0;
    for (long c : counts[p]) row_sum += c;
    if (row_sum == 0) return std::nullopt;
    return static_cast<double>(row_sum - counts[p][p]) / static_cast<double>(row_sum);
}

std::optional<double> ConfusionMatrix::misclassification_rate(ClassLabel real) const {
    const auto r = static_cast<std::size_t>(real);
    long col_sum = 0;
    for (int p = 0; p < kNumClasses; ++p) col_sum += counts[static_cast<std::size_t>(p)][r];
    if (col_sum == 0) return std::nullopt;
    return static_cast<double>(col_sum - counts[r][r]) / static_cast<double>(col_sum);
}

double ConfusionMatrix::overall_error_rate() const {
    const long t = total();
    if (t == 0) throw NumericError("confusion matrix is empty");
    return static_cast<double>(t - trace()) / static_cast<double>(t);
}

ConfusionMatrix ConfusionMatrix::from_counts(
    const std::array<std::array<long, kNumClasses>, kNumClasses>& counts) {
    for (const auto& row : counts) {
        for (long c : row) {
            if (c < 0) throw NumericError("negative confusion count");
        }
    }
    ConfusionMatrix m;
    m.counts = counts;
    return m;
}

ConfusionMatrix confusion_matrix(const Tree& t, const Dataset& d) {
    if (d.rows.empty()) throw NumericError("confusion_matrix: empty dataset");
    ConfusionMatrix m;
    for (const Row& r : d.rows) {
        const ClassLabel predicted = predict_class(t, r.x);
        ++m.counts[static_cast<std::size_t>(predicted)][static_cast<std::size_t>(r.cls)];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Holdout protocols
// ---------------------------------------------------------------------------

namespace {

// Error of a tree grown on all rows except `held`, scored on `held`.
double holdout_trial(const Dataset& d, const std::vector<std::size_t>& held,
                     const GrowthControl& control) {
    std::vector<bool> is_held(d.rows.size(), false);
    for (std::size_t i : held) is_held[i] = true;
    Dataset train;
    train.rows.reserve(d.rows.size() - held.size());
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        if (!is_held[i]) train.rows.push_back(d.rows[i]);
    }
    const Tree t = grow_tree(train, control);
    long errors = 0;
    for (std::size_t i : held) {
        if (predict_class(t, d.rows[i].x) != d.rows[i].cls) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(held.size());
}

} // namespace

HoldoutReport repeated_holdout(const Dataset& d, long holdout_size, long trials,
                               const GrowthControl& control, std::uint64_t seed,
                               const HoldoutOptions& opts) {
    const long n = static_cast<long>(d.rows.size());
    if (holdout_size < 1 || holdout_size >= n) {
        throw NumericError("holdout size must be in [1, N)");
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");

    HoldoutReport report;
    report.trials = trials;
    report.holdout_size = holdout_size;
    report.per_trial_errors.assign(static_cast<std::size_t>(trials), 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
    for (long trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        std::vector<std::size_t> order(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        partial_shuffle(order, static_cast<std::size_t>(holdout_size), rng);
        order.resize(static_cast<std::size_t>(holdout_size));
        report.per_trial_errors[static_cast<std::size_t>(trial)] =
            holdout_trial(d, order, control);
    }

    double sum = 0.0;
    for (double e : report.per_trial_errors) sum += e;
    report.mean_test_error = sum / static_cast<double>(trials);
    report.baseline_error = random_baseline_error(kNumClasses);
    return report;
}

HoldoutReport leave_one_out(const Dataset& d, const GrowthControl& control,
                            const HoldoutOptions& opts) {
    const long n = static_cast<long>(d.rows.size());
    if (n < 2) throw NumericError("leave_one_out requires N >= 2");

    HoldoutReport report;
    report.trials = n;
    report.holdout_size = 1;
    report.per_trial_errors.assign(static_cast<std::size_t>(n), 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
    for (long i = 0; i < n; ++i) {
        report.per_trial_errors[static_cast<std::size_t>(i)] =
            holdout_trial(d, {static_cast<std::size_t>(i)}, control);
    }

    double sum = 0.0;
    for (double e : report.per_trial_errors) sum += e;
    report.mean_test_error = sum / static_cast<double>(n);
    report.baseline_error = random_baseline_error(kNumClasses);
    return report;
}

double random_baseline_error(int num_classes) {
    if (num_classes < 1) throw NumericError("baseline undefined for J = 0");
    return static_cast<double>(num_classes - 1) / static_cast<double>(num_classes);
}

// ---------------------------------------------------------------------------
// Descriptive summaries
// ---------------------------------------------------------------------------

namespace {

double median_of(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    const std::size_t len = hi - lo;
    const std::size_t mid = lo + len / 2;
    if (len % 2 == 1) return sorted[mid];
    return (sorted[mid - 1] + sorted[mid]) / 2.0;
}

GroupSummary summarize_values(const std::string& label, std::vector<double> values) {
    GroupSummary s;
    s.label = label;
    s.n = static_cast<long>(values.size());
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.median = median_of(values, 0, n);
    // Median-of-halves: the overall median is excluded from both halves when
    // n is odd.
    const std::size_t half = n / 2;
    s.q1 = median_of(values, 0, half);
    s.q3 = median_of(values, n - half, n);
    return s;
}

} // namespace

std::vector<GroupSummary> describe_groups(
    const Dataset& d,
    const std::vector<std::pair<std::string, std::function<bool(const Row&)>>>& groups) {
    std::vector<GroupSummary> out;
    for (const auto& [label, pred] : groups) {
        std::vector<double> values;
        for (const Row& r : d.rows) {
            if (pred(r)) values.push_back(static_cast<double>(r.citations));
        }
        out.push_back(summarize_values(label, std::move(values)));
    }
    return out;
}

std::vector<GroupSummary> describe_groups(const Dataset& d, Grouping grouping) {
    if (grouping == Grouping::SingleVsMulti) {
        return describe_groups(
            d, {{"single", [](const Row& r) { return r.x[kAut] == 1.0; }},
                {"multi", [](const Row& r) { return r.x[kAut] > 1.0; }}});
    }
    return describe_groups(
        d, {{"local", [](const Row& r) { return r.x[kAut] >= 2.0 && r.x[kNati] == 1.0; }},
            {"international", [](const Row& r) { return r.x[kAut] >= 2.0 && r.x[kNati] >= 2.0; }}});
}

ScatterTable scatter_export(const Dataset& d) {
    ScatterTable table;
    double sum = 0.0;
    for (const Row& r : d.rows) {
        table.points.push_back(
            {r.x[kMcq], r.citations, static_cast<int>(r.x[kRt])});
        sum += r.x[kMcq];
    }
    if (!d.rows.empty()) {
        table.mean_mcq = sum / static_cast<double>(d.rows.size());
    }
    return table;
}

} // namespace citree
