#include <doctest.h>

#include <cmath>

#include "citree/eval.hpp"

using namespace citree;

namespace {

// Reference counts, display order (high, median, low) mapped onto the
// internal (Low, Median, High) indexing: counts[predicted][real].
ConfusionMatrix reference_matrix() {
    std::array<std::array<long, kNumClasses>, kNumClasses> counts{};
    const auto H = static_cast<std::size_t>(ClassLabel::High);
    const auto M = static_cast<std::size_t>(ClassLabel::Median);
    const auto L = static_cast<std::size_t>(ClassLabel::Low);
    counts[H][H] = 21; counts[H][M] = 2;  counts[H][L] = 3;
    counts[M][H] = 4;  counts[M][M] = 92; counts[M][L] = 10;
    counts[L][H] = 2;  counts[L][M] = 20; counts[L][L] = 151;
    return ConfusionMatrix::from_counts(counts);
}

} // namespace

TEST_CASE("confusion matrix: reference count arithmetic") {
    const ConfusionMatrix m = reference_matrix();
    CHECK(m.total() == 305);
    CHECK(m.trace() == 264);

    CHECK(*m.predict_error_rate(ClassLabel::High) == doctest::Approx(5.0 / 26));
    CHECK(*m.predict_error_rate(ClassLabel::Median) == doctest::Approx(14.0 / 106));
    CHECK(*m.predict_error_rate(ClassLabel::Low) == doctest::Approx(22.0 / 173));
    // 2-decimal rounding: 0.19, 0.13, 0.13
    CHECK(std::round(*m.predict_error_rate(ClassLabel::High) * 100) == 19);
    CHECK(std::round(*m.predict_error_rate(ClassLabel::Median) * 100) == 13);
    CHECK(std::round(*m.predict_error_rate(ClassLabel::Low) * 100) == 13);

    CHECK(std::round(*m.misclassification_rate(ClassLabel::High) * 100) == 22);
    CHECK(std::round(*m.misclassification_rate(ClassLabel::Median) * 100) == 19);
    CHECK(std::round(*m.misclassification_rate(ClassLabel::Low) * 100) == 8);

    // off-diagonal sum is 41 (the source table's own text says 40/305)
    CHECK(m.total() - m.trace() == 41);
    CHECK(m.overall_error_rate() == doctest::Approx(41.0 / 305));
}

TEST_CASE("confusion matrix rates recompute from counts exactly") {
    const ConfusionMatrix m = reference_matrix();
    for (int p = 0; p < kNumClasses; ++p) {
        long row_sum = 0, diag = m.counts[p][p];
        for (long c : m.counts[p]) row_sum += c;
        CHECK(std::abs(*m.predict_error_rate(static_cast<ClassLabel>(p)) -
                       static_cast<double>(row_sum - diag) / row_sum) < 1e-12);
    }
}

TEST_CASE("confusion matrix of a perfect classifier is diagonal") {
    SynthConfig cfg = parse_rule("ref>20=high;else=low");
    cfg.n = 200;
    cfg.seed = 77;
    const Dataset d = generate_synthetic(cfg);
    const Tree t = grow_tree(d, GrowthControl{});
    const ConfusionMatrix m = confusion_matrix(t, d);
    CHECK(m.trace() == 200);
    CHECK(m.overall_error_rate() == 0.0);
    CHECK_THROWS_AS(confusion_matrix(t, Dataset{}), NumericError);
}

TEST_CASE("confusion matrix overall error equals the training summary rate") {
    SynthConfig cfg = parse_rule("ref>30=high;ref<=30&mcq<=1=low;else=median");
    cfg.n = 300;
    cfg.seed = 14;
    cfg.noise = 0.3;
    const Dataset d = generate_synthetic(cfg);
    const Tree t = grow_tree(d, GrowthControl{});
    const ConfusionMatrix m = confusion_matrix(t, d);
    const GrowthSummary s = summarize_tree(t, d);
    CHECK(m.overall_error_rate() ==
          doctest::Approx(s.misclassification_error_rate).epsilon(1e-12));
}

TEST_CASE("repeated holdout: noiseless plant survives single deletions") {
    SynthConfig cfg = parse_rule("ref>20=high;else=low");
    cfg.n = 200;
    cfg.seed = 4;
    const Dataset d = generate_synthetic(cfg);
    const HoldoutReport r = repeated_holdout(d, 1, 100, GrowthControl{}, 11);
    CHECK(r.mean_test_error == 0.0);
    CHECK(r.baseline_error == doctest::Approx(2.0 / 3));
}

TEST_CASE("repeated holdout: determinism and errors") {
    SynthConfig cfg = parse_rule("ref>30=high;else=low");
    cfg.n = 60;
    cfg.seed = 2;
    cfg.noise = 0.4;
    const Dataset d = generate_synthetic(cfg);

    const HoldoutReport a = repeated_holdout(d, 5, 20, GrowthControl{}, 9);
    const HoldoutReport b = repeated_holdout(d, 5, 20, GrowthControl{}, 9);
    CHECK(a.per_trial_errors == b.per_trial_errors);
    CHECK(a.mean_test_error == b.mean_test_error);

    HoldoutOptions serial;
    serial.parallel = false;
    const HoldoutReport c = repeated_holdout(d, 5, 20, GrowthControl{}, 9, serial);
    CHECK(a.per_trial_errors == c.per_trial_errors);

    CHECK_THROWS_AS(repeated_holdout(d, 60, 3, GrowthControl{}, 1), NumericError);
    CHECK_THROWS_AS(repeated_holdout(d, 0, 3, GrowthControl{}, 1), NumericError);
}

TEST_CASE("leave one out: noiseless plant and the two-row pathology") {
    SynthConfig cfg = parse_rule("ref>20=high;else=low");
    cfg.n = 200;
    cfg.seed = 4;
    const Dataset d = generate_synthetic(cfg);
    const HoldoutReport r = leave_one_out(d, GrowthControl{});
    CHECK(r.trials == 200);
    CHECK(r.mean_test_error == 0.0);

    // two opposite-class rows: each singleton training set predicts itself
    PredictorVector v;
    Dataset two;
    v.ref = 1;
    two.rows.push_back(Dataset::make_row(v, 0));
    v.ref = 50;
    two.rows.push_back(Dataset::make_row(v, 40));
    GrowthControl loose;
    loose.mincut = 1;
    loose.minsize = 2;
    const HoldoutReport worst = leave_one_out(two, loose);
    CHECK(worst.mean_test_error == 1.0);

    Dataset one;
    one.rows.push_back(Dataset::make_row(v, 0));
    CHECK_THROWS_AS(leave_one_out(one, GrowthControl{}), NumericError);
}

TEST_CASE("repeated holdout converges to leave one out") {
    SynthConfig cfg = parse_rule("ref>30=high;else=low");
    cfg.n = 50;
    cfg.seed = 6;
    cfg.noise = 0.3;
    const Dataset d = generate_synthetic(cfg);

    const HoldoutReport loo = leave_one_out(d, GrowthControl{});
    const HoldoutReport rep = repeated_holdout(d, 1, 10000, GrowthControl{}, 77);

    // holdout-1 trial errors are Bernoulli draws of the per-row LOO errors
    const double p = loo.mean_test_error;
    const double bernoulli_var = p * (1 - p);
    const double se = std::sqrt(bernoulli_var / 10000.0);
    CHECK(std::abs(rep.mean_test_error - loo.mean_test_error) <= 3 * se + 1e-12);
}

TEST_CASE("random baseline") {
    CHECK(random_baseline_error(3) == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(random_baseline_error(1) == 0.0);
    CHECK(random_baseline_error(2) == 0.5);
    CHECK_THROWS_AS(random_baseline_error(0), NumericError);
}

TEST_CASE("describe groups: quartile convention") {
    Dataset d;
    PredictorVector v;
    v.aut = 1;
    for (int c = 0; c <= 7; ++c) d.rows.push_back(Dataset::make_row(v, c));
    const auto groups = describe_groups(d, Grouping::SingleVsMulti);
    REQUIRE(groups.size() == 2);
    const auto& single = groups[0];
    CHECK(single.label == "single");
    CHECK(single.n == 8);
    CHECK(single.min == 0);
    CHECK(single.q1 == doctest::Approx(1.5));
    CHECK(single.median == doctest::Approx(3.5));
    CHECK(single.q3 == doctest::Approx(5.5));
    CHECK(single.max == 7);

    const auto& multi = groups[1];
    CHECK(multi.n == 0); // empty group carries no statistics

    // identical values collapse the summary
    Dataset same;
    v.aut = 3;
    v.nati = 2;
    for (int i = 0; i < 5; ++i) same.rows.push_back(Dataset::make_row(v, 4));
    const auto collab = describe_groups(same, Grouping::LocalVsInternational);
    CHECK(collab[1].label == "international");
    CHECK(collab[1].n == 5);
    CHECK(collab[1].min == 4);
    CHECK(collab[1].q1 == 4);
    CHECK(collab[1].median == 4);
    CHECK(collab[1].q3 == 4);
    CHECK(collab[1].max == 4);
    CHECK(collab[0].n == 0);
}

TEST_CASE("describe groups: partition property") {
    SynthConfig cfg;
    cfg.n = 300;
    cfg.seed = 19;
    const Dataset d = generate_synthetic(cfg);

    const auto sm = describe_groups(d, Grouping::SingleVsMulti);
    CHECK(sm[0].n + sm[1].n == 300);

    long multi_author = 0;
    for (const Row& r : d.rows) multi_author += r.x[kAut] >= 2.0;
    const auto collab = describe_groups(d, Grouping::LocalVsInternational);
    CHECK(collab[0].n + collab[1].n == multi_author);

    for (const auto& g : sm) {
        if (g.n > 0) {
            CHECK(g.min <= g.q1);
            CHECK(g.q1 <= g.median);
            CHECK(g.median <= g.q3);
            CHECK(g.q3 <= g.max);
        }
    }
}

TEST_CASE("scatter export") {
    Dataset d;
    PredictorVector v;
    v.mcq = 0.1;
    v.rt = 1;
    d.rows.push_back(Dataset::make_row(v, 3));
    v.mcq = 0.3;
    v.rt = 0;
    d.rows.push_back(Dataset::make_row(v, 8));
    const ScatterTable t = scatter_export(d);
    REQUIRE(t.points.size() == 2);
    CHECK(t.points[0].mcq == doctest::Approx(0.1));
    CHECK(t.points[0].citations == 3);
    CHECK(t.points[0].rt == 1);
    REQUIRE(t.mean_mcq.has_value());
    CHECK(*t.mean_mcq == doctest::Approx(0.2));

    const ScatterTable empty = scatter_export(Dataset{});
    CHECK(empty.points.empty());
    CHECK_FALSE(empty.mean_mcq.has_value());
}
