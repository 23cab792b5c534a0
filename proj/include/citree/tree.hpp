#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "citree/dataset.hpp"

namespace citree {

// ---------------------------------------------------------------------------
// Impurity functions on the class-probability simplex.
// ---------------------------------------------------------------------------

// phi(p_1..p_J) >= 0; maximal only at the uniform point, minimal only at the
// vertices, symmetric in its arguments.
using ImpurityFunction = std::function<double(const std::vector<double>&)>;

ImpurityFunction deviance_impurity(); // -2 sum p ln p  (0 ln 0 = 0)
ImpurityFunction gini_impurity();     // 1 - sum p^2

struct AxiomReport {
    bool max_at_uniform = true;
    bool min_at_vertices = true;
    bool symmetric = true;
    std::vector<std::string> violations;

    bool all_pass() const { return max_at_uniform && min_at_vertices && symmetric; }
};

// Checks the three impurity axioms against the probe points (plus the uniform
// point and the vertices themselves).
AxiomReport check_impurity_axioms(const ImpurityFunction& f, int num_classes,
                                  const std::vector<std::vector<double>>& probes);

// Uniform random simplex probes for axiom checking.
std::vector<std::vector<double>> random_simplex_points(int num_classes, int count,
                                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Nodes and trees.
// ---------------------------------------------------------------------------

// D_t = -2 sum_j n_{jt} ln(n_{jt} / n_t).
double node_deviance(const std::array<long, kNumClasses>& counts);

struct NodeStats {
    std::array<long, kNumClasses> counts{};
    long total = 0;
    double deviance = 0.0;

    static NodeStats from_counts(const std::array<long, kNumClasses>& counts);
};

struct SplitRule {
    enum class Kind { NumericThreshold, CategorySubset, Binary };

    int predictor = 0;
    Kind kind = Kind::NumericThreshold;
    double threshold = 0.0;    // NumericThreshold: route left iff x < threshold
    std::uint8_t subset = 0;   // CategorySubset: route left iff category bit set
                               // Binary: route left iff x == 0

    bool routes_left(double value) const;
};

bool operator==(const SplitRule& a, const SplitRule& b);

struct TreeNode {
    NodeStats stats;
    ClassLabel assigned_class = ClassLabel::Low; // majority, ties toward Low
    std::optional<SplitRule> rule;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;

    bool is_leaf() const { return !rule.has_value(); }
};

struct GrowthControl {
    long mincut = 3;   // minimum observations in each child
    long minsize = 6;  // minimum observations in a splittable node
    double min_relative_deviance = 0.01; // skip nodes with D_t < frac * D_root; 0 disables
};

struct Tree {
    std::unique_ptr<TreeNode> root;
    GrowthControl control;
    long n_training = 0;

    long leaf_count() const;
    long internal_count() const;
};

bool tree_equal(const Tree& a, const Tree& b);

// ---------------------------------------------------------------------------
// Growth.
// ---------------------------------------------------------------------------

struct SplitChoice {
    SplitRule rule;
    double gain = 0.0; // impurity decrease; equals the deviance drop under deviance
};

// Exhaustive search over all predictors: numeric thresholds are midpoints of
// consecutive distinct values, categorical splits enumerate every proper
// binary partition of the categories present, binary has its single split.
// Only candidates whose children both have >= mincut rows qualify. Ties break
// by schema predictor order, then smaller threshold / smaller subset mask.
std::optional<SplitChoice> best_split(const Dataset& d, const std::vector<std::size_t>& idx,
                                      const GrowthControl& control,
                                      const ImpurityFunction& impurity);

Tree grow_tree(const Dataset& d, const GrowthControl& control,
               const ImpurityFunction& impurity = deviance_impurity());

ClassLabel predict_class(const Tree& t, const std::array<double, kNumPredictors>& x);
ClassLabel predict_class(const TreeNode& node, const std::array<double, kNumPredictors>& x);

// Fraction of rows whose predicted class differs from the recorded class.
double misclassification_rate(const Tree& t, const Dataset& d);

// sum(leaf deviances) / (N - leaf count).
double residual_mean_deviance(const std::vector<double>& leaf_deviances, long n);

struct GrowthSummary {
    std::vector<std::string> variables_used; // first-use (pre-order) order
    long leaf_count = 0;
    double residual_mean_deviance = 0.0;
    double misclassification_error_rate = 0.0;
    long n = 0;
};

GrowthSummary summarize_tree(const Tree& t, const Dataset& d);

// ---------------------------------------------------------------------------
// Tree document (versioned JSON, format tag "citree-tree/1").
// ---------------------------------------------------------------------------

std::string encode_tree(const Tree& t);
Tree decode_tree(const std::string& text);

} // namespace citree
