#include "citree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "citree/rng.hpp"

namespace citree {

// ---------------------------------------------------------------------------
// Impurity functions
// ---------------------------------------------------------------------------

ImpurityFunction deviance_impurity() {
    return [](const std::vector<double>& p) {
        double s = 0.0;
        for (double v : p) {
            if (v > 0.0) s += v * std::log(v);
        }
        return -2.0 * s;
    };
}

ImpurityFunction gini_impurity() {
    return [](const std::vector<double>& p) {
        double s = 0.0;
        for (double v : p) s += v * v;
        return 1.0 - s;
    };
}

std::vector<std::vector<double>> random_simplex_points(int num_classes, int count,
                                                       std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        // Exponential spacings normalized to the simplex.
        std::vector<double> p(static_cast<std::size_t>(num_classes));
        double sum = 0.0;
        for (auto& v : p) {
            v = -std::log(1.0 - rng.unit());
            sum += v;
        }
        for (auto& v : p) v /= sum;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool is_uniform(const std::vector<double>& p, double tol) {
    const double u = 1.0 / static_cast<double>(p.size());
    for (double v : p) {
        if (std::abs(v - u) > tol) return false;
    }
    return true;
}

bool is_vertex(const std::vector<double>& p, double tol) {
    int ones = 0;
    for (double v : p) {
        if (std::abs(v - 1.0) <= tol) {
            ++ones;
        } else if (std::abs(v) > tol) {
            return false;
        }
    }
    return ones == 1;
}

std::string probe_str(const std::vector<double>& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ')';
    return os.str();
}

} // namespace

AxiomReport check_impurity_axioms(const ImpurityFunction& f, int num_classes,
                                  const std::vector<std::vector<double>>& probes) {
    AxiomReport report;
    const std::size_t j = static_cast<std::size_t>(num_classes);
    const double tol = 1e-12;

    std::vector<double> uniform(j, 1.0 / static_cast<double>(num_classes));
    const double f_uniform = f(uniform);
    std::vector<double> vertex(j, 0.0);
    vertex[0] = 1.0;
    const double f_vertex = f(vertex);

    for (const auto& p : probes) {
        if (p.size() != j) throw ConfigError("probe dimension does not match J");
        const double fp = f(p);
        if (!is_uniform(p, 1e-9) && !(f_uniform > fp)) {
            report.max_at_uniform = false;
            report.violations.push_back("axiom 1: f(uniform) <= f" + probe_str(p));
        }
        if (!is_vertex(p, 1e-9) && !(f_vertex < fp)) {
            report.min_at_vertices = false;
            report.violations.push_back("axiom 2: f(vertex) >= f" + probe_str(p));
        }
        // Axiom 3 on a rotation and a swap of each probe.
        std::vector<double> rotated(p.begin() + 1, p.end());
        rotated.push_back(p.front());
        std::vector<double> swapped(p);
        if (swapped.size() >= 2) std::swap(swapped[0], swapped[1]);
        if (std::abs(f(rotated) - fp) > tol || std::abs(f(swapped) - fp) > tol) {
            report.symmetric = false;
            report.violations.push_back("axiom 3: asymmetric at " + probe_str(p));
        }
    }
    // All vertices must share the minimum value.
    for (std::size_t v = 1; v < j; ++v) {
        std::vector<double> e(j, 0.0);
        e[v] = 1.0;
        if (std::abs(f(e) - f_vertex) > tol) {
            report.min_at_vertices = false;
            report.violations.push_back("axiom 2: vertices have unequal values");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Node statistics
// ---------------------------------------------------------------------------

double node_deviance(const std::array<long, kNumClasses>& counts) {
    long n = 0;
    for (long c : counts) {
        if (c < 0) throw NumericError("negative class count");
        n += c;
    }
    if (n == 0) throw NumericError("empty node: all class counts zero");
    double s = 0.0;
    for (long c : counts) {
        if (c > 0) {
            s += static_cast<double>(c) *
                 std::log(static_cast<double>(c) / static_cast<double>(n));
        }
    }
    const double d = -2.0 * s;
    return d < 0.0 ? 0.0 : d; // clamp -0.0 from pure nodes
}

NodeStats NodeStats::from_counts(const std::array<long, kNumClasses>& counts) {
    NodeStats s;
    s.counts = counts;
    for (long c : counts) s.total += c;
    s.deviance = node_deviance(counts);
    return s;
}

// ---------------------------------------------------------------------------
// Split rules
// ---------------------------------------------------------------------------

bool SplitRule::routes_left(double value) const {
    switch (kind) {
        case Kind::NumericThreshold: return value < threshold;
        case Kind::CategorySubset:
            return (subset >> static_cast<int>(value)) & 1;
        case Kind::Binary: return value == 0.0;
    }
    return false;
}

bool operator==(const SplitRule& a, const SplitRule& b) {
    return a.predictor == b.predictor && a.kind == b.kind && a.threshold == b.threshold &&
           a.subset == b.subset;
}

// ---------------------------------------------------------------------------
// Split search
// ---------------------------------------------------------------------------

namespace {

double impurity_score(const ImpurityFunction& f, const std::array<long, kNumClasses>& counts,
                      long total) {
    std::vector<double> p(kNumClasses);
    for (int j = 0; j < kNumClasses; ++j) {
        p[static_cast<std::size_t>(j)] =
            static_cast<double>(counts[static_cast<std::size_t>(j)]) / static_cast<double>(total);
    }
    return static_cast<double>(total) * f(p);
}

struct Candidate {
    SplitRule rule;
    double gain;
};

// Gains within this relative band count as equal, so that mathematically
// tied candidates stay tied under floating-point evaluation order.
constexpr double kGainTieEps = 1e-12;

bool gains_tie(double a, double b) {
    return std::abs(a - b) <= kGainTieEps * std::max({1.0, std::abs(a), std::abs(b)});
}

// Picks a over b under the documented tie-break (larger gain; then smaller
// predictor index; then smaller threshold / subset mask).
bool better(const Candidate& a, const Candidate& b) {
    if (!gains_tie(a.gain, b.gain)) return a.gain > b.gain;
    if (a.rule.predictor != b.rule.predictor) return a.rule.predictor < b.rule.predictor;
    if (a.rule.threshold != b.rule.threshold) return a.rule.threshold < b.rule.threshold;
    return a.rule.subset < b.rule.subset;
}

} // namespace

std::optional<SplitChoice> best_split(const Dataset& d, const std::vector<std::size_t>& idx,
                                      const GrowthControl& control,
                                      const ImpurityFunction& impurity) {
    const long n = static_cast<long>(idx.size());
    if (n < control.minsize) throw NumericError("best_split: node smaller than minsize");

    std::array<long, kNumClasses> parent_counts{};
    for (std::size_t i : idx) ++parent_counts[static_cast<std::size_t>(d.rows[i].cls)];
    int nonzero = 0;
    for (long c : parent_counts) nonzero += c > 0;
    if (nonzero <= 1) throw NumericError("best_split: node is pure");

    const double parent_score = impurity_score(impurity, parent_counts, n);

    std::optional<Candidate> best;
    auto consider = [&](const Candidate& c) {
        if (!best || better(c, *best)) best = c;
    };
    auto child_gain = [&](const std::array<long, kNumClasses>& left_counts, long left_total) {
        std::array<long, kNumClasses> right_counts{};
        for (int j = 0; j < kNumClasses; ++j) {
            right_counts[static_cast<std::size_t>(j)] =
                parent_counts[static_cast<std::size_t>(j)] -
                left_counts[static_cast<std::size_t>(j)];
        }
        return parent_score - impurity_score(impurity, left_counts, left_total) -
               impurity_score(impurity, right_counts, n - left_total);
    };

    const auto& schema = predictor_schema();
    for (int p = 0; p < kNumPredictors; ++p) {
        switch (schema[static_cast<std::size_t>(p)].kind) {
            case ColumnKind::Numeric: {
                std::vector<std::pair<double, ClassLabel>> vals;
                vals.reserve(idx.size());
                for (std::size_t i : idx) {
                    vals.emplace_back(d.rows[i].x[static_cast<std::size_t>(p)], d.rows[i].cls);
                }
                std::sort(vals.begin(), vals.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                std::array<long, kNumClasses> left_counts{};
                long left_total = 0;
                for (long i = 0; i + 1 < n; ++i) {
                    ++left_counts[static_cast<std::size_t>(
                        static_cast<int>(vals[static_cast<std::size_t>(i)].second))];
                    ++left_total;
                    const double lo = vals[static_cast<std::size_t>(i)].first;
                    const double hi = vals[static_cast<std::size_t>(i) + 1].first;
                    if (lo == hi) continue;
                    if (left_total < control.mincut || n - left_total < control.mincut) continue;
                    Candidate c;
                    c.rule.predictor = p;
                    c.rule.kind = SplitRule::Kind::NumericThreshold;
                    c.rule.threshold = lo + (hi - lo) / 2.0;
                    c.gain = child_gain(left_counts, left_total);
                    consider(c);
                }
                break;
            }
            case ColumnKind::Binary: {
                std::array<long, kNumClasses> left_counts{};
                long left_total = 0;
                for (std::size_t i : idx) {
                    if (d.rows[i].x[static_cast<std::size_t>(p)] == 0.0) {
                        ++left_counts[static_cast<std::size_t>(static_cast<int>(d.rows[i].cls))];
                        ++left_total;
                    }
                }
                if (left_total >= control.mincut && n - left_total >= control.mincut) {
                    Candidate c;
                    c.rule.predictor = p;
                    c.rule.kind = SplitRule::Kind::Binary;
                    c.gain = child_gain(left_counts, left_total);
                    consider(c);
                }
                break;
            }
            case ColumnKind::Categorical8: {
                // Per-category class counts at this node.
                std::array<std::array<long, kNumClasses>, kNumSubjects> cat_counts{};
                std::array<long, kNumSubjects> cat_totals{};
                for (std::size_t i : idx) {
                    const int cat = static_cast<int>(d.rows[i].x[static_cast<std::size_t>(p)]);
                    ++cat_counts[static_cast<std::size_t>(cat)]
                                [static_cast<std::size_t>(static_cast<int>(d.rows[i].cls))];
                    ++cat_totals[static_cast<std::size_t>(cat)];
                }
                std::vector<int> present;
                for (int cat = 0; cat < kNumSubjects; ++cat) {
                    if (cat_totals[static_cast<std::size_t>(cat)] > 0) present.push_back(cat);
                }
                const int levels = static_cast<int>(present.size());
                if (levels < 2) break;
                // Canonical proper partitions: subsets containing the lowest
                // present category, excluding the full set.
                const unsigned full = (1u << levels) - 1u;
                for (unsigned m = 1; m < full; m += 2) {
                    std::array<long, kNumClasses> left_counts{};
                    long left_total = 0;
                    std::uint8_t subject_mask = 0;
                    for (int b = 0; b < levels; ++b) {
                        if ((m >> b) & 1u) {
                            const int cat = present[static_cast<std::size_t>(b)];
                            subject_mask = static_cast<std::uint8_t>(subject_mask | (1u << cat));
                            for (int j = 0; j < kNumClasses; ++j) {
                                left_counts[static_cast<std::size_t>(j)] +=
                                    cat_counts[static_cast<std::size_t>(cat)]
                                              [static_cast<std::size_t>(j)];
                            }
                            left_total += cat_totals[static_cast<std::size_t>(cat)];
                        }
                    }
                    if (left_total < control.mincut || n - left_total < control.mincut) continue;
                    Candidate c;
                    c.rule.predictor = p;
                    c.rule.kind = SplitRule::Kind::CategorySubset;
                    c.rule.subset = subject_mask;
                    c.gain = child_gain(left_counts, left_total);
                    consider(c);
                }
                break;
            }
        }
    }

    // Zero-gain candidates can round to tiny nonzero values; treat gains in
    // the tie band around zero as no improvement.
    if (!best || gains_tie(best->gain, 0.0) || best->gain < 0.0) return std::nullopt;
    return SplitChoice{best->rule, best->gain};
}

// ---------------------------------------------------------------------------
// Growth
// ---------------------------------------------------------------------------

namespace {

ClassLabel majority_class(const std::array<long, kNumClasses>& counts) {
    int best = 0;
    for (int j = 1; j < kNumClasses; ++j) {
        if (counts[static_cast<std::size_t>(j)] > counts[static_cast<std::size_t>(best)]) best = j;
    }
    return static_cast<ClassLabel>(best); // ties stay at the lower class
}

std::unique_ptr<TreeNode> grow_node(const Dataset& d, std::vector<std::size_t> idx,
                                    const GrowthControl& control,
                                    const ImpurityFunction& impurity, double root_deviance) {
    auto node = std::make_unique<TreeNode>();
    std::array<long, kNumClasses> counts{};
    for (std::size_t i : idx) ++counts[static_cast<std::size_t>(static_cast<int>(d.rows[i].cls))];
    node->stats = NodeStats::from_counts(counts);
    node->assigned_class = majority_class(counts);

    const long n = static_cast<long>(idx.size());
    if (node->stats.deviance == 0.0) return node;                  // pure
    if (n < control.minsize) return node;                          // too small to split
    if (control.min_relative_deviance > 0.0 &&
        node->stats.deviance < control.min_relative_deviance * root_deviance) {
        return node;
    }
    const auto choice = best_split(d, idx, control, impurity);
    if (!choice) return node; // no admissible positive-gain split

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        if (choice->rule.routes_left(d.rows[i].x[static_cast<std::size_t>(choice->rule.predictor)])) {
            left_idx.push_back(i);
        } else {
            right_idx.push_back(i);
        }
    }
    idx.clear();
    idx.shrink_to_fit();

    node->rule = choice->rule;
    node->left = grow_node(d, std::move(left_idx), control, impurity, root_deviance);
    node->right = grow_node(d, std::move(right_idx), control, impurity, root_deviance);
    return node;
}

} // namespace

Tree grow_tree(const Dataset& d, const GrowthControl& control, const ImpurityFunction& impurity) {
    if (d.rows.empty()) throw NumericError("grow_tree: empty dataset");
    if (control.mincut < 1) throw ConfigError("mincut must be >= 1");
    if (control.minsize < 2) throw ConfigError("minsize must be >= 2");

    std::vector<std::size_t> idx(d.rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::array<long, kNumClasses> counts{};
    for (const Row& r : d.rows) ++counts[static_cast<std::size_t>(static_cast<int>(r.cls))];
    const double root_deviance = node_deviance(counts);

    Tree t;
    t.control = control;
    t.n_training = static_cast<long>(d.rows.size());
    t.root = grow_node(d, std::move(idx), control, impurity, root_deviance);
    return t;
}

// ---------------------------------------------------------------------------
// Prediction and summaries
// ---------------------------------------------------------------------------

ClassLabel predict_class(const TreeNode& node, const std::array<double, kNumPredictors>& x) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf()) {
        cur = cur->rule->routes_left(x[static_cast<std::size_t>(cur->rule->predictor)])
                  ? cur->left.get()
                  : cur->right.get();
    }
    return cur->assigned_class;
}

ClassLabel predict_class(const Tree& t, const std::array<double, kNumPredictors>& x) {
    if (!t.root) throw NumericError("predict: empty tree");
    return predict_class(*t.root, x);
}

double misclassification_rate(const Tree& t, const Dataset& d) {
    if (d.rows.empty()) throw NumericError("misclassification_rate: empty dataset");
    long errors = 0;
    for (const Row& r : d.rows) {
        if (predict_class(t, r.x) != r.cls) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(d.rows.size());
}

double residual_mean_deviance(const std::vector<double>& leaf_deviances, long n) {
    const long leaves = static_cast<long>(leaf_deviances.size());
    if (n <= leaves) throw NumericError("residual mean deviance undefined: N <= leaf count");
    // Kahan summation; leaf lists can be long.
    double sum = 0.0, comp = 0.0;
    for (double v : leaf_deviances) {
        const double y = v - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum / static_cast<double>(n - leaves);
}

namespace {

void walk(const TreeNode& node, const std::function<void(const TreeNode&)>& fn) {
    fn(node);
    if (!node.is_leaf()) {
        walk(*node.left, fn);
        walk(*node.right, fn);
    }
}

} // namespace

long Tree::leaf_count() const {
    long count = 0;
    if (root) {
        walk(*root, [&](const TreeNode& n) { count += n.is_leaf(); });
    }
    return count;
}

long Tree::internal_count() const {
    long count = 0;
    if (root) {
        walk(*root, [&](const TreeNode& n) { count += !n.is_leaf(); });
    }
    return count;
}

GrowthSummary summarize_tree(const Tree& t, const Dataset& d) {
    GrowthSummary s;
    s.n = static_cast<long>(d.rows.size());
    std::vector<double> leaf_devs;
    walk(*t.root, [&](const TreeNode& node) {
        if (node.is_leaf()) {
            leaf_devs.push_back(node.stats.deviance);
        } else {
            const std::string& name =
                predictor_schema()[static_cast<std::size_t>(node.rule->predictor)].name;
            if (std::find(s.variables_used.begin(), s.variables_used.end(), name) ==
                s.variables_used.end()) {
                s.variables_used.push_back(name);
            }
        }
    });
    s.leaf_count = static_cast<long>(leaf_devs.size());
    s.residual_mean_deviance =
        s.n > s.leaf_count ? residual_mean_deviance(leaf_devs, s.n) : 0.0;
    s.misclassification_error_rate = misclassification_rate(t, d);
    return s;
}

// ---------------------------------------------------------------------------
// Tree document
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json node_to_json(const TreeNode& node) {
    json j;
    j["counts"] = node.stats.counts;
    j["deviance"] = node.stats.deviance;
    j["class"] = class_name(node.assigned_class);
    if (!node.is_leaf()) {
        json rule;
        rule["predictor"] = predictor_schema()[static_cast<std::size_t>(node.rule->predictor)].name;
        switch (node.rule->kind) {
            case SplitRule::Kind::NumericThreshold:
                rule["kind"] = "numeric";
                rule["threshold"] = node.rule->threshold;
                break;
            case SplitRule::Kind::CategorySubset: {
                rule["kind"] = "subset";
                json names = json::array();
                for (int c = 0; c < kNumSubjects; ++c) {
                    if ((node.rule->subset >> c) & 1) {
                        names.push_back(subject_name(static_cast<SubjectClass>(c)));
                    }
                }
                rule["left_subjects"] = names;
                break;
            }
            case SplitRule::Kind::Binary:
                rule["kind"] = "binary";
                break;
        }
        j["split"] = rule;
        j["left"] = node_to_json(*node.left);
        j["right"] = node_to_json(*node.right);
    }
    return j;
}

std::unique_ptr<TreeNode> node_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    const auto counts = j.at("counts").get<std::array<long, kNumClasses>>();
    node->stats = NodeStats::from_counts(counts);
    node->stats.deviance = j.at("deviance").get<double>();
    node->assigned_class = class_from_name(j.at("class").get<std::string>());
    if (j.contains("split")) {
        const json& rule = j.at("split");
        SplitRule r;
        const std::string pname = rule.at("predictor").get<std::string>();
        r.predictor = predictor_index(pname);
        if (r.predictor < 0) throw SchemaError("tree document: unknown predictor '" + pname + "'");
        const auto kind_spec = predictor_schema()[static_cast<std::size_t>(r.predictor)].kind;
        const std::string kind = rule.at("kind").get<std::string>();
        if (kind == "numeric") {
            if (kind_spec != ColumnKind::Numeric) {
                throw SchemaError("tree document: numeric threshold on non-numeric predictor '" +
                                  pname + "'");
            }
            r.kind = SplitRule::Kind::NumericThreshold;
            r.threshold = rule.at("threshold").get<double>();
        } else if (kind == "subset") {
            if (kind_spec != ColumnKind::Categorical8) {
                throw SchemaError("tree document: subset rule on non-categorical predictor '" +
                                  pname + "'");
            }
            r.kind = SplitRule::Kind::CategorySubset;
            for (const auto& name : rule.at("left_subjects")) {
                r.subset = static_cast<std::uint8_t>(
                    r.subset |
                    (1u << static_cast<int>(subject_from_name(name.get<std::string>()))));
            }
            if (r.subset == 0) throw SchemaError("tree document: empty subject subset");
        } else if (kind == "binary") {
            if (kind_spec != ColumnKind::Binary) {
                throw SchemaError("tree document: binary rule on non-binary predictor '" + pname +
                                  "'");
            }
            r.kind = SplitRule::Kind::Binary;
        } else {
            throw SchemaError("tree document: unknown rule kind '" + kind + "'");
        }
        node->rule = r;
        node->left = node_from_json(j.at("left"));
        node->right = node_from_json(j.at("right"));
    }
    return node;
}

bool nodes_equal(const TreeNode& a, const TreeNode& b) {
    if (a.stats.counts != b.stats.counts || a.stats.deviance != b.stats.deviance ||
        a.assigned_class != b.assigned_class || a.is_leaf() != b.is_leaf()) {
        return false;
    }
    if (a.is_leaf()) return true;
    return *a.rule == *b.rule && nodes_equal(*a.left, *b.left) && nodes_equal(*a.right, *b.right);
}

} // namespace

bool tree_equal(const Tree& a, const Tree& b) {
    if (!a.root || !b.root) return !a.root == !b.root;
    return a.n_training == b.n_training && nodes_equal(*a.root, *b.root);
}

std::string encode_tree(const Tree& t) {
    if (!t.root) throw NumericError("encode_tree: empty tree");
    json doc;
    doc["format"] = "citree-tree/1";
    doc["n_training"] = t.n_training;
    doc["control"] = {{"mincut", t.control.mincut},
                      {"minsize", t.control.minsize},
                      {"mindev", t.control.min_relative_deviance}};
    doc["root"] = node_to_json(*t.root);
    return doc.dump(2) + "\n";
}

Tree decode_tree(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("tree document parse error: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "citree-tree/1") {
            throw SchemaError("tree document: unsupported format tag");
        }
        Tree t;
        t.n_training = doc.at("n_training").get<long>();
        const json& control = doc.at("control");
        t.control.mincut = control.at("mincut").get<long>();
        t.control.minsize = control.at("minsize").get<long>();
        t.control.min_relative_deviance = control.at("mindev").get<double>();
        t.root = node_from_json(doc.at("root"));
        return t;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("tree document: ") + e.what());
    }
}

} // namespace citree
