#include "citree/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace citree {

OutputFormat format_from_name(const std::string& name) {
    if (name == "tsv") return OutputFormat::Tsv;
    if (name == "text") return OutputFormat::AlignedText;
    throw ConfigError("unknown output format '" + name + "' (expected tsv or text)");
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string shortest(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    double parsed = 0;
    std::istringstream(os.str()) >> parsed;
    for (int prec = 1; prec < 17; ++prec) {
        std::ostringstream trial;
        trial << std::setprecision(prec) << v;
        std::istringstream(trial.str()) >> parsed;
        if (parsed == v) return trial.str();
    }
    return os.str();
}

void print_aligned(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << row[c];
        }
        out << '\n';
    }
}

void print_tsv(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
        out << '\n';
    }
}

void print_table(const std::vector<std::vector<std::string>>& rows, OutputFormat fmt,
                 std::ostream& out) {
    if (fmt == OutputFormat::Tsv) {
        print_tsv(rows, out);
    } else {
        print_aligned(rows, out);
    }
}

std::string rate_or_na(const std::optional<double>& r, int decimals) {
    return r ? fixed(*r, decimals) : "N/A";
}

} // namespace

void emit_confusion(const ConfusionMatrix& m, OutputFormat fmt, std::ostream& out) {
    // High class first.
    const ClassLabel order[] = {ClassLabel::High, ClassLabel::Median, ClassLabel::Low};
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"predicted\\real", "high", "median", "low", "predict_error_rate"});
    for (ClassLabel p : order) {
        std::vector<std::string> row{std::string("predict_") + class_name(p)};
        for (ClassLabel r : order) {
            row.push_back(std::to_string(
                m.counts[static_cast<std::size_t>(p)][static_cast<std::size_t>(r)]));
        }
        row.push_back(rate_or_na(m.predict_error_rate(p), 2));
        rows.push_back(row);
    }
    std::vector<std::string> last{"misclassification_rate"};
    for (ClassLabel r : order) last.push_back(rate_or_na(m.misclassification_rate(r), 2));
    last.push_back("N/A");
    rows.push_back(last);
    print_table(rows, fmt, out);
    out << "overall_error_rate\t" << (m.total() - m.trace()) << "/" << m.total() << " = "
        << fixed(m.overall_error_rate(), 4) << '\n';
}

void emit_summary(const GrowthSummary& s, OutputFormat fmt, std::ostream& out) {
    if (fmt == OutputFormat::Tsv) {
        out << "variables_used";
        for (const auto& v : s.variables_used) out << '\t' << v;
        out << '\n';
        out << "leaf_count\t" << s.leaf_count << '\n';
        out << "residual_mean_deviance\t" << shortest(s.residual_mean_deviance) << '\n';
        out << "misclassification_error_rate\t" << shortest(s.misclassification_error_rate)
            << '\n';
        out << "n\t" << s.n << '\n';
        return;
    }
    out << "Variables actually used in tree construction:\n ";
    if (s.variables_used.empty()) out << " (none)";
    for (const auto& v : s.variables_used) out << " \"" << v << '"';
    out << '\n';
    out << "Number of terminal nodes:  " << s.leaf_count << '\n';
    out << "Residual mean deviance:  " << fixed(s.residual_mean_deviance, 4) << '\n';
    out << "Misclassification error rate: " << fixed(s.misclassification_error_rate, 4) << " = "
        << std::lround(s.misclassification_error_rate * static_cast<double>(s.n)) << " / " << s.n
        << '\n';
}

void emit_importance(const ImportanceTable& table, OutputFormat fmt, std::ostream& out) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"predictor", "splits", "deviance_drop", "drop_per_split", "rank_dev",
                    "increase_misc_rate", "rank_mis"});
    auto shuffle_for = [&](const std::string& name) -> const ShuffleImportanceRow* {
        for (const auto& r : table.shuffle_rows) {
            if (r.predictor == name) return &r;
        }
        return nullptr;
    };
    for (const auto& dev : table.dev_rows) {
        const auto* sh = shuffle_for(dev.predictor);
        rows.push_back({dev.predictor, std::to_string(dev.split_count), fixed(dev.total_drop, 1),
                        fixed(dev.drop_per_split, 1), std::to_string(dev.rank_dev),
                        sh ? fixed(sh->gamma, 3) : "-",
                        sh ? std::to_string(sh->rank_mis) : "-"});
    }
    if (table.dev_rows.empty()) {
        // No splits: only the shuffle side has content.
        for (const auto& sh : table.shuffle_rows) {
            rows.push_back({sh.predictor, "0", "-", "-", "-", fixed(sh.gamma, 3),
                            std::to_string(sh.rank_mis)});
        }
    }
    if (table.total_splits > 0) {
        rows.push_back({"Total", std::to_string(table.total_splits), fixed(table.total_drop, 1),
                        fixed(table.overall_drop_per_split, 1), "", "", ""});
    }
    print_table(rows, fmt, out);
}

void emit_holdout(const HoldoutReport& r, OutputFormat fmt, std::ostream& out) {
    if (fmt == OutputFormat::Tsv) {
        out << "trials\t" << r.trials << '\n';
        out << "holdout_size\t" << r.holdout_size << '\n';
        out << "mean_test_error\t" << shortest(r.mean_test_error) << '\n';
        out << "baseline_error\t" << shortest(r.baseline_error) << '\n';
        return;
    }
    out << "Trials:            " << r.trials << '\n';
    out << "Holdout size:      " << r.holdout_size << '\n';
    out << "Mean test error:   " << fixed(r.mean_test_error, 3) << '\n';
    out << "Random baseline:   " << fixed(r.baseline_error, 3) << '\n';
}

void emit_groups(const std::vector<GroupSummary>& groups, OutputFormat fmt, std::ostream& out) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"group", "n", "min", "q1", "median", "q3", "max"});
    for (const auto& g : groups) {
        if (g.n == 0) {
            rows.push_back({g.label, "0", "-", "-", "-", "-", "-"});
        } else {
            rows.push_back({g.label, std::to_string(g.n), shortest(g.min), shortest(g.q1),
                            shortest(g.median), shortest(g.q3), shortest(g.max)});
        }
    }
    print_table(rows, fmt, out);
}

void emit_scatter(const ScatterTable& table, OutputFormat fmt, std::ostream& out) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"mcq", "citations", "rt"});
    for (const auto& p : table.points) {
        rows.push_back({shortest(p.mcq), std::to_string(p.citations), std::to_string(p.rt)});
    }
    print_table(rows, fmt, out);
    if (table.mean_mcq) {
        out << "mean_mcq\t" << fixed(*table.mean_mcq, 4) << '\n';
    } else {
        out << "mean_mcq\tundefined\n";
    }
}

} // namespace citree
