#pragma once

#include <iosfwd>
#include <string>

#include "citree/eval.hpp"
#include "citree/importance.hpp"
#include "citree/tree.hpp"

namespace citree {

enum class OutputFormat { Tsv, AlignedText };

OutputFormat format_from_name(const std::string& name); // "tsv" | "text"

// Rows = predicted class (high, median, low), columns = real
// class, with the rate margins.
void emit_confusion(const ConfusionMatrix& m, OutputFormat fmt, std::ostream& out);

// Text mode mirrors the familiar tree-summary block field names.
void emit_summary(const GrowthSummary& s, OutputFormat fmt, std::ostream& out);

// Split counts, deviance drops, both ranks. Rates shown at 3
// decimals; deviance figures at 1 decimal in text mode.
void emit_importance(const ImportanceTable& table, OutputFormat fmt, std::ostream& out);

void emit_holdout(const HoldoutReport& r, OutputFormat fmt, std::ostream& out);

void emit_groups(const std::vector<GroupSummary>& groups, OutputFormat fmt, std::ostream& out);

void emit_scatter(const ScatterTable& table, OutputFormat fmt, std::ostream& out);

} // namespace citree
