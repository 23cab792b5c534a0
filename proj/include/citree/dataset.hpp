#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "citree/domain.hpp"

namespace citree {

struct Row {
    std::array<double, kNumPredictors> x{};
    ClassLabel cls = ClassLabel::Low;
    CitationCount citations = 0;
    int level = 0;
};

// Immutable after construction; rows conform to predictor_schema().
struct Dataset {
    std::vector<Row> rows;

    std::size_t size() const { return rows.size(); }

    static Row make_row(const PredictorVector& v, CitationCount citations);
};

bool operator==(const Row& a, const Row& b);
bool operator==(const Dataset& a, const Dataset& b);

// ---------------------------------------------------------------------------
// CSV: 13 predictor columns (schema order) plus "citations". UTF-8, comma
// separated, header required, '.' decimal separator.
// ---------------------------------------------------------------------------

Dataset parse_dataset_csv(std::istream& in);
void emit_dataset_csv(const Dataset& d, std::ostream& out);

// ---------------------------------------------------------------------------
// Stratified sampling per citation level.
// ---------------------------------------------------------------------------

struct Stratum {
    int level = 0;
    long population = 0; // 0 = unspecified; validated against the dataset otherwise
    long take = 0;
};

struct StratumSpec {
    std::vector<Stratum> strata;

    // The reference 305-of-3907 sampling design (level 5 down to 0).
    static StratumSpec reference_design();
};

// Simple random sample without replacement within each level stratum,
// Fisher-Yates partial shuffle per stratum. Output order: strata by
// descending level, then draw order. Deterministic in the seed.
Dataset stratified_sample(const Dataset& d, const StratumSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic corpora for testing: rows drawn uniformly over simple predictor
// ranges, labeled by a planted region rule plus label noise.
// ---------------------------------------------------------------------------

struct RuleCondition {
    int predictor = 0;  // schema index
    double lo = -1e300; // region is lo < x <= hi
    double hi = 1e300;
};

struct RuleRegion {
    std::vector<RuleCondition> conditions; // conjunction
    std::array<double, kNumClasses> class_probs{};
};

struct SynthConfig {
    long n = 0;
    std::uint64_t seed = 0;
    std::vector<RuleRegion> regions; // first match wins; conflicts rejected
    std::array<double, kNumClasses> default_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double noise = 0.0; // probability of replacing the label by a uniform class
};

// Parses e.g. "ref>20=high;else=low" or "pg<=12=0.2,0.5,0.3;...".
SynthConfig parse_rule(const std::string& text);

Dataset generate_synthetic(const SynthConfig& cfg);

// ---------------------------------------------------------------------------
// Raw paper-record CSV for the `derive` subcommand. Author-list fields are
// ';'-joined within a cell.
// ---------------------------------------------------------------------------

std::vector<PaperRecord> parse_records_csv(std::istream& in);
Dataset derive_dataset(const std::vector<PaperRecord>& records, const std::string& home_country);

} // namespace citree
